"""Staged top-trading-cycles with quotas for directed network problems.

Every active agent points at the owner of her best remaining item; every
cycle of the pointer graph trades at once; receivers strike the received item
and use up one unit of quota.  Agents whose quota runs out withdraw and are
struck from all lists.  An agent whose list runs dry while she still has
quota can never trade again, so she is struck too (possibly cascading).

Each stage only re-examines agents whose pointer changed: a cycle made only
of unchanged pointers would already have traded in the previous stage.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .model import (
    DirectedNetwork,
    NetworkInstance,
    StageTrace,
    Transfer,
    require_valid_network,
)


def _canonical(cycle: list[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


class _CycleWalker:
    """Pointer-chasing cycle finder over a (possibly partial) functional graph.

    ``mark[u]`` holds the id of the walk that first visited u, so a node seen
    by an earlier walk of the same round is known to lead nowhere new.
    """

    def __init__(self) -> None:
        self.mark: dict[int, int] = {}
        self.walks = 0

    def cycles(self, starts: Iterable[int], target: Mapping[int, int] | Sequence[int]) -> list[tuple[int, ...]]:
        round_floor = self.walks + 1
        mark = self.mark
        found = []
        for s in starts:
            if mark.get(s, 0) >= round_floor:
                continue
            self.walks += 1
            walk = self.walks
            path = []
            u = s
            while True:
                m = mark.get(u, 0)
                if m == walk:
                    found.append(_canonical(path[path.index(u):]))
                    break
                if m >= round_floor:
                    break
                mark[u] = walk
                path.append(u)
                u = _next(target, u)
                if u is None:
                    break
        found.sort()
        return found


def _next(target: Mapping[int, int] | Sequence[int], u: int) -> int | None:
    if isinstance(target, Mapping):
        return target.get(u)
    v = target[u]
    return v if v >= 0 else None


def find_cycles(pointers: Mapping[int, int]) -> list[tuple[int, ...]]:
    """All cycles of the functional graph ``i -> pointers[i]``.

    Agents absent from the map point nowhere, so chains reaching them are not
    cycles.  Each cycle starts at its smallest member; cycles are sorted.

    >>> find_cycles({0: 1, 1: 0, 2: 2})
    [(0, 1), (2,)]
    """
    return _CycleWalker().cycles(sorted(pointers), pointers)


def solve_network(inst: NetworkInstance) -> tuple[DirectedNetwork, StageTrace]:
    """Run the staged quota TTC procedure.

    Returns the network of received items and the per-stage transfer trace.
    The result is feasible, balanced and unblocked.
    """
    require_valid_network(inst)
    n = inst.n
    prefs = inst.preferences
    remaining = list(inst.quotas)
    gone = [q == 0 for q in remaining]  # struck from every list
    pos = [0] * n
    target = [-1] * n
    pointed_by: list[set[int]] = [set() for _ in range(n)]
    received: list[list[int]] = [[] for _ in range(n)]
    transfers: list[Transfer] = []
    walker = _CycleWalker()

    dirty = [i for i in range(n) if not gone[i]]
    stage = 0
    while True:
        repointed = _repoint(dirty, prefs, pos, gone, target, pointed_by, n)
        if not repointed:
            assert all(gone), "active agents left without a pointer"
            break
        stage += 1
        cycles = walker.cycles(sorted(repointed), target)
        # an active agent always points at an active one, so a cycle exists
        assert cycles, "pointer graph without a cycle"
        dirty = []
        exhausted = []
        for cycle in cycles:
            for u in cycle:
                v = target[u]
                received[u].append(v)
                transfers.append(Transfer(u, v, stage))
                remaining[u] -= 1
                pos[u] += 1
                dirty.append(u)
                if remaining[u] == 0:
                    exhausted.append(u)
        for u in exhausted:
            gone[u] = True
            dirty.extend(pointed_by[u])
            pointed_by[u].clear()

    transfers.sort(key=lambda t: (t.stage, t.receiver))
    return DirectedNetwork.from_lists(received), StageTrace(tuple(transfers))


def _repoint(
    dirty: list[int],
    prefs: Sequence[Sequence[int]],
    pos: list[int],
    gone: list[bool],
    target: list[int],
    pointed_by: list[set[int]],
    n: int,
) -> set[int]:
    """Advance every dirty agent to her best remaining agent.

    Agents whose list runs out are struck, and whoever pointed at them is
    re-queued.  Returns the still-active agents whose pointer was refreshed.
    """
    stack = list(dirty)
    fresh: set[int] = set()
    while stack:
        u = stack.pop()
        old = target[u]
        if old >= 0:
            pointed_by[old].discard(u)
        if gone[u]:
            target[u] = -1
            fresh.discard(u)
            continue
        pref = prefs[u]
        p = pos[u]
        while p < n and gone[pref[p]]:
            p += 1
        pos[u] = p
        if p == n:
            gone[u] = True
            target[u] = -1
            fresh.discard(u)
            stack.extend(pointed_by[u])
            pointed_by[u].clear()
        else:
            t = pref[p]
            target[u] = t
            pointed_by[t].add(u)
            fresh.add(u)
    return fresh
