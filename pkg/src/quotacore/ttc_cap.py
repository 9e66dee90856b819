"""Staged top-trading-cycles for exclusive combinatorial allocation problems.

Same stage loop as the network solver, except that an agent points at the
original owner of her best untransferred item, receives exactly that item
when her cycle trades, and every transferred item is struck for everyone.
Giving and receiving happen together, so an agent's remaining quota always
equals her number of untransferred endowed items and the run ends with every
quota filled.
"""

from __future__ import annotations

from .model import Allocation, CapInstance, StageTrace, Transfer, require_valid_cap
from .ttc_network import _CycleWalker


def solve_cap(cap: CapInstance) -> tuple[Allocation, StageTrace]:
    require_valid_cap(cap)
    n, m = cap.n, cap.n_items
    prefs = cap.preferences
    owner = cap.owner
    remaining = list(cap.quotas)
    taken = [False] * m
    pos = [0] * n
    head = [-1] * n  # item each agent currently points for
    watchers: list[set[int]] = [set() for _ in range(m)]
    received: list[list[int]] = [[] for _ in range(n)]
    transfers: list[Transfer] = []
    walker = _CycleWalker()

    target = [-1] * n
    dirty = set(range(n))
    stage = 0
    while dirty:
        for u in dirty:
            pref = prefs[u]
            p = pos[u]
            # an active agent still owns an untransferred item, so this stops
            while taken[pref[p]]:
                p += 1
            pos[u] = p
            head[u] = pref[p]
            target[u] = owner[pref[p]]
            watchers[pref[p]].add(u)
        stage += 1
        cycles = walker.cycles(sorted(dirty), target)
        assert cycles, "pointer graph without a cycle"
        dirty = set()
        for cycle in cycles:
            for u in cycle:
                g = head[u]
                received[u].append(g)
                transfers.append(Transfer(u, g, stage))
                remaining[u] -= 1
                taken[g] = True
                dirty.update(watchers[g])
                watchers[g].clear()
                if remaining[u] == 0:
                    target[u] = -1
        dirty = {u for u in dirty if remaining[u] > 0}
    assert not any(remaining), "run ended with unfilled quotas"

    transfers.sort(key=lambda t: (t.stage, t.receiver))
    return Allocation.from_lists(received), StageTrace(tuple(transfers))
