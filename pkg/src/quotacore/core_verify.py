"""Blocking coalitions and core membership, by exhaustive search.

Two blocking rules are supported for network problems:

``"hyper"``
    A member i of a coalition is better off with item j iff j is not in A(i)
    and her bundle does not dominate j under the bundle-vs-item relation
    (j in S, or every k in S is preferred to j).  An empty bundle dominates
    everything, so agents holding nothing can never block.

``"quota"`` (default)
    As ``"hyper"``, but an agent still below her quota also gains from any
    item she does not hold.  This is the rule under which the two-agent
    example with quotas (1, 2) has a unique core network.

For allocation problems bundles always fill the quota exactly, so the two
rules coincide and only the bundle-vs-item relation is used.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Mapping, Sequence

from .model import (
    Allocation,
    CapInstance,
    DirectedNetwork,
    NetworkInstance,
    is_feasible_allocation,
    is_feasible_network,
)

BlockingRule = Literal["quota", "hyper"]
RULES: tuple[str, ...] = ("quota", "hyper")
DEFAULT_SEARCH_LIMIT = 10**7


class SearchSpaceTooLarge(RuntimeError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"search space too large: {size} candidate networks (limit {limit})")


@dataclass(frozen=True)
class BlockingCertificate:
    """Coalition ``M``, its permutation and the evidence for each member.

    ``permutation[k]`` is p(coalition[k]); ``witnesses[k]`` is a held item the
    member likes less than what she receives (None when she only gains through
    unused quota); ``offers[k]`` is the item x(coalition[k]) she contributes
    from her endowment (allocation problems only).
    """

    coalition: tuple[int, ...]
    permutation: tuple[int, ...]
    witnesses: tuple[int | None, ...]
    offers: tuple[int, ...] | None = None

    def mapping(self) -> dict[int, int]:
        return dict(zip(self.coalition, self.permutation))


def dominates(pref: Sequence[int], bundle: Iterable[int], candidate: int) -> bool:
    """Bundle-vs-item relation: ``candidate in bundle`` or every bundle element
    is weakly preferred to ``candidate``.  Vacuously true for an empty bundle."""
    bundle = set(bundle)
    if candidate in bundle:
        return True
    order = list(pref)
    c = order.index(candidate)
    return all(order.index(k) <= c for k in bundle)


def _check_rule(rule: str) -> None:
    if rule not in RULES:
        raise ValueError(f"unknown blocking rule {rule!r}; expected one of {RULES}")


def _worst(ranks: Sequence[int], bundle: Iterable[int]) -> int | None:
    return max(bundle, key=ranks.__getitem__, default=None)


def _network_gain(inst: NetworkInstance, net: DirectedNetwork, i: int, j: int, rule: str) -> tuple[bool, int | None]:
    """Whether agent i gains by receiving j, and a worse held item if any."""
    held = net.assignments[i]
    if j in held:
        return False, None
    ranks = inst.ranks[i]
    worst = _worst(ranks, held)
    if worst is not None and ranks[j] < ranks[worst]:
        return True, worst
    if rule == "quota" and len(held) < inst.quotas[i]:
        return True, None
    return False, None


def network_wants(inst: NetworkInstance, net: DirectedNetwork, rule: BlockingRule = "quota") -> list[frozenset[int]]:
    """``wants[i]``: agents whose items would make i better off."""
    _check_rule(rule)
    out = []
    for i in range(inst.n):
        held = net.assignments[i]
        ranks = inst.ranks[i]
        if rule == "quota" and len(held) < inst.quotas[i]:
            out.append(frozenset(j for j in range(inst.n) if j not in held))
            continue
        worst = _worst(ranks, held)
        if worst is None:
            out.append(frozenset())
            continue
        cut = ranks[worst]
        out.append(frozenset(j for j in inst.preferences[i][:cut] if j not in held))
    return out


def _require_bijection(coalition: Sequence[int], perm: Mapping[int, int]) -> None:
    members = set(coalition)
    if not members:
        raise ValueError("coalition must be non-empty")
    if set(perm) != members or set(perm.values()) != members:
        raise ValueError(f"permutation is not a bijection on coalition {sorted(members)}")


def check_blocking(
    inst: NetworkInstance,
    net: DirectedNetwork,
    coalition: Iterable[int],
    perm: Mapping[int, int],
    rule: BlockingRule = "quota",
) -> BlockingCertificate | None:
    """Certificate iff every member gains from the item ``perm`` gives her."""
    _check_rule(rule)
    members = tuple(sorted(coalition))
    _require_bijection(members, perm)
    witnesses = []
    for i in members:
        gains, y = _network_gain(inst, net, i, perm[i], rule)
        if not gains:
            return None
        witnesses.append(y)
    return BlockingCertificate(members, tuple(perm[i] for i in members), tuple(witnesses))


def _search(n: int, wants: Sequence[frozenset[int]], max_size: int | None) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    # coalitions by size, then lexicographically; permutations lexicographically
    eligible = [i for i in range(n) if wants[i]]
    top = len(eligible) if max_size is None else min(max_size, len(eligible))
    for k in range(1, top + 1):
        for members in itertools.combinations(eligible, k):
            for images in itertools.permutations(members):
                if all(j in wants[i] for i, j in zip(members, images)):
                    return members, images
    return None


def find_blocking_coalition(
    inst: NetworkInstance,
    net: DirectedNetwork,
    max_size: int | None = None,
    rule: BlockingRule = "quota",
) -> BlockingCertificate | None:
    """First blocking coalition in canonical order, or None.

    Cost grows like sum_k C(n, k) k!; ``max_size`` bounds the coalition size.
    """
    wants = network_wants(inst, net, rule)
    hit = _search(inst.n, wants, max_size)
    if hit is None:
        return None
    members, images = hit
    return check_blocking(inst, net, members, dict(zip(members, images)), rule)


def has_blocking_cycle(wants: Sequence[Iterable[int]]) -> bool:
    """A coalition blocks iff the "i would gain from j" digraph has a cycle.

    Any blocking permutation decomposes into cycles of that digraph, and any
    cycle is itself a blocking coalition.  Polynomial; used as a cross-check
    on the exhaustive search.
    """
    n = len(wants)
    color = [0] * n  # 0 new, 1 on stack, 2 done
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(sorted(wants[root])))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            for v in it:
                if color[v] == 1:
                    return True
                if color[v] == 0:
                    color[v] = 1
                    stack.append((v, iter(sorted(wants[v]))))
                    break
            else:
                color[u] = 2
                stack.pop()
    return False


def in_core(inst: NetworkInstance, net: DirectedNetwork, rule: BlockingRule = "quota") -> bool:
    if not is_feasible_network(inst, net):
        return False
    return find_blocking_coalition(inst, net, None, rule) is None


def search_space_size(inst: NetworkInstance) -> int:
    """Number of candidate networks with ``|A(i)| <= q(i)``."""
    n = inst.n
    return math.prod(sum(math.comb(n, k) for k in range(q + 1)) for q in inst.quotas)


def iter_feasible_networks(
    inst: NetworkInstance,
    balanced: bool = True,
    limit: int = DEFAULT_SEARCH_LIMIT,
) -> Iterator[DirectedNetwork]:
    """Every feasible network (optionally only balanced ones), in lexicographic order."""
    size = search_space_size(inst)
    if size > limit:
        raise SearchSpaceTooLarge(size, limit)
    n = inst.n
    choices = [
        [frozenset(c) for k in range(q + 1) for c in itertools.combinations(range(n), k)]
        for q in inst.quotas
    ]
    for rows in itertools.product(*choices):
        if balanced:
            indeg = [0] * n
            for row in rows:
                for j in row:
                    indeg[j] += 1
            if any(len(row) != d for row, d in zip(rows, indeg)):
                continue
        yield DirectedNetwork(rows)


def enumerate_core(
    inst: NetworkInstance,
    mode: Literal["balanced", "all"] = "balanced",
    rule: BlockingRule = "quota",
    limit: int = DEFAULT_SEARCH_LIMIT,
) -> list[DirectedNetwork]:
    """All unblocked feasible networks (balanced ones only by default)."""
    if mode not in ("balanced", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_rule(rule)
    core = []
    for net in iter_feasible_networks(inst, balanced=(mode == "balanced"), limit=limit):
        if _search(inst.n, network_wants(inst, net, rule), None) is None:
            core.append(net)
    core.sort(key=DirectedNetwork.as_lists)
    return core


# -- allocation problems -----------------------------------------------------


def _best_offer(cap: CapInstance, alloc: Allocation, i: int, j: int) -> tuple[int, int] | None:
    """i's most preferred item of S(j) that A(i) does not dominate, with a
    held item she likes less."""
    held = alloc.bundles[i]
    ranks = cap.ranks[i]
    worst = _worst(ranks, held)
    if worst is None:
        return None
    best = None
    for g in cap.endowments[j]:
        if g not in held and ranks[g] < ranks[worst] and (best is None or ranks[g] < ranks[best]):
            best = g
    return None if best is None else (best, worst)


def cap_wants(cap: CapInstance, alloc: Allocation) -> list[frozenset[int]]:
    return [
        frozenset(j for j in range(cap.n) if _best_offer(cap, alloc, i, j) is not None)
        for i in range(cap.n)
    ]


def cap_check_blocking(
    cap: CapInstance,
    alloc: Allocation,
    coalition: Iterable[int],
    perm: Mapping[int, int],
) -> BlockingCertificate | None:
    """Certificate iff every member i can be offered some x(p(i)) in S(p(i))
    that her bundle does not dominate.  Offers are chosen greedily."""
    members = tuple(sorted(coalition))
    _require_bijection(members, perm)
    offers: dict[int, int] = {}
    witnesses = []
    for i in members:
        hit = _best_offer(cap, alloc, i, perm[i])
        if hit is None:
            return None
        offers[perm[i]] = hit[0]
        witnesses.append(hit[1])
    return BlockingCertificate(
        members,
        tuple(perm[i] for i in members),
        tuple(witnesses),
        tuple(offers[j] for j in members),
    )


def cap_find_blocking(
    cap: CapInstance,
    alloc: Allocation,
    max_size: int | None = None,
) -> BlockingCertificate | None:
    hit = _search(cap.n, cap_wants(cap, alloc), max_size)
    if hit is None:
        return None
    members, images = hit
    return cap_check_blocking(cap, alloc, members, dict(zip(members, images)))


def cap_in_core(cap: CapInstance, alloc: Allocation) -> bool:
    if not is_feasible_allocation(cap, alloc):
        return False
    return cap_find_blocking(cap, alloc) is None


__all__ = [
    "BlockingCertificate",
    "BlockingRule",
    "SearchSpaceTooLarge",
    "cap_check_blocking",
    "cap_find_blocking",
    "cap_in_core",
    "cap_wants",
    "check_blocking",
    "dominates",
    "enumerate_core",
    "find_blocking_coalition",
    "has_blocking_cycle",
    "in_core",
    "iter_feasible_networks",
    "network_wants",
    "search_space_size",
]
