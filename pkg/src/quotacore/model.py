"""Problem instances, outcomes and the feasibility predicates shared by both
problem families.

Agents and items are dense 0-based integers.  A preference is a full strict
ranking of the id universe, most preferred first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence


class InvalidInstanceError(ValueError):
    """Raised when an instance or outcome breaks a structural rule."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


Preference = Sequence[int]


def rank(pref: Preference, x: int) -> int:
    """Position of ``x`` in ``pref`` (0 = most preferred)."""
    try:
        return list(pref).index(x)
    except ValueError:
        raise ValueError(f"id out of range: {x}") from None


def _rank_table(pref: Sequence[int]) -> list[int]:
    table = [0] * len(pref)
    for pos, x in enumerate(pref):
        table[x] = pos
    return table


def _permutation_violations(owner: str, pref: Sequence[int], size: int) -> list[str]:
    out = []
    seen: set[int] = set()
    for x in pref:
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < size:
            out.append(f"id {x!r} out of range in preference of {owner}")
        elif x in seen:
            out.append(f"duplicate id {x} in preference of {owner}")
        seen.add(x)
    missing = sorted(set(range(size)) - seen)
    if missing:
        out.append(f"preference of {owner} omits ids {missing}")
    return out


@dataclass(frozen=True)
class NetworkInstance:
    """A directed network problem: quotas ``q(i)`` and rankings over agents."""

    quotas: tuple[int, ...]
    preferences: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "quotas", tuple(self.quotas))
        object.__setattr__(self, "preferences", tuple(tuple(p) for p in self.preferences))

    @property
    def n(self) -> int:
        return len(self.quotas)

    @cached_property
    def ranks(self) -> list[list[int]]:
        """``ranks[i][j]`` is agent i's rank of agent j's item."""
        return [_rank_table(p) for p in self.preferences]

    def prefers(self, i: int, a: int, b: int) -> bool:
        """True iff agent ``i`` strictly prefers ``a`` to ``b``."""
        r = self.ranks[i]
        return r[a] < r[b]


def validate_network_instance(inst: NetworkInstance) -> list[str]:
    """Return the list of broken invariants; empty means valid."""
    n = inst.n
    out: list[str] = []
    if n < 1:
        out.append("instance needs at least one agent")
    if len(inst.preferences) != n:
        out.append(f"expected {n} preferences, got {len(inst.preferences)}")
    for i, q in enumerate(inst.quotas):
        if not isinstance(q, int) or isinstance(q, bool):
            out.append(f"q({i})={q!r} is not an integer")
        elif q < 0:
            out.append(f"q({i})={q} is negative")
        elif q > n:
            out.append(f"q({i})={q} exceeds n={n}")
    for i, pref in enumerate(inst.preferences):
        # fast path for the common well-formed case
        if len(pref) == n and set(pref) == set(range(n)):
            continue
        out.extend(_permutation_violations(f"agent {i}", pref, n))
    return out


def require_valid_network(inst: NetworkInstance) -> None:
    violations = validate_network_instance(inst)
    if violations:
        raise InvalidInstanceError(violations)


@dataclass(frozen=True)
class DirectedNetwork:
    """``assignments[i]`` is the set of agents whose items agent i consumes."""

    assignments: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignments", tuple(frozenset(a) for a in self.assignments))

    @classmethod
    def from_lists(cls, rows: Iterable[Iterable[int]]) -> DirectedNetwork:
        return cls(tuple(frozenset(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.assignments)

    def indegrees(self) -> list[int]:
        deg = [0] * self.n
        for row in self.assignments:
            for j in row:
                deg[j] += 1
        return deg

    def as_lists(self) -> list[list[int]]:
        return [sorted(a) for a in self.assignments]


def _check_network_shape(inst: NetworkInstance, net: DirectedNetwork) -> None:
    if net.n != inst.n:
        raise InvalidInstanceError([f"network has {net.n} agents, instance has {inst.n}"])
    for i, row in enumerate(net.assignments):
        for j in row:
            if not isinstance(j, int) or not 0 <= j < inst.n:
                raise InvalidInstanceError([f"A({i}) references unknown agent {j!r}"])


def is_feasible_network(inst: NetworkInstance, net: DirectedNetwork) -> bool:
    """``|A(i)| <= q(i)`` for every agent."""
    _check_network_shape(inst, net)
    return all(len(a) <= q for a, q in zip(net.assignments, inst.quotas))


def is_balanced(net: DirectedNetwork) -> bool:
    """Every agent's item is consumed exactly as often as she consumes."""
    indeg = net.indegrees()
    return all(len(a) == d for a, d in zip(net.assignments, indeg))


@dataclass(frozen=True)
class CapInstance:
    """A combinatorial allocation problem with endowments ``S(i)`` partitioning
    the items ``0..n_items-1``; preferences rank items."""

    n_items: int
    endowments: tuple[frozenset[int], ...]
    preferences: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "endowments", tuple(frozenset(s) for s in self.endowments))
        object.__setattr__(self, "preferences", tuple(tuple(p) for p in self.preferences))

    @property
    def n(self) -> int:
        return len(self.endowments)

    @property
    def quotas(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.endowments)

    @cached_property
    def owner(self) -> list[int]:
        """``owner[g]`` is the original endower of item g."""
        own = [-1] * self.n_items
        for i, s in enumerate(self.endowments):
            for g in s:
                own[g] = i
        return own

    @cached_property
    def ranks(self) -> list[list[int]]:
        return [_rank_table(p) for p in self.preferences]


def validate_cap_instance(cap: CapInstance) -> list[str]:
    m = cap.n_items
    out: list[str] = []
    if cap.n < 1:
        out.append("instance needs at least one agent")
    if m < 1:
        out.append("instance needs at least one item")
    if len(cap.preferences) != cap.n:
        out.append(f"expected {cap.n} preferences, got {len(cap.preferences)}")
    seen: dict[int, int] = {}
    for i, s in enumerate(cap.endowments):
        if not s:
            out.append(f"S({i}) is empty")
        for g in sorted(s, key=repr):
            if not isinstance(g, int) or not 0 <= g < m:
                out.append(f"S({i}) references unknown item {g!r}")
            elif g in seen:
                out.append(f"item {g} endowed to both agent {seen[g]} and agent {i}")
            else:
                seen[g] = i
    unowned = sorted(set(range(m)) - set(seen))
    if unowned:
        out.append(f"items {unowned} belong to no endowment")
    for i, pref in enumerate(cap.preferences):
        if len(pref) == m and set(pref) == set(range(m)):
            continue
        out.extend(_permutation_violations(f"agent {i}", pref, m))
    return out


def require_valid_cap(cap: CapInstance) -> None:
    violations = validate_cap_instance(cap)
    if violations:
        raise InvalidInstanceError(violations)


@dataclass(frozen=True)
class Allocation:
    """``bundles[i]`` is the set of items agent i receives."""

    bundles: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bundles", tuple(frozenset(b) for b in self.bundles))

    @classmethod
    def from_lists(cls, rows: Iterable[Iterable[int]]) -> Allocation:
        return cls(tuple(frozenset(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.bundles)

    def as_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.bundles]


def is_exclusive(alloc: Allocation) -> bool:
    total = sum(len(b) for b in alloc.bundles)
    return len(frozenset().union(*alloc.bundles)) == total


def is_feasible_allocation(cap: CapInstance, alloc: Allocation) -> bool:
    """Exclusive, and ``|A(i)| = q(i)`` exactly for every agent."""
    if alloc.n != cap.n:
        raise InvalidInstanceError([f"allocation has {alloc.n} agents, instance has {cap.n}"])
    for i, b in enumerate(alloc.bundles):
        for g in b:
            if not isinstance(g, int) or not 0 <= g < cap.n_items:
                raise InvalidInstanceError([f"A({i}) references unknown item {g!r}"])
    if any(len(b) != q for b, q in zip(alloc.bundles, cap.quotas)):
        return False
    return is_exclusive(alloc)


class Transfer(NamedTuple):
    receiver: int
    item: int
    stage: int


@dataclass(frozen=True)
class StageTrace:
    """Every transfer made by a staged trading run, ordered by (stage, receiver)."""

    transfers: tuple[Transfer, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "transfers", tuple(Transfer(*t) for t in self.transfers))

    @property
    def stages(self) -> int:
        """Last stage at which a transfer happened (0 if none)."""
        return max((t.stage for t in self.transfers), default=0)

    def by_stage(self) -> dict[int, list[Transfer]]:
        out: dict[int, list[Transfer]] = {}
        for t in self.transfers:
            out.setdefault(t.stage, []).append(t)
        return out
