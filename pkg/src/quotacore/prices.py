"""Stage-indexed personalized prices for a trading trace, and checks of the
three price properties.

The last stage is priced 1 and every earlier stage is priced one more than
the sum of all later stages, so an item bought at stage k costs more than
everything bought afterwards combined.  Prices are exact Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .model import (
    Allocation,
    CapInstance,
    DirectedNetwork,
    NetworkInstance,
    StageTrace,
)


class PriceTableMismatch(ValueError):
    pass


def stage_prices(stages: int) -> list[int]:
    """Prices p_1..p_K from the descending recurrence (equals 2**(K-k))."""
    if stages < 0:
        raise ValueError("stage count must be non-negative")
    later: list[int] = []
    total = 0
    for _ in range(stages):
        # p_K = 1, then p_{L-1} = p_L + ... + p_K + 1
        later.append(total + 1)
        total += later[-1]
    return later[::-1]


@dataclass(frozen=True)
class PriceTable:
    """``personalized[(i, j)]`` is what agent i pays for item j; ``market[j]``
    is the least personalized price paid for j, or None if nobody holds j."""

    stage_prices: tuple[int, ...]
    personalized: dict[tuple[int, int], int]
    market: dict[int, int | None]

    def with_price(self, i: int, j: int, value: int) -> PriceTable:
        """Copy with one personalized entry replaced and market prices redone."""
        personalized = dict(self.personalized)
        if (i, j) not in personalized:
            raise KeyError((i, j))
        personalized[(i, j)] = value
        return PriceTable(self.stage_prices, personalized, _market(personalized, self.market))


def _market(personalized: dict[tuple[int, int], int], universe: Sequence[int] | dict) -> dict[int, int | None]:
    market: dict[int, int | None] = {j: None for j in universe}
    for (_, j), price in personalized.items():
        cur = market.get(j)
        market[j] = price if cur is None else min(cur, price)
    return market


def personalized_prices(trace: StageTrace, universe: int | None = None) -> PriceTable:
    """Price every transfer at its stage price.

    ``universe`` is the number of item ids; items nobody received are listed
    as unpriced.  Works for allocation-problem traces as well.
    """
    K = trace.stages
    prices = stage_prices(K)
    personalized: dict[tuple[int, int], int] = {}
    for t in trace.transfers:
        key = (t.receiver, t.item)
        if key in personalized:
            raise ValueError(f"duplicate transfer of item {t.item} to agent {t.receiver}")
        if not 1 <= t.stage <= K:
            raise ValueError(f"transfer {t} has a stage outside 1..{K}")
        personalized[key] = prices[t.stage - 1]
    if universe is None:
        universe = 1 + max((t.item for t in trace.transfers), default=-1)
    return PriceTable(tuple(prices), personalized, _market(personalized, range(universe)))


@dataclass
class PropertyResult:
    name: str
    passed: bool = True
    counterexamples: list[dict] = field(default_factory=list)

    def fail(self, **detail) -> None:
        self.passed = False
        self.counterexamples.append(detail)


@dataclass
class PriceReport:
    """One result per property: ``"i"`` (no cheaper bundle of worse items),
    ``"ii"`` (preferred unheld items cost more) and ``"iii"`` (budget balance)."""

    results: dict[str, PropertyResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def as_dict(self) -> dict:
        return {
            name: {"pass": r.passed, "counterexamples": r.counterexamples}
            for name, r in sorted(self.results.items())
        }


def _verify(
    bundles: Sequence[frozenset[int]],
    ranks: Sequence[Sequence[int]],
    preferences: Sequence[Sequence[int]],
    owner: Sequence[int],
    table: PriceTable,
) -> PriceReport:
    expected = {(i, j) for i, b in enumerate(bundles) for j in b}
    if set(table.personalized) != expected:
        missing = sorted(expected - set(table.personalized))
        extra = sorted(set(table.personalized) - expected)
        raise PriceTableMismatch(f"price table does not match holdings: missing {missing}, extra {extra}")

    pay = table.personalized
    market = table.market

    def dearer(j: int, amount: int) -> bool:
        # unpriced items act as +infinity
        price = market.get(j)
        return price is None or price > amount

    r1, r2, r3 = PropertyResult("i"), PropertyResult("ii"), PropertyResult("iii")
    for i, held in enumerate(bundles):
        rk = ranks[i]
        for j in preferences[i]:
            if j in held:
                continue
            worse = [h for h in held if rk[j] < rk[h]]
            if not worse:
                continue
            total = sum(pay[(i, h)] for h in worse)
            if not dearer(j, total):
                r1.fail(agent=i, item=j, market=market.get(j), bundle_total=total)
            for h in worse:
                if not dearer(j, pay[(i, h)]):
                    r2.fail(agent=i, held=h, preferred=j, market=market.get(j), paid=pay[(i, h)])

    paid = [0] * len(bundles)
    earned = [0] * len(bundles)
    for (i, j), price in pay.items():
        paid[i] += price
        earned[owner[j]] += price
    for i in range(len(bundles)):
        if paid[i] != earned[i]:
            r3.fail(agent=i, paid=paid[i], received=earned[i])
    return PriceReport({"i": r1, "ii": r2, "iii": r3})


def verify_price_properties(inst: NetworkInstance, net: DirectedNetwork, table: PriceTable) -> PriceReport:
    return _verify(net.assignments, inst.ranks, inst.preferences, range(inst.n), table)


def verify_cap_price_properties(cap: CapInstance, alloc: Allocation, table: PriceTable) -> PriceReport:
    """Same three checks for an allocation problem; an item's payments go to
    its original owner.  The construction is only claimed for networks."""
    return _verify(alloc.bundles, cap.ranks, cap.preferences, cap.owner, table)


def stage_balance_violations(trace: StageTrace, owner: Sequence[int] | None = None) -> list[tuple[int, int]]:
    """(stage, agent) pairs where the agent did not pay and get paid exactly
    once at that stage.  Empty for any trace produced by the solvers."""
    out = []
    for stage, moves in sorted(trace.by_stage().items()):
        paid: dict[int, int] = {}
        got: dict[int, int] = {}
        for t in moves:
            paid[t.receiver] = paid.get(t.receiver, 0) + 1
            src = t.item if owner is None else owner[t.item]
            got[src] = got.get(src, 0) + 1
        for agent in sorted(set(paid) | set(got)):
            if paid.get(agent) != 1 or got.get(agent) != 1:
                out.append((stage, agent))
    return out
