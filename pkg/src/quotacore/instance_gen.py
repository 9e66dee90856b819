"""Seeded instance generation and the published example fixtures.

Generation algorithm (kept fixed so fixtures stay stable):

* ``random.Random(seed)`` (Mersenne Twister) drives everything.
* Network: for agents 0..n-1 in order draw ``q(i) = randint(1, min(max_quota, n))``;
  then for agents 0..n-1 in order shuffle a fresh ``list(range(n))``.
* Allocation problem: for agents in order draw ``|S(i)| = randint(1, max_endowment)``;
  shuffle ``list(range(m))`` and cut it into consecutive blocks, sorted per
  agent; then shuffle a fresh ``list(range(m))`` per agent for preferences.

``random.shuffle`` is an unbiased Fisher-Yates shuffle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Literal, Sequence

from .model import CapInstance, NetworkInstance


@dataclass(frozen=True)
class GenConfig:
    kind: Literal["network", "cap"] = "network"
    n: int = 5
    max_quota: int = 1
    max_endowment: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.kind not in ("network", "cap"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.max_quota < 1 or self.max_endowment < 1:
            raise ValueError("max_quota and max_endowment must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def random_network_instance(cfg: GenConfig) -> NetworkInstance:
    cfg.validate()
    if cfg.kind != "network":
        raise ValueError("config is not for a network instance")
    rng = random.Random(cfg.seed)
    n = cfg.n
    top = min(cfg.max_quota, n)
    quotas = [rng.randint(1, top) for _ in range(n)]
    prefs = []
    for _ in range(n):
        order = list(range(n))
        rng.shuffle(order)
        prefs.append(order)
    return NetworkInstance(quotas, prefs)


def random_cap_instance(cfg: GenConfig) -> CapInstance:
    cfg.validate()
    if cfg.kind != "cap":
        raise ValueError("config is not for an allocation instance")
    rng = random.Random(cfg.seed)
    sizes = [rng.randint(1, cfg.max_endowment) for _ in range(cfg.n)]
    m = sum(sizes)
    items = list(range(m))
    rng.shuffle(items)
    endowments = []
    start = 0
    for size in sizes:
        endowments.append(sorted(items[start:start + size]))
        start += size
    prefs = []
    for _ in range(cfg.n):
        order = list(range(m))
        rng.shuffle(order)
        prefs.append(order)
    return CapInstance(m, endowments, prefs)


_EXAMPLE_QUOTAS = {1: (1, 3, 3), 2: (1, 4, 4, 4), 3: (1, 2)}

# Examples 1 and 2 make claims that hold for every preference profile.
PREFERENCE_FREE_EXAMPLES = frozenset({1, 2})


def paper_example(example: int, preferences: Sequence[Sequence[int]] | None = None) -> NetworkInstance:
    """The published quota examples as instances.

    Examples 1 and 2 default to identity rankings (their claims do not depend
    on preferences).  Example 3 fixes agent 0's ranking to ``[0, 1]``; agent 1
    defaults to ``[0, 1]`` as well.
    """
    if example not in _EXAMPLE_QUOTAS:
        raise ValueError(f"unknown example {example!r}; expected 1, 2 or 3")
    quotas = _EXAMPLE_QUOTAS[example]
    n = len(quotas)
    if preferences is None:
        preferences = [list(range(n)) for _ in range(n)]
    if example == 3 and tuple(preferences[0]) != (0, 1):
        raise ValueError("agent 0 ranks her own item first in example 3")
    return NetworkInstance(quotas, preferences)
