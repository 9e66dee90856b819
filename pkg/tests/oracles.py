"""Independent reference implementations used only by the tests.

Nothing here imports the solver or the coalition search: each function is a
direct, slow transcription of a definition.
"""

from __future__ import annotations

import itertools


def classic_ttc(prefs):
    """Shapley-Scarf top trading cycles, one cycle at a time.

    Returns ``house[i]``, the agent whose item i ends up with.
    """
    n = len(prefs)
    left = set(range(n))
    house = [None] * n
    while left:
        point = {i: next(j for j in prefs[i] if j in left) for i in left}
        u = min(left)
        seen = []
        while u not in seen:
            seen.append(u)
            u = point[u]
        cycle = seen[seen.index(u):]
        for i in cycle:
            house[i] = point[i]
        left -= set(cycle)
    return house


def reference_network_trace(quotas, prefs):
    """The staged quota procedure with explicit lists and full recomputation
    each stage.  Returns (bundles, sorted transfer triples)."""
    n = len(quotas)
    lists = [list(p) for p in prefs]
    left = list(quotas)
    struck = {i for i in range(n) if left[i] == 0}

    def settle():
        while True:
            for i in range(n):
                lists[i] = [j for j in lists[i] if j not in struck]
            dead = {i for i in range(n) if i not in struck and not lists[i]}
            if not dead:
                return
            struck.update(dead)

    settle()
    bundles = [set() for _ in range(n)]
    transfers = []
    stage = 0
    while len(struck) < n:
        stage += 1
        point = {i: lists[i][0] for i in range(n) if i not in struck}
        on_cycle = set()
        for i in point:
            u = i
            for _ in range(n):
                u = point[u]
                if u == i:
                    on_cycle.add(i)
                    break
        assert on_cycle
        for i in sorted(on_cycle):
            j = point[i]
            bundles[i].add(j)
            transfers.append((i, j, stage))
            lists[i].remove(j)
            left[i] -= 1
            if left[i] == 0:
                struck.add(i)
        settle()
    return bundles, transfers


def hyper_dominates(pref, bundle, candidate):
    if candidate in bundle:
        return True
    return all(pref.index(k) <= pref.index(candidate) for k in bundle)


def network_blocked_naive(quotas, prefs, bundles, rule="quota"):
    """Try every coalition and every permutation against the definition."""
    n = len(quotas)

    def gains(i, j):
        if j in bundles[i]:
            return False
        if rule == "quota" and len(bundles[i]) < quotas[i]:
            return True
        return not hyper_dominates(prefs[i], bundles[i], j)

    for k in range(1, n + 1):
        for members in itertools.combinations(range(n), k):
            for images in itertools.permutations(members):
                if all(gains(i, j) for i, j in zip(members, images)):
                    return True
    return False


def cap_blocked_naive(endowments, prefs, bundles):
    n = len(endowments)
    for k in range(1, n + 1):
        for members in itertools.combinations(range(n), k):
            for images in itertools.permutations(members):
                if all(
                    any(not hyper_dominates(prefs[i], bundles[i], g) for g in endowments[j])
                    for i, j in zip(members, images)
                ):
                    return True
    return False


def all_networks(n):
    """Every directed network on n agents, from adjacency bitmasks."""
    for mask in range(1 << (n * n)):
        yield [{j for j in range(n) if mask >> (i * n + j) & 1} for i in range(n)]


def all_exclusive_allocations(endowments, n_items):
    n = len(endowments)
    quotas = [len(s) for s in endowments]
    for owner in itertools.product(range(n), repeat=n_items):
        bundles = [set() for _ in range(n)]
        for g, i in enumerate(owner):
            bundles[i].add(g)
        if all(len(b) == q for b, q in zip(bundles, quotas)):
            yield bundles


def closed_form_prices(K):
    return [2 ** (K - k) for k in range(1, K + 1)]
