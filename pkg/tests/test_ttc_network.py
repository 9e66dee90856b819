import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quotacore.core_verify import find_blocking_coalition
from quotacore.model import InvalidInstanceError, NetworkInstance, is_balanced, is_feasible_network
from quotacore.ttc_network import find_cycles, solve_network

from conftest import network_instances
from oracles import classic_ttc, network_blocked_naive, reference_network_trace


@pytest.mark.parametrize(
    "pointers, expected",
    [
        ({0: 1, 1: 0, 2: 2}, [(0, 1), (2,)]),
        ({0: 1, 1: 2, 2: 1}, [(1, 2)]),
        ({0: 1}, []),
        ({}, []),
        ({3: 4, 4: 5, 5: 3, 0: 3}, [(3, 4, 5)]),
    ],
)
def test_find_cycles(pointers, expected):
    assert find_cycles(pointers) == expected


@given(st.integers(1, 30).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))
def test_find_cycles_matches_brute_force(succ):
    pointers = dict(enumerate(succ))
    expected = set()
    for i in pointers:
        u = i
        for _ in range(len(succ)):
            u = pointers[u]
            if u == i:
                cyc = [i]
                while pointers[cyc[-1]] != i:
                    cyc.append(pointers[cyc[-1]])
                k = cyc.index(min(cyc))
                expected.add(tuple(cyc[k:] + cyc[:k]))
                break
    found = find_cycles(pointers)
    assert set(found) == expected
    members = [u for c in found for u in c]
    assert len(members) == len(set(members))


def test_example3_both_preferences():
    for pref1 in ((0, 1), (1, 0)):
        net, trace = solve_network(NetworkInstance((1, 2), ((0, 1), pref1)))
        assert net.as_lists() == [[0], [1]]
    net, trace = solve_network(NetworkInstance((1, 2), ((0, 1), (0, 1))))
    assert trace.stages == 2
    assert list(trace.transfers) == [(0, 0, 1), (1, 1, 2)]


def test_unanimous_self_preference():
    inst = NetworkInstance((1, 1, 1), ((0, 1, 2), (1, 0, 2), (2, 0, 1)))
    net, trace = solve_network(inst)
    assert net.as_lists() == [[0], [1], [2]]
    assert trace.stages == 1


def test_two_agents_quota_two():
    net, trace = solve_network(NetworkInstance((2, 2), ((1, 0), (0, 1))))
    assert net.as_lists() == [[0, 1], [0, 1]]
    assert trace.stages == 2
    assert list(trace.transfers) == [(0, 1, 1), (1, 0, 1), (0, 0, 2), (1, 1, 2)]
    assert find_blocking_coalition(NetworkInstance((2, 2), ((1, 0), (0, 1))), net) is None


def test_zero_quota_agents_never_trade():
    inst = NetworkInstance((0, 2, 1), ((0, 1, 2), (0, 1, 2), (0, 2, 1)))
    net, _ = solve_network(inst)
    assert net.assignments[0] == frozenset()
    assert all(0 not in a for a in net.assignments)


def test_dead_end_agent_is_struck():
    # agent 1 can only get item 1 (agent 0 withdraws), then her list runs dry
    # while agent 2 still wants her item
    inst = NetworkInstance((1, 3, 2), ((0, 1, 2), (0, 1, 2), (1, 2, 0)))
    net, trace = solve_network(inst)
    ref_bundles, ref_transfers = reference_network_trace(inst.quotas, inst.preferences)
    assert [set(a) for a in net.assignments] == ref_bundles
    assert list(trace.transfers) == ref_transfers
    assert is_balanced(net)


def test_invalid_instance_rejected():
    with pytest.raises(InvalidInstanceError):
        solve_network(NetworkInstance((1, 1), ((0, 0), (0, 1))))


@settings(max_examples=300)
@given(network_instances())
def test_matches_reference_procedure(inst):
    net, trace = solve_network(inst)
    bundles, transfers = reference_network_trace(inst.quotas, inst.preferences)
    assert [set(a) for a in net.assignments] == bundles
    assert list(trace.transfers) == transfers


@settings(max_examples=200)
@given(network_instances())
def test_output_invariants(inst):
    net, trace = solve_network(inst)
    assert is_feasible_network(inst, net)
    assert is_balanced(net)
    assert trace.stages <= sum(inst.quotas) + inst.n
    pairs = [(t.receiver, t.item) for t in trace.transfers]
    assert len(pairs) == len(set(pairs))
    for stage, moves in trace.by_stage().items():
        receivers = [t.receiver for t in moves]
        items = [t.item for t in moves]
        assert sorted(receivers) == sorted(set(receivers)) == sorted(items)
    # items of zero-quota agents are never transferable
    for t in trace.by_stage().get(1, []):
        best = next(j for j in inst.preferences[t.receiver] if inst.quotas[j] > 0)
        assert t.item == best
    assert solve_network(inst) == (net, trace)


@settings(max_examples=150, deadline=None)
@given(network_instances())
def test_outputs_are_unblocked(inst):
    net, _ = solve_network(inst)
    bundles = [set(a) for a in net.assignments]
    for rule in ("quota", "hyper"):
        assert not network_blocked_naive(inst.quotas, inst.preferences, bundles, rule)


@given(network_instances(min_quota=1).map(lambda inst: NetworkInstance([1] * inst.n, inst.preferences)))
def test_unit_quota_is_classic_ttc(inst):
    net, _ = solve_network(inst)
    house = classic_ttc(inst.preferences)
    assert net.as_lists() == [[h] for h in house]
