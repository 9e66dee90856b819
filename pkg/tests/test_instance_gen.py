import pytest
from hypothesis import given
from hypothesis import strategies as st

from quotacore.instance_gen import (
    PREFERENCE_FREE_EXAMPLES,
    GenConfig,
    paper_example,
    random_cap_instance,
    random_network_instance,
)
from quotacore.model import validate_cap_instance, validate_network_instance


def test_network_generation_is_deterministic():
    cfg = GenConfig("network", 7, 4, 1, 123)
    assert random_network_instance(cfg) == random_network_instance(cfg)
    assert random_network_instance(cfg) != random_network_instance(GenConfig("network", 7, 4, 1, 124))


def test_network_generation_is_valid():
    inst = random_network_instance(GenConfig("network", 5, 3, 1, 42))
    assert validate_network_instance(inst) == []
    assert all(1 <= q <= 3 for q in inst.quotas)


def test_frozen_fixture():
    # pins the documented algorithm so stored fixtures stay reproducible
    inst = random_network_instance(GenConfig("network", 4, 4, 1, 2024))
    assert inst.quotas == (4, 2, 3, 2)
    assert inst.preferences == ((0, 1, 2, 3), (0, 3, 2, 1), (3, 0, 1, 2), (0, 1, 3, 2))


def test_single_agent_is_forced():
    for seed in range(5):
        inst = random_network_instance(GenConfig("network", 1, 1, 1, seed))
        assert inst.quotas == (1,) and inst.preferences == ((0,),)


def test_quota_capped_at_n():
    inst = random_network_instance(GenConfig("network", 3, 10, 1, 5))
    assert max(inst.quotas) <= 3


@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 2**64 - 1))
def test_cap_generation_valid_and_deterministic(n, max_endowment, seed):
    cfg = GenConfig("cap", n, 1, max_endowment, seed)
    cap = random_cap_instance(cfg)
    assert validate_cap_instance(cap) == []
    assert cap == random_cap_instance(cfg)
    assert all(1 <= q <= max_endowment for q in cap.quotas)


def test_unit_endowment_cap():
    cap = random_cap_instance(GenConfig("cap", 2, 1, 1, 9))
    assert cap.quotas == (1, 1) and cap.n_items == 2


@pytest.mark.parametrize(
    "cfg",
    [
        GenConfig("network", 0, 1, 1, 0),
        GenConfig("network", 3, 0, 1, 0),
        GenConfig("network", 3, 1, 1, -1),
        GenConfig("graph", 3, 1, 1, 0),
    ],
)
def test_invalid_configs(cfg):
    with pytest.raises(ValueError):
        random_network_instance(cfg)


def test_kind_mismatch():
    with pytest.raises(ValueError):
        random_cap_instance(GenConfig("network", 3))


def test_paper_examples():
    assert paper_example(1).quotas == (1, 3, 3)
    assert paper_example(2).quotas == (1, 4, 4, 4)
    ex3 = paper_example(3)
    assert ex3.quotas == (1, 2)
    assert ex3.preferences[0][0] == 0
    assert paper_example(3, [[0, 1], [1, 0]]).preferences[1] == (1, 0)
    assert PREFERENCE_FREE_EXAMPLES == {1, 2}
    for k in (1, 2, 3):
        assert validate_network_instance(paper_example(k)) == []


def test_paper_example_errors():
    with pytest.raises(ValueError):
        paper_example(4)
    with pytest.raises(ValueError):
        paper_example(3, [[1, 0], [0, 1]])
