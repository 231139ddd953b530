from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bia.alignment import (PartitionPlan, achieved_ratio, construct_partition,
                           minimal_transmitter_count, naive_partition, required_extension,
                           validate_partition)
from bia.core_model import AlignmentSet, AntennaId, SystemConfig
from bia.errors import DomainError, UnsupportedConfig

from oracles import D


def test_minimal_transmitter_count():
    assert minimal_transmitter_count(3, 2) == 2
    assert minimal_transmitter_count(4, 2) == 2
    assert minimal_transmitter_count(1, 5) == 1
    with pytest.raises(DomainError):
        minimal_transmitter_count(0, 1)


def test_case_c_twelve_windows():
    plan = construct_partition(SystemConfig(2, 3, 6))
    assert plan.case == "C" and plan.eta == 3 and len(plan.sets) == 12
    first = plan.sets[0]
    assert first.members == ((AntennaId(1, 1), 1), (AntennaId(1, 2), 1), (AntennaId(2, 1), 1))
    per, balanced = required_extension(plan, SystemConfig(2, 3, 6))
    assert balanced and set(per.values()) == {20}
    assert sum(plan.symbols_per_antenna.values()) == 36


def test_naive_partition_unbalanced():
    cfg = SystemConfig(2, 3, 6)
    per, balanced = required_extension(naive_partition(cfg, 3), cfg)
    assert not balanced
    assert [per[j] for j in range(1, 7)] == [6, 8, 6, 6, 8, 6]
    with pytest.raises(DomainError):
        naive_partition(cfg, 5)


def test_cyclic_pairs_siso():
    cfg = SystemConfig(1, 2, 5)
    plan = construct_partition(cfg)
    assert plan.case == "B" and len(plan.sets) == 5
    assert all(len(s.transmitters) == 2 for s in plan.sets)
    assert achieved_ratio(plan, cfg) == Fraction(10, 7)


def test_unsupported_template():
    with pytest.raises(UnsupportedConfig):
        construct_partition(SystemConfig(2, 3, 8))


def test_validate_partition_codes():
    cfg = SystemConfig(1, 2, 3)
    a1, a2, a3 = (AntennaId(i, 1) for i in (1, 2, 3))
    plan = PartitionPlan(1, (
        AlignmentSet({1, 2, 3}, [(a1, 1), (a2, 1), (a3, 1)]),
        AlignmentSet({2}, [(a1, 1)]),
        AlignmentSet({1}, [(a1, 3)]),
    ), {a1: 2, a2: 1, a3: 1})
    codes = [v.code for v in validate_partition(plan, cfg)]
    assert codes == ["CARDINALITY_EXCEEDS_MODES", "TRANSMITTER_MISMATCH", "EXCLUSIVITY",
                     "UNKNOWN_SYMBOL", "UNCOVERED"]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3), st.integers(1, 6), st.integers(2, 10))
def test_constructed_partitions_are_balanced(M, N, K):
    cfg = SystemConfig(M, N, K)
    try:
        plan = construct_partition(cfg)
    except UnsupportedConfig:
        assume(False)
    assert validate_partition(plan, cfg) == []
    per, balanced = required_extension(plan, cfg)
    assert balanced
    n = max(s.cardinality for s in plan.sets)
    assert all(s.cardinality == n for s in plan.sets)
    assert achieved_ratio(plan, cfg) == D(M, K, n)
    # every set draws from the fewest transmitters possible
    assert all(len(s.transmitters) == minimal_transmitter_count(n, M) for s in plan.sets)
