import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bia.core_model import AntennaId, ChannelRealization, SystemConfig, dumps_scheme
from bia.errors import DomainError
from bia.synth import golden_example
from bia.verifier import (RankBackend, expected_interference_rank, format_report,
                          measure_user_ldof, monte_carlo, rank, sample_channel, trial_seeds,
                          verify)

from oracles import oracle_dof, sympy_rank
from strategies import antenna_of, schemes

small = st.integers(-3, 3)


@st.composite
def int_matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return [draw(st.lists(small, min_size=c, max_size=c)) for _ in range(r)]


@settings(max_examples=200, deadline=None)
@given(int_matrices())
def test_exact_rank_matches_sympy(A):
    assert rank(A) == sympy_rank(A)


@settings(max_examples=100, deadline=None)
@given(int_matrices(), st.integers(1, 7))
def test_exact_rank_rational_entries(A, q):
    B = [[Fraction(x, q + abs(x)) for x in row] for row in A]
    assert rank(B) == sympy_rank(B)


@settings(max_examples=100, deadline=None)
@given(int_matrices())
def test_float_rank_agrees_on_small_integers(A):
    assert rank(A, RankBackend("float")) == np.linalg.matrix_rank(np.array(A, dtype=float))


def test_rank_of_dependent_large_entries():
    v = [10 ** 6 - k for k in range(5)]
    w = [x * 999983 for x in v]
    assert rank([v, w, [a + b for a, b in zip(v, w)]]) == 1


def test_backend_validation():
    with pytest.raises(DomainError):
        RankBackend("exact", 1e-9)
    with pytest.raises(DomainError):
        RankBackend("modular")
    assert RankBackend("float").float_tolerance == 1e-9


def test_sample_channel_deterministic_and_in_range():
    cfg = SystemConfig(2, 3, 3)
    a, b = sample_channel(cfg, 7), sample_channel(cfg, 7)
    assert a == b
    assert a != sample_channel(cfg, 8)
    vals = [a.coeff(j, AntennaId(i, t), l) for j in range(1, 4) for i in range(1, 4)
            for t in (1, 2) for l in (1, 2, 3)]
    assert all(1 <= v <= 10 ** 6 for v in vals)


def test_trial_seeds():
    s = trial_seeds(5, 4)
    assert s == trial_seeds(5, 4)
    assert len(set(s)) == 4
    assert trial_seeds(5, 6)[:4] == s
    assert all(0 <= x < 2 ** 64 for x in s)


@settings(max_examples=60, deadline=None)
@given(schemes(), st.integers(0, 2 ** 32))
def test_measured_dof_matches_dense_oracle(s, seed):
    ch = sample_channel(s.config, seed)
    doc = json.loads(dumps_scheme(s))
    table = ch.table
    for j in range(1, s.config.K + 1):
        d, rd, ri = measure_user_ldof(s, ch, j)
        od, ori = oracle_dof(doc, table, j)
        assert (d, ri) == (od, ori)
        assert 0 <= d <= min(rd, s.num_symbols(j), s.m)


@settings(max_examples=60, deadline=None)
@given(schemes(), st.integers(0, 2 ** 32), st.integers(2, 50))
def test_dof_invariant_to_antenna_gain(s, seed, lam):
    """Scaling every mode of one antenna's channel scales its columns only."""
    cfg = s.config
    ch = sample_channel(cfg, seed)
    ant = antenna_of(s, seed)
    j = seed % cfg.K + 1
    scaled = ch
    for mode in range(1, cfg.N + 1):
        scaled = scaled.scaled(j, ant, mode, lam)
    assert measure_user_ldof(s, ch, j) == measure_user_ldof(s, scaled, j)


def test_golden_ex3_single_channel():
    s = golden_example("ex3")
    rep = verify(s, sample_channel(s.config, 1))
    assert rep.passed and rep.m == 3
    assert rep.per_user[1].measured_dof == 1
    assert rep.decodability_square and rep.decodability_full_rank
    assert rep.sum_dof == Fraction(4, 3)


def test_golden_ex4_expected_interference():
    s = golden_example("ex4")
    assert [expected_interference_rank(s, j) for j in range(1, 6)] == [5] * 5
    with pytest.raises(DomainError):
        expected_interference_rank(s, 6)


def test_all_ones_pattern_fails():
    s = golden_example("ex4")
    for j in range(1, 6):
        s = s.with_pattern(j, [1] * s.m)
    rep = verify(s, sample_channel(s.config, 3))
    assert not rep.passed
    assert rep.failing_users()


def test_unit_channel_is_degenerate():
    s = golden_example("ex4")
    cfg = s.config
    ones = ChannelRealization(cfg, [[[1] * cfg.N for _ in range(cfg.K)] for _ in range(cfg.K)])
    assert not verify(s, ones).passed


def test_monte_carlo_workers_agree():
    s = golden_example("ex3")
    a = monte_carlo(s, 6, 11)
    b = monte_carlo(s, 6, 11, workers=2)
    assert a.all_passed and a.passes == 6
    assert a.seeds == b.seeds
    assert [format_report(r) for r in a.reports] == [format_report(r) for r in b.reports]
    with pytest.raises(DomainError):
        monte_carlo(s, 0, 1)


def test_float_backend_on_golden():
    s = golden_example("ex4")
    assert monte_carlo(s, 5, 2, RankBackend("float")).all_passed


def test_format_report_layout():
    s = golden_example("ex3")
    text = format_report(verify(s, sample_channel(s.config, 0)))
    lines = text.splitlines()
    assert lines[0] == "j,d_j,expected,interference_rank,expected_interference,pass"
    assert lines[1] == "1,1,1,2,2,pass"
    assert lines[-1].startswith("sum_dof=4/3 m=3")
