"""Acceptance suite: one test per criterion.

A summary with one PASS/FAIL line per criterion is printed at the end of
the pytest run (see conftest.py).
"""

import itertools
import subprocess
import sys
from fractions import Fraction

import pytest

from bia.bounds import optimal_preset_modes, siso_bound, sweep_bound
from bia.converse import build_converse_lp, check_symmetric_optimality, solve_converse_lp
from bia.core_model import SystemConfig
from bia.synth import golden_example, synthesize
from bia.verifier import expected_interference_rank, monte_carlo

from oracles import D, brute_bound


def _report(num, ok):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}")


def test_criterion_1_bound_fidelity():
    cases = {(1, 2, 3): Fraction(6, 5), (2, 2, 3): Fraction(3, 2), (1, 2, 4): Fraction(4, 3),
             (1, 2, 5): Fraction(10, 7), (2, 3, 6): Fraction(9, 5)}
    for M in range(1, 5):
        for K in range(2, 11):
            cases[(M, M, K)] = Fraction(M * K, M + K - 1)
    wrong = {c: optimal_preset_modes(SystemConfig(*c)).bound for c in cases}
    wrong = {c: v for c, v in wrong.items() if v != cases[c]}
    _report(1, not wrong)
    assert not wrong


def test_criterion_2_mode_thresholds():
    bad = []
    for K in range(2, 21):
        b2, b3, b4 = (siso_bound(N, K).bound for N in (2, 3, 4))
        if (b3 > b2) != (K >= 7) or (b3 < b2) or (b4 > b3) != (K >= 13) or (b4 < b3):
            bad.append(K)
    ok = not bad and siso_bound(3, 6).bound == siso_bound(2, 6).bound \
        and siso_bound(4, 12).bound == siso_bound(3, 12).bound
    _report(2, ok)
    assert ok, bad


def test_criterion_3_converse_lp_equivalence():
    gaps = []
    for M in range(1, 9):
        for K in range(2, 9):
            if M * K > 8:
                continue
            for n in range(1, min(4, M * K) + 1):
                opt = solve_converse_lp(build_converse_lp(SystemConfig(M, n, K), n))
                if opt != D(M, K, n):
                    gaps.append((M, K, n, opt, D(M, K, n)))
    _report(3, not gaps)
    assert not gaps


def test_criterion_4_symmetric_optimality():
    bad = []
    for M, K, N in itertools.product((1, 2), range(2, 9), range(1, 5)):
        best, val, sym = check_symmetric_optimality(SystemConfig(M, N, K), 5)
        if not sym or val != brute_bound(M, K, min(N, M * K)):
            bad.append((M, N, K, best))
    _report(4, not bad)
    assert not bad


@pytest.mark.parametrize("name,m,per_user", [("ex3", 3, 1), ("ex4", 7, 2)])
def test_criterion_5_golden_schemes(name, m, per_user):
    s = golden_example(name)
    mc = monte_carlo(s, 100, 2024)
    ok = mc.passes == 100 and s.m == m
    for rep in mc.reports:
        for j, r in rep.per_user.items():
            ok &= r.measured_dof == per_user
            ok &= r.interference_rank == expected_interference_rank(s, j)
    _report(5, ok)
    assert ok


SYNTH_CONFIGS = [(1, 2, 4), (2, 2, 3), (1, 2, 5), (1, 2, 7), (2, 3, 6), (1, 3, 9)]


@pytest.mark.parametrize("cfg", SYNTH_CONFIGS, ids=lambda c: "M%d_N%d_K%d" % c)
def test_criterion_6_synthesis_attains_bound(cfg):
    config = SystemConfig(*cfg)
    bound = optimal_preset_modes(config).bound
    mc = monte_carlo(synthesize(config), 20, 6)
    ok = mc.all_passed and set(mc.sum_dofs) == {bound}
    _report(6, ok)
    assert ok, (mc.passes, set(mc.sum_dofs), bound)


def test_criterion_7_staircase():
    siso = [b for _, _, b in sweep_bound(1, 7, 6)]
    ok = all(x <= y for x, y in zip(siso, siso[1:]))
    ok &= siso[2] > siso[1] and len(set(siso[2:])) == 1
    two = sweep_bound(2, 6, 5)
    vals = [b for _, _, b in two]
    ok &= all(x <= y for x, y in zip(vals, vals[1:]))
    ok &= vals == [brute_bound(2, 6, min(N, 12)) for N in range(1, 6)]
    # N=4 -> 5 adds one mode with alpha=1 under the threshold: flat
    ok &= vals[4] == vals[3] and two[4][1] == 4
    # N=2 -> 3 -> 4 each add a usable mode: strict jumps
    ok &= vals[1] < vals[2] < vals[3]
    _report(7, ok)
    assert ok


@pytest.mark.parametrize("name", ["ex3", "ex4"])
def test_criterion_8_negative_control(name):
    s = golden_example(name)
    for j in s.patterns:
        s = s.with_pattern(j, [1] * s.m)
    mc = monte_carlo(s, 20, 8)
    ok = mc.passes == 0 and all(
        any(r.measured_dof < r.expected_dof for r in rep.per_user.values()) for rep in mc.reports)
    _report(8, ok)
    assert ok


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "bia.cli", *argv], capture_output=True).stdout


def test_criterion_9_cli_determinism(tmp_path):
    scheme = tmp_path / "s.json"
    runs = [
        ["bound", "--M", "1", "--N", "2", "--K", "5"],
        ["sweep", "--M", "1", "--K", "7", "--n-max", "6"],
        ["synth", "--M", "2", "--N", "2", "--K", "3"],
        ["lp", "--M", "1", "--N", "3", "--K", "4", "--n", "3"],
        ["efficiency", "--M", "1", "--K", "5", "--cardinalities", "1,2"],
    ]
    ok = all(_cli(*a) == _cli(*a) != b"" for a in runs)
    _cli("synth", "--golden", "ex4", "--out", str(scheme))
    ok &= scheme.read_bytes() == _cli("synth", "--golden", "ex4")
    v = ["verify", str(scheme), "--trials", "10", "--seed", "5"]
    ok &= _cli(*v) == _cli(*v) != b""
    _report(9, ok)
    assert ok
