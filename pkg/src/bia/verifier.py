"""Achievability by rank: per-user linear DoF on sampled generic channels.

d_j = rank([I | D]) - rank(I), where D holds the effective columns of user
j's own symbols and I those of everyone else.  The exact backend never
rounds; the float backend exists for cross-checks only.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np

from .core_model import (ChannelRealization, Scheme, SystemConfig, UserResult,
                         VerificationReport)
from .errors import DomainError, PatternOutOfRange

__all__ = [
    "RankBackend", "EXACT", "sample_channel", "rank", "rank_of_vectors",
    "measure_user_ldof", "expected_interference_rank", "verify", "monte_carlo",
    "MonteCarloReport", "trial_seeds", "format_report", "CHANNEL_MAX",
]

CHANNEL_MAX = 10 ** 6


@dataclass(frozen=True)
class RankBackend:
    """``exact`` (default) or ``float``; only float mode takes a tolerance."""

    mode: str = "exact"
    float_tolerance: Optional[float] = None

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise DomainError(f"unknown rank backend {self.mode!r}")
        if self.mode == "exact" and self.float_tolerance is not None:
            raise DomainError("the exact backend takes no tolerance")
        if self.mode == "float" and self.float_tolerance is None:
            object.__setattr__(self, "float_tolerance", 1e-9)


EXACT = RankBackend()


def sample_channel(config: SystemConfig, seed: int) -> ChannelRealization:
    """Integer coefficients uniform on [1, 10^6], a deterministic function of seed."""
    rng = np.random.default_rng(seed)
    K, MK, N = config.K, config.M * config.K, config.N
    draw = rng.integers(1, CHANNEL_MAX, size=(K, MK, N), endpoint=True)
    return ChannelRealization(config, draw.tolist())


# -- rank -------------------------------------------------------------------

def _to_int_vector(vec: dict) -> dict:
    """Scale a sparse rational vector to a primitive integer vector."""
    den = reduce(lcm, (Fraction(x).denominator for x in vec.values()), 1)
    out = {k: int(Fraction(x) * den) for k, x in vec.items() if x != 0}
    g = reduce(gcd, out.values(), 0)
    if g > 1:
        out = {k: x // g for k, x in out.items()}
    return out


def _exact_rank(vectors: Sequence[dict]) -> int:
    """Fraction-free elimination of sparse integer vectors.

    Each incoming vector is reduced against the stored pivots by integer
    cross-multiplication and divided by its content, so entries stay small
    and no division ever leaves the integers.
    """
    pivots: dict = {}
    r = 0
    for v in vectors:
        v = dict(v)
        while v:
            p = min(v)
            w = pivots.get(p)
            if w is None:
                pivots[p] = v
                r += 1
                break
            a, b = v[p], w[p]
            g = gcd(a, b)
            a, b = a // g, b // g
            nv = {k: x * b for k, x in v.items()}
            for k, x in w.items():
                y = nv.get(k, 0) - a * x
                if y:
                    nv[k] = y
                else:
                    nv.pop(k, None)
            if nv:
                c = reduce(gcd, nv.values())
                if c > 1:
                    nv = {k: x // c for k, x in nv.items()}
            v = nv
    return r


def _float_rank(vectors: Sequence[dict], length: int, tol: float) -> int:
    if not vectors:
        return 0
    A = np.zeros((length, len(vectors)))
    for c, v in enumerate(vectors):
        for k, x in v.items():
            A[k, c] = float(x)
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def rank_of_vectors(vectors: Sequence[dict], length: int, backend: RankBackend = EXACT) -> int:
    """Rank of sparse vectors given as {index: value}."""
    if backend.mode == "exact":
        return _exact_rank([_to_int_vector(v) for v in vectors if any(x != 0 for x in v.values())])
    return _float_rank(vectors, length, backend.float_tolerance)


def rank(matrix, backend: RankBackend = EXACT) -> int:
    """Rank of a dense matrix (sequence of rows, rational or integer entries)."""
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    if backend.mode == "float":
        A = np.array([[float(x) for x in r] for r in rows])
        s = np.linalg.svd(A, compute_uv=False)
        return 0 if s[0] == 0 else int(np.sum(s > backend.float_tolerance * s[0]))
    cols = [{i: r[c] for i, r in enumerate(rows) if r[c] != 0} for c in range(len(rows[0]))]
    return rank_of_vectors(cols, len(rows), backend)


# -- per-user measurement ----------------------------------------------------

def _check_pattern(scheme: Scheme, j: int):
    N = scheme.config.N
    pat = scheme.patterns[j]
    for t, mode in enumerate(pat):
        if not 1 <= mode <= N:
            raise PatternOutOfRange(f"l_{j}({t + 1})={mode} not in [1:{N}]")
    return pat


def _column(scheme, channel, j, pat, ant, d) -> dict:
    col = scheme.beamforming[ant][d - 1]
    return {t: channel.coeff(j, ant, pat[t]) for t, x in enumerate(col) if x}


def _columns(scheme: Scheme, channel: ChannelRealization, j: int):
    pat = _check_pattern(scheme, j)
    desired, interference = [], []
    for ant, cols in scheme.beamforming.items():
        for d in range(1, len(cols) + 1):
            v = _column(scheme, channel, j, pat, ant, d)
            (desired if ant.transmitter == j else interference).append(((ant, d), v))
    return desired, interference


def measure_user_ldof(scheme: Scheme, channel: ChannelRealization, j: int,
                      backend: RankBackend = EXACT):
    """(d_j, desired_rank, interference_rank) for one realization."""
    if not 1 <= j <= scheme.config.K:
        raise DomainError(f"receiver {j} outside [1:{scheme.config.K}]")
    desired, interference = _columns(scheme, channel, j)
    D = [v for _, v in desired]
    I = [v for _, v in interference]
    ri = rank_of_vectors(I, scheme.m, backend)
    rall = rank_of_vectors(I + D, scheme.m, backend)
    rd = rank_of_vectors(D, scheme.m, backend)
    return rall - ri, rd, ri


def _set_of_symbol(scheme: Scheme) -> dict:
    return {member: k for k, s in enumerate(scheme.sets) for member in s.members}


def expected_interference_rank(scheme: Scheme, j: int) -> int:
    """Interference dimension implied by the alignment structure.

    A set not serving j collapses to one dimension; a set serving j keeps
    one dimension per foreign member.  Symbols outside every set count as
    singleton sets.
    """
    if not 1 <= j <= scheme.config.K:
        raise DomainError(f"receiver {j} outside [1:{scheme.config.K}]")
    total = 0
    for s in scheme.sets:
        if j in s.transmitters:
            total += sum(1 for a, _ in s.members if a.transmitter != j)
        else:
            total += 1
    covered = _set_of_symbol(scheme)
    total += sum(1 for ant, d in scheme.symbols() if ant.transmitter != j and (ant, d) not in covered)
    return total


def _decodability(scheme, channel, j, backend):
    """Desired columns plus one column per interference dimension."""
    desired, interference = _columns(scheme, channel, j)
    owner = _set_of_symbol(scheme)
    cols = [v for _, v in desired]
    taken = set()
    for sym, v in interference:
        k = owner.get(sym)
        if k is None or j in scheme.sets[k].transmitters:
            cols.append(v)
        elif k not in taken:
            taken.add(k)
            cols.append(v)
    square = len(cols) == scheme.m
    return square, square and rank_of_vectors(cols, scheme.m, backend) == scheme.m


def verify(scheme: Scheme, channel: ChannelRealization,
           backend: RankBackend = EXACT) -> VerificationReport:
    per = {}
    all_square = all_full = True
    for j in range(1, scheme.config.K + 1):
        d, rd, ri = measure_user_ldof(scheme, channel, j, backend)
        per[j] = UserResult(d, scheme.num_symbols(j), rd, ri, expected_interference_rank(scheme, j))
        sq, full = _decodability(scheme, channel, j, backend)
        all_square &= sq
        all_full &= full
    total = sum(r.measured_dof for r in per.values())
    passed = all(r.passed for r in per.values())
    return VerificationReport(per, scheme.m, Fraction(total, scheme.m), passed, all_square, all_full)


# -- Monte Carlo ---------------------------------------------------------------

def trial_seeds(master_seed: int, trials: int) -> list[int]:
    """64-bit per-trial seeds from numpy's SeedSequence spawning of master_seed."""
    children = np.random.SeedSequence(master_seed).spawn(trials)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    passes: int
    seeds: tuple
    reports: tuple = field(repr=False)

    @property
    def all_passed(self) -> bool:
        return self.passes == self.trials

    @property
    def sum_dofs(self) -> tuple:
        return tuple(r.sum_dof for r in self.reports)


def _one_trial(args):
    scheme, seed, backend = args
    return verify(scheme, sample_channel(scheme.config, seed), backend)


def monte_carlo(scheme: Scheme, trials: int, master_seed: int,
                backend: RankBackend = EXACT, workers: int = 1) -> MonteCarloReport:
    """Verify on ``trials`` independent channels; order of execution never matters."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    seeds = trial_seeds(master_seed, trials)
    jobs = [(scheme, s, backend) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_one_trial, jobs))
    else:
        reports = [_one_trial(job) for job in jobs]
    return MonteCarloReport(trials, sum(r.passed for r in reports), tuple(seeds), tuple(reports))


def format_report(report: VerificationReport) -> str:
    lines = ["j,d_j,expected,interference_rank,expected_interference,pass"]
    for j, r in report.per_user.items():
        lines.append(f"{j},{r.measured_dof},{r.expected_dof},{r.interference_rank},"
                     f"{r.expected_interference},{'pass' if r.passed else 'FAIL'}")
    s = report.sum_dof
    lines.append(f"sum_dof={s.numerator}/{s.denominator} m={report.m} "
                 f"decodability_square={report.decodability_square} "
                 f"decodability_full_rank={report.decodability_full_rank}")
    return "\n".join(lines) + "\n"
