"""Counting-argument converse: efficiency pairs, the multiset oracle and an exact LP.

Nothing here uses floating point.  The LP is solved by a dense tableau
simplex over ``Fraction`` with Bland's rule, which is plenty for the
desk-scale instances (a few hundred columns at most).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .bounds import ceil_div, ldof_function, optimal_preset_modes
from .core_model import AntennaId, SystemConfig, antennas
from .errors import BudgetExceeded, DomainError, LpError

__all__ = [
    "EfficiencyPair", "ConverseLp", "alignment_efficiency", "bound_for_cardinalities",
    "check_symmetric_optimality", "build_converse_lp", "solve_converse_lp",
    "simplex_max", "export_lp", "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class EfficiencyPair:
    """Desired (f) and interference (h) dimensions of one alignment set."""

    f: int
    h: int


def alignment_efficiency(M: int, K: int, n: int) -> EfficiencyPair:
    if M < 1 or K < 1 or not 1 <= n <= M * K:
        raise DomainError(f"need 1 <= n <= MK, got n={n}, M={M}, K={K}")
    c = ceil_div(n, M)
    return EfficiencyPair(n, (c - 1) * n + K - c)


def bound_for_cardinalities(M: int, K: int, cards: Iterable[int]) -> Fraction:
    """K * sum f / (sum f + sum h) over the given set cardinalities."""
    sf = sh = 0
    for n in cards:
        e = alignment_efficiency(M, K, n)
        sf += e.f
        sh += e.h
    if sf == 0:
        return Fraction(0)
    return Fraction(K * sf, sf + sh)


def check_symmetric_optimality(config: SystemConfig, max_sets: int):
    """Exhaustive search over multisets of cardinalities.

    Returns ``(best_multiset, best_value, symmetric_is_max)`` where the last
    entry says whether a uniform multiset at n* reaches the maximum.
    """
    if max_sets < 1:
        raise DomainError("max_sets must be >= 1")
    M, K = config.M, config.K
    top = min(config.N, M * K)
    best, best_val = None, Fraction(-1)
    for size in range(1, max_sets + 1):
        for ms in itertools.combinations_with_replacement(range(1, top + 1), size):
            v = bound_for_cardinalities(M, K, ms)
            if v > best_val:
                best, best_val = ms, v
    n_star = optimal_preset_modes(config).n_star
    sym = bound_for_cardinalities(M, K, [n_star]) == best_val
    return best, best_val, sym


@dataclass(frozen=True)
class ConverseLp:
    """max c.x subject to A x <= b, x >= 0.

    Column order: one ``d`` variable per antenna (antenna order), then one
    ``x_T`` per n-subset T of antennas in lexicographic order.
    """

    config: SystemConfig
    n: int
    names: tuple
    objective: tuple
    rows: tuple
    rhs: tuple
    row_names: tuple

    @property
    def num_variables(self) -> int:
        return len(self.names)


def _subset_name(T: Sequence[AntennaId]) -> str:
    return "x_" + "__".join(f"{a.transmitter}_{a.antenna}" for a in T)


def build_converse_lp(config: SystemConfig, n: int, budget: int = DEFAULT_BUDGET) -> ConverseLp:
    M, K = config.M, config.K
    ants = antennas(config)
    MK = len(ants)
    if not 1 <= n <= min(config.N, MK):
        raise DomainError(f"n={n} outside [1:{min(config.N, MK)}]")
    if comb(MK, n) > budget:
        raise BudgetExceeded(f"C({MK},{n})={comb(MK, n)} exceeds cap {budget}")
    subsets = list(itertools.combinations(range(MK), n))
    nv = MK + len(subsets)
    names = [f"d_{a.transmitter}_{a.antenna}" for a in ants]
    names += [_subset_name([ants[i] for i in T]) for T in subsets]
    rows, rhs, row_names = [], [], []
    for j in range(1, K + 1):
        row = [Fraction(0)] * nv
        for i in range(MK):
            row[i] = Fraction(1)
        for k, T in enumerate(subsets):
            if all(ants[i].transmitter != j for i in T):
                row[MK + k] = Fraction(-(n - 1))
        rows.append(tuple(row))
        rhs.append(Fraction(1))
        row_names.append(f"rx_{j}")
    for i, a in enumerate(ants):
        row = [Fraction(0)] * nv
        row[i] = Fraction(-1)
        for k, T in enumerate(subsets):
            if i in T:
                row[MK + k] = Fraction(1)
        rows.append(tuple(row))
        rhs.append(Fraction(0))
        row_names.append(f"ant_{a.transmitter}_{a.antenna}")
    obj = tuple([Fraction(1)] * MK + [Fraction(0)] * len(subsets))
    return ConverseLp(config, n, tuple(names), obj, tuple(rows), tuple(rhs), tuple(row_names))


def _pivot(tab, r, c):
    prow = tab[r]
    p = prow[c]
    if p != 1:
        tab[r] = prow = [x / p for x in prow]
    for i, row in enumerate(tab):
        if i != r:
            f = row[c]
            if f:
                tab[i] = [x - f * y for x, y in zip(row, prow)]


def _run(tab, basis, ncols):
    """Bland's-rule iterations on a tableau whose last row is the reduced cost."""
    m = len(tab) - 1
    while True:
        z = tab[-1]
        enter = next((c for c in range(ncols) if z[c] < 0), None)
        if enter is None:
            return
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise LpError("UNBOUNDED")
        _pivot(tab, leave, enter)
        basis[leave] = enter


def simplex_max(c, A, b):
    """Exact maximum of c.x subject to A x <= b, x >= 0.

    Returns ``(value, x)``.  Negative right-hand sides trigger a phase-one
    problem with artificial variables.
    """
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    m, n = len(A), len(c)
    # columns: x (n), slacks (m), artificials (m, only used when b_i < 0)
    neg = [i for i in range(m) if b[i] < 0]
    art_col = {i: n + m + k for k, i in enumerate(neg)}
    width = n + m + len(neg)
    tab, basis = [], []
    for i in range(m):
        row = [Fraction(0)] * (width + 1)
        sign = -1 if i in art_col else 1
        for j in range(n):
            row[j] = sign * A[i][j]
        row[n + i] = Fraction(sign)
        if i in art_col:
            row[art_col[i]] = Fraction(1)
            basis.append(art_col[i])
        else:
            basis.append(n + i)
        row[-1] = sign * b[i]
        tab.append(row)
    if neg:
        # phase one: minimise the sum of artificials
        z = [Fraction(0)] * (width + 1)
        for i in neg:
            z = [zz - x for zz, x in zip(z, tab[i])]
        for i in neg:
            z[art_col[i]] = Fraction(0)
        tab.append(z)
        _run(tab, basis, width)
        if tab[-1][-1] != 0:
            raise LpError("INFEASIBLE")
        tab.pop()
        for i, bv in enumerate(basis):
            if bv >= n + m:
                c_new = next((j for j in range(n + m) if tab[i][j] != 0), None)
                if c_new is not None:
                    _pivot(tab, i, c_new)
                    basis[i] = c_new
        tab = [row[:n + m] + [row[-1]] for row in tab]
        width = n + m
    z = [Fraction(0)] * (width + 1)
    for j in range(n):
        z[j] = -c[j]
    for i, bv in enumerate(basis):
        if bv < width and z[bv] != 0:
            f = z[bv]
            z = [zz - f * x for zz, x in zip(z, tab[i])]
    tab.append(z)
    _run(tab, basis, width)
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][-1]
    return tab[-1][-1], x


def solve_converse_lp(lp: ConverseLp) -> Fraction:
    value, _ = simplex_max(lp.objective, lp.rows, lp.rhs)
    return value


def _term(coef: Fraction, name: str, first: bool) -> str:
    mag = abs(coef)
    body = name if mag == 1 else f"{mag} {name}"
    if coef < 0:
        return f"- {body}"
    return body if first else f"+ {body}"


def export_lp(lp: ConverseLp) -> str:
    """CPLEX LP text for cross-checking with an external solver."""
    cfg = lp.config
    out = [f"\\ converse LP for (M,N,K)=({cfg.M},{cfg.N},{cfg.K}), n={lp.n}", "Maximize"]
    terms = [nm for nm, c in zip(lp.names, lp.objective) if c]
    out.append(" obj: " + " + ".join(terms))
    out.append("Subject To")
    for rn, row, b in zip(lp.row_names, lp.rows, lp.rhs):
        parts = []
        for nm, coef in zip(lp.names, row):
            if coef:
                parts.append(_term(coef, nm, not parts))
        lhs = " ".join(parts) if parts else "0 " + lp.names[0]
        out.append(f" {rn}: {lhs} <= {b}")
    out.append("End")
    return "\n".join(out) + "\n"
