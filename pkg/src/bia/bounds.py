"""Closed-form linear sum-DoF upper bounds and optimal preset-mode counts.

All arithmetic is exact (``fractions.Fraction``); decimals appear only when
results are rendered for humans.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .core_model import CellularConfig, SystemConfig
from .errors import AsymmetricCells, DomainError

__all__ = [
    "BoundResult", "ldof_function", "optimal_preset_modes", "siso_bound",
    "downlink_cell_bound", "uplink_cell_bound", "sweep_bound", "sweep_csv",
    "format_fraction", "decimal", "ceil_div",
]


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def format_fraction(x: Fraction) -> str:
    """``num/den``, or just the integer when the denominator is 1."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal(x: Fraction, digits: int = 6) -> str:
    return f"{float(x):.{digits}g}"


@dataclass(frozen=True)
class BoundResult:
    """Optimal number of preset modes and the matching bound.

    ``branch`` records which case of the closed form was used:
    ``"M*Gamma"``, ``"N"``, ``"M*Gamma_opt"`` or ``"brute_force"``.
    """

    n_star: int
    bound: Fraction
    Gamma: int
    alpha: int
    Gamma_opt: Optional[int]
    branch: str

    @property
    def decomposition(self):
        return (self.Gamma, self.alpha, self.Gamma_opt)


def ldof_function(M: int, K: int, n: int) -> Fraction:
    """D(n) = nK / (K + ceil(n/M)(n-1))."""
    if M < 1 or K < 1:
        raise DomainError(f"M, K must be >= 1, got M={M}, K={K}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return Fraction(n * K, K + ceil_div(n, M) * (n - 1))


def _sqrt_floor_ceil(K: int, M: int) -> tuple[int, int]:
    """Exact floor and ceil of sqrt(K/M)."""
    lo = isqrt(K // M)
    while (lo + 1) ** 2 * M <= K:
        lo += 1
    while lo > 0 and lo * lo * M > K:
        lo -= 1
    hi = lo if lo * lo * M == K else lo + 1
    return lo, hi


def _brute(M: int, K: int, n_eff: int) -> int:
    best = 1
    for n in range(2, n_eff + 1):
        if ldof_function(M, K, n) > ldof_function(M, K, best):
            best = n
    return best


def _select(M: int, K: int, n_eff: int) -> BoundResult:
    Gamma, alpha = divmod(n_eff, M)
    lo, hi = _sqrt_floor_ceil(K, M)
    if n_eff < M * hi:
        if K - Gamma - 1 <= 0:
            n_star, branch = _brute(M, K, n_eff), "brute_force"
        elif Fraction(alpha) <= Fraction(n_eff * (M * Gamma - 1), K - Gamma - 1):
            n_star, branch = M * Gamma, "M*Gamma"
        else:
            n_star, branch = n_eff, "N"
        return BoundResult(n_star, ldof_function(M, K, n_star), Gamma, alpha, None, branch)
    cands = [g for g in (lo, hi) if g >= 1]
    # g(gamma) = M*gamma + K/gamma; ties go to the smaller gamma
    g_opt = min(cands, key=lambda g: (Fraction(M * g) + Fraction(K, g), g))
    n_star = M * g_opt
    return BoundResult(n_star, ldof_function(M, K, n_star), Gamma, alpha, g_opt, "M*Gamma_opt")


def optimal_preset_modes(config: SystemConfig) -> BoundResult:
    """n* and the linear sum-DoF bound D(n*) for the (M, N, K) channel."""
    if config.K < 2:
        raise DomainError("K must be >= 2")
    return _select(config.M, config.K, config.N)


def siso_bound(N: int, K: int) -> BoundResult:
    """Single-antenna transmitters (M = 1)."""
    return optimal_preset_modes(SystemConfig(1, N, K))


def downlink_cell_bound(cfg: CellularConfig) -> BoundResult:
    """G cells of K users each; only MG transmit antennas exist in total."""
    if cfg.direction != "downlink":
        raise DomainError("downlink_cell_bound needs a downlink configuration")
    KG = cfg.K * cfg.G
    if KG < 2:
        raise DomainError("at least two receivers are needed")
    return _select(cfg.M, KG, min(cfg.N, cfg.M * cfg.G))


def uplink_cell_bound(antennas_per_cell: Sequence[Sequence[int]], N: int) -> BoundResult:
    """Cells whose transmitters cooperate; valid when every cell has the same antenna total."""
    if not antennas_per_cell:
        raise DomainError("no cells given")
    sums = []
    for cell in antennas_per_cell:
        if not cell or any(int(x) < 1 for x in cell):
            raise DomainError("antenna counts must be positive")
        sums.append(sum(int(x) for x in cell))
    if len(set(sums)) != 1:
        raise AsymmetricCells(f"cell antenna totals differ: {sums}")
    return optimal_preset_modes(SystemConfig(sums[0], N, len(antennas_per_cell)))


def sweep_bound(M: int, K: int, n_max: int) -> list[tuple[int, int, Fraction]]:
    """(N, n*, bound) for N = 1 .. n_max."""
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    rows = []
    for N in range(1, n_max + 1):
        r = optimal_preset_modes(SystemConfig(M, N, K))
        rows.append((N, r.n_star, r.bound))
    return rows


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "n_star", "bound_num", "bound_den", "bound_decimal"])
    for N, n_star, b in rows:
        w.writerow([N, n_star, b.numerator, b.denominator, decimal(b)])
    return buf.getvalue()
