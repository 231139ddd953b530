"""Alignment-set partitions: validity checks, extension accounting, templates.

A plan only says which transmit symbols are grouped together; beamforming
vectors and preset-mode patterns are the business of :mod:`bia.synth`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

from .bounds import ceil_div, ldof_function, optimal_preset_modes
from .core_model import AlignmentSet, AntennaId, SystemConfig, Violation, antennas
from .errors import DomainError, UnsupportedConfig

__all__ = [
    "PartitionPlan", "minimal_transmitter_count", "validate_partition",
    "required_extension", "construct_partition", "naive_partition", "achieved_ratio",
    "group_layout",
]


@dataclass(frozen=True)
class PartitionPlan:
    eta: int
    sets: tuple
    symbols_per_antenna: Mapping
    case: str = ""


def minimal_transmitter_count(n: int, M: int) -> int:
    """Fewest transmitters that can supply n symbols on distinct antennas."""
    if n < 1 or M < 1:
        raise DomainError(f"need n >= 1 and M >= 1, got n={n}, M={M}")
    return ceil_div(n, M)


def validate_partition(plan: PartitionPlan, config: SystemConfig) -> list[Violation]:
    out: list[Violation] = []
    cap = min(config.N, config.M * config.K)
    owner: dict = {}
    for k, s in enumerate(plan.sets, 1):
        if s.cardinality > cap:
            out.append(Violation("CARDINALITY_EXCEEDS_MODES", f"sets[{k}] has {s.cardinality} > {cap}"))
        tx = {a.transmitter for a, _ in s.members}
        if tx != set(s.transmitters):
            out.append(Violation("TRANSMITTER_MISMATCH", f"sets[{k}]"))
        for a, d in s.members:
            if not 1 <= d <= plan.symbols_per_antenna.get(a, 0):
                out.append(Violation("UNKNOWN_SYMBOL", f"{a},{d} in sets[{k}]"))
            elif (a, d) in owner:
                out.append(Violation("EXCLUSIVITY", f"symbol {a},{d}"))
            else:
                owner[(a, d)] = k
    for a, cnt in sorted(plan.symbols_per_antenna.items()):
        for d in range(1, cnt + 1):
            if (a, d) not in owner:
                out.append(Violation("UNCOVERED", f"symbol {a},{d}"))
    return out


def required_extension(plan: PartitionPlan, config: SystemConfig):
    """Per-receiver dimension totals and whether they all agree.

    A set contributes its full size at receivers it serves and a single
    aligned dimension everywhere else.
    """
    if not plan.sets:
        raise DomainError("empty plan")
    per = {}
    for j in range(1, config.K + 1):
        per[j] = sum(s.cardinality if j in s.transmitters else 1 for s in plan.sets)
    return per, len(set(per.values())) == 1


def achieved_ratio(plan: PartitionPlan, config: SystemConfig) -> Fraction:
    per, _ = required_extension(plan, config)
    total = sum(plan.symbols_per_antenna.values())
    return Fraction(total, max(per.values()))


def _plan(sets, config, eta, case):
    counts = {a: 0 for a in antennas(config)}
    for s in sets:
        for a, d in s.members:
            counts[a] = max(counts[a], d)
    return PartitionPlan(eta, tuple(sets), counts, case)


def _windows(seq, n):
    return [seq[k:k + n] for k in range(0, len(seq), n)]


def group_layout(config: SystemConfig, n_star: int):
    """(R1, R2) when both are integers, else None."""
    MK = config.M * config.K
    if n_star % config.M or MK % n_star:
        return None
    return n_star // config.M, MK // n_star


def _case_a(config, n_star, R1, R2):
    M = config.M
    sets = []
    for g in range(1, R2 + 1):
        tx = range((g - 1) * R1 + 1, g * R1 + 1)
        ants = [AntennaId(i, a) for i in tx for a in range(1, M + 1)]
        for d, _ in enumerate(itertools.product(range(1, n_star), repeat=R2 - 1), 1):
            sets.append(AlignmentSet(tx, [(a, d) for a in ants]))
    return sets, (n_star - 1) ** (R2 - 1)


def _sequence_sets(config, n_star, eta):
    """Chunk eta laps of the antenna order into consecutive windows of n_star."""
    ants = antennas(config)
    MK = len(ants)
    seq = [(ants[p % MK], p // MK + 1) for p in range(eta * MK)]
    return [AlignmentSet({a.transmitter for a, _ in w}, w) for w in _windows(seq, n_star)]


def _cyclic_pairs(config):
    # {v_{j,2}, v_{j+1,1}}, wrapping at K
    K = config.K
    return [AlignmentSet({j, j % K + 1}, [(AntennaId(j, 1), 2), (AntennaId(j % K + 1, 1), 1)])
            for j in range(1, K + 1)]


def _rotated_layers(config, n_star):
    """Layer r (symbol r+1): antenna order rotated by r, cut into windows."""
    ants = antennas(config)
    sets = []
    for r in range(n_star):
        rot = ants[r:] + ants[:r]
        for w in _windows(rot, n_star):
            sets.append(AlignmentSet({a.transmitter for a in w}, [(a, r + 1) for a in w]))
    return sets


def construct_partition(config: SystemConfig) -> PartitionPlan:
    """Balanced partition into alignment sets of cardinality n*.

    Case A: n* is a multiple of M and divides MK (groups of R1 users).
    Case B: n* is a multiple of M only (symbols replicated eta times).
    Case C: n* is not a multiple of M (rotated antenna-order layers).
    Raises UnsupportedConfig when the template does not balance.
    """
    n_star = optimal_preset_modes(config).n_star
    M, K = config.M, config.K
    MK = M * K
    if n_star == 1:
        sets = [AlignmentSet({a.transmitter}, [(a, 1)]) for a in antennas(config)]
        plan = _plan(sets, config, 1, "single")
    elif group_layout(config, n_star) is not None:
        R1, R2 = group_layout(config, n_star)
        if R2 < 2:
            raise UnsupportedConfig(f"single group (R2={R2})")
        sets, eta = _case_a(config, n_star, R1, R2)
        plan = _plan(sets, config, eta, "A")
    elif n_star % M == 0:
        eta = n_star // gcd(n_star, MK)
        if M == 1 and n_star == 2:
            sets = _cyclic_pairs(config)
        else:
            sets = _sequence_sets(config, n_star, eta)
        plan = _plan(sets, config, eta, "B")
    else:
        if MK % n_star:
            raise UnsupportedConfig(f"n*={n_star} does not divide MK={MK}")
        plan = _plan(_rotated_layers(config, n_star), config, n_star, "C")
    _, balanced = required_extension(plan, config)
    if validate_partition(plan, config) or not balanced \
            or achieved_ratio(plan, config) != ldof_function(M, K, n_star):
        raise UnsupportedConfig(f"no balanced template for ({M},{config.N},{K})")
    return plan


def naive_partition(config: SystemConfig, n: int) -> PartitionPlan:
    """One symbol per antenna, antenna order cut into windows of n (may be unbalanced)."""
    if config.M * config.K % n:
        raise DomainError(f"n={n} does not divide MK")
    ants = antennas(config)
    sets = [AlignmentSet({a.transmitter for a in w}, [(a, 1) for a in w]) for w in _windows(ants, n)]
    return _plan(sets, config, 1, "naive")
