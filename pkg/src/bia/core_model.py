"""Domain types, effective-matrix assembly and the scheme document format.

Indices are 1-based throughout: transmitters and receivers in ``[1:K]``,
antennas in ``[1:M]``, preset modes in ``[1:N]`` and slots in ``[1:m]``
when reported to users (0-based only inside Python sequences).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DomainError, ParseError, PatternOutOfRange, SchemaVersionMismatch

SCHEMA_VERSION = 1

__all__ = [
    "SystemConfig", "CellularConfig", "AntennaId", "AlignmentSet", "Scheme",
    "ChannelRealization", "UserResult", "VerificationReport", "Violation",
    "antennas", "effective_columns", "validate_scheme", "dumps_scheme",
    "loads_scheme", "save_scheme", "load_scheme", "SCHEMA_VERSION",
]


@dataclass(frozen=True)
class SystemConfig:
    """The (M, N, K) interference channel."""

    M: int
    N: int
    K: int

    def __post_init__(self):
        for name in ("M", "N", "K"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise DomainError(f"{name} must be an integer, got {v!r}")
        if self.M < 1 or self.N < 1:
            raise DomainError(f"M and N must be >= 1, got M={self.M}, N={self.N}")
        if self.K < 2:
            raise DomainError(f"K must be >= 2, got K={self.K}")


@dataclass(frozen=True)
class CellularConfig:
    """G interfering cells; K users per cell (downlink)."""

    G: int
    K: int
    M: int
    N: int
    direction: str = "downlink"

    def __post_init__(self):
        if min(self.G, self.K, self.M, self.N) < 1:
            raise DomainError("all cellular counts must be >= 1")
        if self.direction not in ("downlink", "uplink"):
            raise DomainError(f"unknown direction {self.direction!r}")


_ANT_RE = re.compile(r"^\s*(\d+)\((\d+)\)\s*$")


@dataclass(frozen=True, order=True)
class AntennaId:
    """Antenna ``i(a)``; the dataclass ordering is the order of the antenna set."""

    transmitter: int
    antenna: int

    def __str__(self):
        return f"{self.transmitter}({self.antenna})"

    @classmethod
    def parse(cls, text: str) -> "AntennaId":
        mt = _ANT_RE.match(text)
        if mt is None:
            raise ValueError(f"bad antenna id {text!r}")
        return cls(int(mt.group(1)), int(mt.group(2)))

    def flat(self, M: int) -> int:
        """0-based position in the ordered antenna set."""
        return (self.transmitter - 1) * M + self.antenna - 1


def antennas(config: SystemConfig) -> list[AntennaId]:
    """All antennas ordered 1(1), 1(2), ..., K(M)."""
    return [AntennaId(i, a) for i in range(1, config.K + 1)
            for a in range(1, config.M + 1)]


@dataclass(frozen=True)
class AlignmentSet:
    """Symbols aligned at every receiver outside ``transmitters``.

    ``members`` holds (antenna, symbol_index) pairs, symbol indices 1-based.
    """

    transmitters: frozenset
    members: tuple

    def __init__(self, transmitters: Iterable[int], members: Iterable[tuple]):
        object.__setattr__(self, "transmitters", frozenset(int(t) for t in transmitters))
        object.__setattr__(self, "members", tuple((ant, int(d)) for ant, d in members))

    @property
    def cardinality(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Scheme:
    """A symbol-extension scheme.

    Attributes
    ----------
    config : SystemConfig
    m : int
        Symbol-extension length.
    beamforming : dict
        AntennaId -> tuple of columns; each column is a length-m tuple of 0/1.
        Column ``d-1`` carries symbol ``d`` of that antenna.
    patterns : dict
        Receiver j -> length-m tuple of preset modes.
    sets : tuple of AlignmentSet
    """

    config: SystemConfig
    m: int
    beamforming: Mapping
    patterns: Mapping
    sets: tuple = field(default_factory=tuple)

    def __post_init__(self):
        bf = {ant: tuple(tuple(int(x) for x in col) for col in cols)
              for ant, cols in sorted(self.beamforming.items())}
        pats = {int(j): tuple(int(x) for x in p) for j, p in sorted(self.patterns.items())}
        object.__setattr__(self, "beamforming", bf)
        object.__setattr__(self, "patterns", pats)
        object.__setattr__(self, "sets", tuple(self.sets))

    def symbols(self, transmitter: int | None = None) -> list[tuple[AntennaId, int]]:
        """(antenna, symbol index) pairs, optionally restricted to one transmitter."""
        out = []
        for ant, cols in self.beamforming.items():
            if transmitter is None or ant.transmitter == transmitter:
                out.extend((ant, d) for d in range(1, len(cols) + 1))
        return out

    def num_symbols(self, transmitter: int | None = None) -> int:
        return len(self.symbols(transmitter))

    def with_pattern(self, j: int, pattern: Iterable[int]) -> "Scheme":
        pats = dict(self.patterns)
        pats[j] = tuple(pattern)
        return Scheme(self.config, self.m, self.beamforming, pats, self.sets)


class ChannelRealization:
    """Channel coefficients h_{j,i(a)}(mode), stored as exact rationals.

    ``table[j-1][flat(i(a))][mode-1]`` holds the value.
    """

    def __init__(self, config: SystemConfig, table):
        self.config = config
        K, M, N = config.K, config.M, config.N
        rows = []
        for j in range(K):
            per_ant = []
            for a in range(M * K):
                vals = tuple(Fraction(table[j][a][c]) for c in range(N))
                if any(v == 0 for v in vals):
                    raise DomainError("channel coefficients must be nonzero")
                per_ant.append(vals)
            rows.append(tuple(per_ant))
        self.table = tuple(rows)

    def coeff(self, j: int, ant: AntennaId, mode: int) -> Fraction:
        return self.table[j - 1][ant.flat(self.config.M)][mode - 1]

    def __len__(self):
        return self.config.K * self.config.K * self.config.M * self.config.N

    def __eq__(self, other):
        return (isinstance(other, ChannelRealization)
                and self.config == other.config and self.table == other.table)

    def scaled(self, j: int, ant: AntennaId, mode: int, lam) -> "ChannelRealization":
        """Copy with one coefficient multiplied by ``lam``."""
        tab = [[list(v) for v in row] for row in self.table]
        tab[j - 1][ant.flat(self.config.M)][mode - 1] *= Fraction(lam)
        return ChannelRealization(self.config, tab)


@dataclass(frozen=True)
class UserResult:
    measured_dof: int
    expected_dof: int
    desired_rank: int
    interference_rank: int
    expected_interference: int

    @property
    def passed(self) -> bool:
        return (self.measured_dof == self.expected_dof
                and self.interference_rank == self.expected_interference)


@dataclass(frozen=True)
class VerificationReport:
    per_user: Mapping
    m: int
    sum_dof: Fraction
    passed: bool
    decodability_square: bool = False
    decodability_full_rank: bool = False

    def failing_users(self) -> list[int]:
        return [j for j, r in self.per_user.items() if not r.passed]


@dataclass(frozen=True)
class Violation:
    code: str
    where: str

    def __str__(self):
        return f"{self.code} at {self.where}"


def effective_columns(scheme: Scheme, channel: ChannelRealization, receiver: int,
                      antenna: AntennaId) -> list[list[Fraction]]:
    """H_{j,i(a)} V_{i(a)} as a list of m rows with d_{i(a)} entries each."""
    K, N = scheme.config.K, scheme.config.N
    if not 1 <= receiver <= K:
        raise DomainError(f"receiver {receiver} outside [1:{K}]")
    pattern = scheme.patterns[receiver]
    for t, mode in enumerate(pattern):
        if not 1 <= mode <= N:
            raise PatternOutOfRange(f"l_{receiver}({t + 1})={mode} not in [1:{N}]")
    cols = scheme.beamforming.get(antenna, ())
    return [[channel.coeff(receiver, antenna, pattern[t]) * col[t] for col in cols]
            for t in range(scheme.m)]


def validate_scheme(scheme: Scheme) -> list[Violation]:
    """Structural checks; an empty list means the scheme is well formed."""
    cfg, m = scheme.config, scheme.m
    out: list[Violation] = []
    if m < 1:
        out.append(Violation("BAD_EXTENSION", "m"))
    valid_ants = set(antennas(cfg))
    for ant, cols in scheme.beamforming.items():
        if ant not in valid_ants:
            out.append(Violation("UNKNOWN_ANTENNA", f"beamforming[{ant}]"))
        for d, col in enumerate(cols, 1):
            if len(col) != m:
                out.append(Violation("BAD_LENGTH", f"beamforming[{ant}][{d}]"))
            for t, x in enumerate(col, 1):
                if x not in (0, 1):
                    out.append(Violation("NON_BINARY", f"beamforming[{ant}][{d}][{t}]"))
    for j in range(1, cfg.K + 1):
        if j not in scheme.patterns:
            out.append(Violation("MISSING_PATTERN", f"patterns[{j}]"))
    for j, pat in scheme.patterns.items():
        if not 1 <= j <= cfg.K:
            out.append(Violation("UNKNOWN_RECEIVER", f"patterns[{j}]"))
            continue
        if len(pat) != m:
            out.append(Violation("BAD_LENGTH", f"patterns[{j}]"))
        for t, mode in enumerate(pat, 1):
            if not 1 <= mode <= cfg.N:
                out.append(Violation("PATTERN_OUT_OF_RANGE", f"({j},{t})"))
    seen: dict = {}
    for k, s in enumerate(scheme.sets, 1):
        if not s.transmitters:
            out.append(Violation("EMPTY_TRANSMITTERS", f"sets[{k}]"))
        if len(set(s.members)) != len(s.members):
            out.append(Violation("REPEATED_MEMBER", f"sets[{k}]"))
        for ant, d in s.members:
            if ant.transmitter not in s.transmitters:
                out.append(Violation("TRANSMITTER_MISMATCH", f"sets[{k}] member {ant},{d}"))
            cols = scheme.beamforming.get(ant)
            if cols is None or not 1 <= d <= len(cols):
                out.append(Violation("UNKNOWN_SYMBOL", f"sets[{k}] member {ant},{d}"))
            if (ant, d) in seen and seen[(ant, d)] != k:
                out.append(Violation("DUPLICATE_SET_MEMBERSHIP", f"symbol {ant},{d}"))
            seen.setdefault((ant, d), k)
    return out


# -- document format ---------------------------------------------------------

def _scheme_to_obj(scheme: Scheme) -> dict:
    cfg = scheme.config
    sets = []
    for s in scheme.sets:
        sets.append({
            "members": [{"antenna": str(a), "symbol": d} for a, d in s.members],
            "transmitters": sorted(s.transmitters),
        })
    return {
        "beamforming": {str(a): [list(c) for c in cols]
                        for a, cols in sorted(scheme.beamforming.items())},
        "config": {"K": cfg.K, "M": cfg.M, "N": cfg.N},
        "m": scheme.m,
        "patterns": {str(j): list(p) for j, p in sorted(scheme.patterns.items())},
        "sets": sets,
        "version": SCHEMA_VERSION,
    }


def dumps_scheme(scheme: Scheme) -> str:
    """Canonical JSON text: sorted keys, antennas and receivers in index order.

    Numeric arrays stay on one line so documents diff row by row.
    """
    obj = _scheme_to_obj(scheme)
    lines = ["{"]
    lines.append(f'  "beamforming": {{')
    bf = list(obj["beamforming"].items())
    for k, (ant, cols) in enumerate(bf):
        inner = ",\n".join(f"      {json.dumps(c)}" for c in cols)
        body = f"[\n{inner}\n    ]" if cols else "[]"
        lines.append(f'    "{ant}": {body}' + ("," if k < len(bf) - 1 else ""))
    lines.append("  },")
    lines.append(f'  "config": {json.dumps(obj["config"], sort_keys=True)},')
    lines.append(f'  "m": {obj["m"]},')
    lines.append('  "patterns": {')
    pats = list(obj["patterns"].items())
    for k, (j, p) in enumerate(pats):
        lines.append(f'    "{j}": {json.dumps(p)}' + ("," if k < len(pats) - 1 else ""))
    lines.append("  },")
    lines.append('  "sets": [')
    for k, s in enumerate(obj["sets"]):
        lines.append(f"    {json.dumps(s, sort_keys=True)}" + ("," if k < len(obj['sets']) - 1 else ""))
    lines.append("  ],")
    lines.append(f'  "version": {obj["version"]}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _require(obj, key, kind, fieldname):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError("missing field", field=fieldname)
    val = obj[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise ParseError("expected integer", field=fieldname)
    if kind is not int and not isinstance(val, kind):
        raise ParseError(f"expected {kind.__name__}", field=fieldname)
    return val


def _int_list(val, fieldname):
    if not isinstance(val, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in val):
        raise ParseError("expected list of integers", field=fieldname)
    return val


def loads_scheme(text: str) -> Scheme:
    """Parse a scheme document; raises ParseError or SchemaVersionMismatch."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("document must be an object", line=1)
    version = _require(obj, "version", int, "version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"version {version}, expected {SCHEMA_VERSION}",
                                    field="version")
    c = _require(obj, "config", dict, "config")
    try:
        cfg = SystemConfig(_require(c, "M", int, "config.M"), _require(c, "N", int, "config.N"),
                           _require(c, "K", int, "config.K"))
    except DomainError as exc:
        raise ParseError(exc.message, field="config") from None
    m = _require(obj, "m", int, "m")
    bf_raw = _require(obj, "beamforming", dict, "beamforming")
    bf = {}
    for key, cols in bf_raw.items():
        try:
            ant = AntennaId.parse(key)
        except ValueError:
            raise ParseError(f"bad antenna key {key!r}", field="beamforming") from None
        if not isinstance(cols, list):
            raise ParseError("expected list of columns", field=f"beamforming.{key}")
        bf[ant] = [_int_list(col, f"beamforming.{key}[{d}]") for d, col in enumerate(cols, 1)]
    pats_raw = _require(obj, "patterns", dict, "patterns")
    pats = {}
    for key, p in pats_raw.items():
        if not key.isdigit():
            raise ParseError(f"bad receiver key {key!r}", field="patterns")
        pats[int(key)] = _int_list(p, f"patterns.{key}")
    sets_raw = _require(obj, "sets", list, "sets")
    sets = []
    for k, s in enumerate(sets_raw, 1):
        tx = _int_list(_require(s, "transmitters", list, f"sets[{k}].transmitters"),
                       f"sets[{k}].transmitters")
        mem_raw = _require(s, "members", list, f"sets[{k}].members")
        members = []
        for mm in mem_raw:
            ant_txt = _require(mm, "antenna", str, f"sets[{k}].members.antenna")
            d = _require(mm, "symbol", int, f"sets[{k}].members.symbol")
            try:
                members.append((AntennaId.parse(ant_txt), d))
            except ValueError:
                raise ParseError(f"bad antenna {ant_txt!r}", field=f"sets[{k}]") from None
        sets.append(AlignmentSet(tx, members))
    return Scheme(cfg, m, bf, pats, tuple(sets))


def save_scheme(scheme: Scheme, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scheme(scheme))


def load_scheme(path) -> Scheme:
    with open(path, encoding="utf-8") as fh:
        return loads_scheme(fh.read())
