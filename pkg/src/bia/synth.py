"""Scheme synthesis: beamforming vectors plus preset-mode patterns.

Four constructions are available:

* ``synthesize_grouped``: supersymbol for groups of R1 users (n* a multiple
  of M and a divisor of MK).
* ``synthesize_circulant_siso``: odd-K single-antenna channels with n* = 2,
  sets {v_{j,2}, v_{j+1,1}}.
* ``synthesize_matching``: two-antenna channels with n* = 3 and even K,
  sets drawn from the rotated windows of the antenna order.
* ``synthesize_tdma``: the n* = 1 baseline.

Every synthesized scheme is meant to be certified by :mod:`bia.verifier`.
"""

from __future__ import annotations

import itertools
from collections import deque

from .alignment import group_layout
from .bounds import optimal_preset_modes
from .core_model import AlignmentSet, AntennaId, Scheme, SystemConfig, antennas
from .errors import DomainError, NotIntegerCase, UnknownName, UnsupportedConfig
from .verifier import _exact_rank

__all__ = [
    "SupersymbolLayout", "supersymbol_layout", "synthesize_grouped", "synthesize_tdma",
    "synthesize_circulant_siso", "synthesize_matching", "golden_example", "synthesize",
    "canonical_form",
]

def _empty_bf(config):
    return {a: [] for a in antennas(config)}


def _add_symbol(bf, ant, support, m):
    bf[ant].append([1 if t in support else 0 for t in range(m)])
    return len(bf[ant])


# -- case A ---------------------------------------------------------------------

class SupersymbolLayout:
    """Slot indexing for the group supersymbol.

    Block 1 holds one slot per tuple in [1:n*-1]^R2 (lexicographic); block 2
    holds R2 segments, segment g indexed by l in [1:n*-1]^(R2-1).
    """

    def __init__(self, R1: int, R2: int, n_star: int):
        self.R1, self.R2, self.n_star = R1, R2, n_star
        q = range(1, n_star)
        self.block1_slots = list(itertools.product(q, repeat=R2))
        self.segment_keys = list(itertools.product(q, repeat=R2 - 1))
        self._b1 = {t: i for i, t in enumerate(self.block1_slots)}
        self._seg = {l: i for i, l in enumerate(self.segment_keys)}

    @property
    def m(self) -> int:
        return len(self.block1_slots) + self.R2 * len(self.segment_keys)

    def block1(self, t) -> int:
        return self._b1[tuple(t)]

    def segment(self, g: int, l) -> int:
        """Slot of segment g (1-based) entry l."""
        return len(self.block1_slots) + (g - 1) * len(self.segment_keys) + self._seg[tuple(l)]


def supersymbol_layout(config: SystemConfig) -> SupersymbolLayout:
    n_star = optimal_preset_modes(config).n_star
    gl = group_layout(config, n_star)
    if gl is None:
        raise NotIntegerCase(f"n*={n_star} with M={config.M}, K={config.K}")
    return SupersymbolLayout(gl[0], gl[1], n_star)


def synthesize_tdma(config: SystemConfig) -> Scheme:
    """One symbol per transmitter from its first antenna, one slot each."""
    K = config.K
    bf = _empty_bf(config)
    sets = []
    for i in range(1, K + 1):
        d = _add_symbol(bf, AntennaId(i, 1), {i - 1}, K)
        sets.append(AlignmentSet({i}, [(AntennaId(i, 1), d)]))
    pats = {j: [1] * K for j in range(1, K + 1)}
    return Scheme(config, K, bf, pats, tuple(sets))


def synthesize_grouped(config: SystemConfig) -> Scheme:
    """Group supersymbol when R1 = n*/M and R2 = MK/n* are integers.

    Group g owns transmitters (g-1)R1+1 .. gR1.  Set (g, l) takes one symbol
    from each of the group's n* antennas and occupies the n*-1 block-1 slots
    whose other coordinates equal l plus slot l of segment g.  Receivers of
    group g use mode t_g in block-1 slot t, mode n* on their own segment and
    mode l_g on the segments of other groups, so every foreign set sees a
    single mode while the owners see n* distinct ones.
    """
    n_star = optimal_preset_modes(config).n_star
    if n_star == 1:
        return synthesize_tdma(config)
    gl = group_layout(config, n_star)
    if gl is None:
        raise NotIntegerCase(f"R1 or R2 not integer for n*={n_star}, M={config.M}, K={config.K}")
    R1, R2 = gl
    if R2 < 2:
        raise DomainError(f"R2={R2}: a single group leaves nothing to align")
    lay = SupersymbolLayout(R1, R2, n_star)
    m = lay.m
    bf = _empty_bf(config)
    sets = []
    for g in range(1, R2 + 1):
        tx = list(range((g - 1) * R1 + 1, g * R1 + 1))
        ants = [AntennaId(i, a) for i in tx for a in range(1, config.M + 1)]
        for l in lay.segment_keys:
            sup = {lay.block1(t) for t in lay.block1_slots if t[:g - 1] + t[g:] == l}
            sup.add(lay.segment(g, l))
            members = [(a, _add_symbol(bf, a, sup, m)) for a in ants]
            sets.append(AlignmentSet(tx, members))
    pats = {}
    for g in range(1, R2 + 1):
        p = [0] * m
        for t in lay.block1_slots:
            p[lay.block1(t)] = t[g - 1]
        for g2 in range(1, R2 + 1):
            for l in lay.segment_keys:
                if g2 == g:
                    p[lay.segment(g2, l)] = n_star
                else:
                    # position of g inside the others-tuple of g2
                    p[lay.segment(g2, l)] = l[g - 1 if g < g2 else g - 2]
        for i in range((g - 1) * R1 + 1, g * R1 + 1):
            pats[i] = p
    return Scheme(config, m, bf, pats, tuple(sets))


# -- odd-K circulant SISO ----------------------------------------------------------

def _circulant_supports(K: int):
    """Slot supports of S_1..S_K on a spider tree rooted at S_1.

    Each parent-child edge of the tree is a slot shared by both sets, each
    leaf gets one private slot (the root too when K = 3).  Slots are issued
    in breadth-first order, which reproduces the published K = 5 vectors.
    """
    children = {s: [] for s in range(1, K + 1)}
    for leg in ([K], list(range(3, K - 1, 2)), list(range(2, K, 2))):
        prev = 1
        for s in leg:
            children[prev].append(s)
            prev = s
    order = [K, 2, 3] if K > 3 else [3, 2]
    children[1] = [c for c in order if c in children[1]]
    supp = {s: [] for s in range(1, K + 1)}
    slot = 0
    queue = deque([1])
    while queue:
        s = queue.popleft()
        if s != 1 and not children[s]:
            supp[s].append(slot)
            slot += 1
        for c in children[s]:
            supp[s].append(slot)
            supp[c].append(slot)
            slot += 1
            queue.append(c)
        if s == 1 and len(children[1]) < 3:
            supp[1].append(slot)
            slot += 1
    return supp, slot


def _circulant_pattern(K, supp, m, j):
    """Cheapest two-mode pattern that aligns foreign sets and resolves owned ones.

    Foreign supports are merged into classes that must share a mode; among
    all colourings we keep the one with the fewest mode-2 slots (then the
    lexicographically smallest) that splits both owned sets and makes the
    receive space full rank.
    """
    own = {j, (j - 2) % K + 1}
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, P in supp.items():
        if s not in own:
            for t in P[1:]:
                parent[find(t)] = find(P[0])
    classes = sorted({find(t) for t in range(m)})
    cands = []
    for bits in itertools.product((1, 2), repeat=len(classes)):
        colour = dict(zip(classes, bits))
        pat = tuple(colour[find(t)] for t in range(m))
        cands.append((pat.count(2), pat))
    cands.sort()
    for _, pat in cands:
        vecs, ok = [], True
        for s, P in supp.items():
            if s in own:
                modes = {pat[t] for t in P}
                if len(modes) < 2:
                    ok = False
                    break
                for c in (1, 2):
                    vecs.append({t: 1 for t in P if pat[t] == c})
            else:
                vecs.append({t: 1 for t in P})
        if ok and _exact_rank(vecs) == m:
            return list(pat)
    raise UnsupportedConfig(f"no two-mode pattern for receiver {j} at K={K}")


def synthesize_circulant_siso(K: int, N: int = 2) -> Scheme:
    """(1, N, K) with K odd: two symbols per user over K + 2 slots."""
    if K < 3 or K % 2 == 0:
        raise DomainError(f"K must be odd and >= 3, got {K}")
    if N < 2:
        raise DomainError("two preset modes are needed")
    config = SystemConfig(1, N, K)
    supp, m = _circulant_supports(K)
    cols = {}
    for s in range(1, K + 1):
        col = [1 if t in supp[s] else 0 for t in range(m)]
        cols[(s, 2)] = col
        cols[(s % K + 1, 1)] = col
    bf = {AntennaId(i, 1): [cols[(i, 1)], cols[(i, 2)]] for i in range(1, K + 1)}
    sets = [AlignmentSet({s, s % K + 1}, [(AntennaId(s, 1), 2), (AntennaId(s % K + 1, 1), 1)])
            for s in range(1, K + 1)]
    pats = {j: _circulant_pattern(K, supp, m, j) for j in range(1, K + 1)}
    return Scheme(config, m, bf, pats, tuple(sets))


# -- M = 2, n* = 3, even K -------------------------------------------------------

def synthesize_matching(config: SystemConfig) -> Scheme:
    """Two-matching supersymbol for M = 2, n* = 3 and even K.

    Block 1 has one slot per tuple t in {1,2}^K, receiver j using mode t_j.
    Sets are indexed by a neighbour pair (u, u+1) and a tuple l fixing the
    modes of the other K-2 receivers; a set occupies the two block-1 slots
    with those modes where (t_u, t_{u+1}) is (1,1),(2,2) or (1,2),(2,1)
    depending on the parity of u + sum(l), plus one private block-2 slot in
    which its two owners use mode 3.  Under this rule each block-1 slot
    serves one of the two perfect matchings of the user ring, so receivers
    outside a set always see a single mode.  Members alternate between the
    two antenna windows {u(1), u(2), (u+1)(1)} and {u(2), (u+1)(1), (u+1)(2)}.
    """
    M, N, K = config.M, config.N, config.K
    if M != 2 or N < 3 or K < 4 or K % 2:
        raise DomainError("needs M = 2, N >= 3 and even K >= 4")
    block1 = list(itertools.product((1, 2), repeat=K))
    index = {t: i for i, t in enumerate(block1)}
    n_sets = K * 2 ** (K - 2)
    m = len(block1) + n_sets
    bf = _empty_bf(config)
    pats = {j: [0] * m for j in range(1, K + 1)}
    for t, i in index.items():
        for j in range(1, K + 1):
            pats[j][i] = t[j - 1]
    sets = []
    nxt = len(block1)
    for u in range(1, K + 1):
        v = u % K + 1
        others = [w for w in range(1, K + 1) if w not in (u, v)]
        for k, l in enumerate(itertools.product((1, 2), repeat=K - 2)):
            diag = (u - 1 + sum(l)) % 2 == 0
            pairs = ((1, 1), (2, 2)) if diag else ((1, 2), (2, 1))
            sup = set()
            for pu, pv in pairs:
                t = [0] * K
                for w, x in zip(others, l):
                    t[w - 1] = x
                t[u - 1], t[v - 1] = pu, pv
                sup.add(index[tuple(t)])
            for w, x in zip(others, l):
                pats[w][nxt] = x
            pats[u][nxt] = pats[v][nxt] = 3
            sup.add(nxt)
            nxt += 1
            if k % 2 == 0:
                ants = [AntennaId(u, 1), AntennaId(u, 2), AntennaId(v, 1)]
            else:
                ants = [AntennaId(u, 2), AntennaId(v, 1), AntennaId(v, 2)]
            members = [(a, _add_symbol(bf, a, sup, m)) for a in ants]
            sets.append(AlignmentSet({u, v}, members))
    return Scheme(config, m, bf, pats, tuple(sets))


# -- golden transcriptions ----------------------------------------------------------

def _golden_ex3() -> Scheme:
    cfg = SystemConfig(1, 2, 4)
    a, b = [1, 1, 0], [1, 0, 1]
    bf = {AntennaId(1, 1): [a], AntennaId(2, 1): [a], AntennaId(3, 1): [b], AntennaId(4, 1): [b]}
    pats = {1: [1, 2, 1], 2: [1, 2, 1], 3: [1, 1, 2], 4: [1, 1, 2]}
    sets = (AlignmentSet({1, 2}, [(AntennaId(1, 1), 1), (AntennaId(2, 1), 1)]),
            AlignmentSet({3, 4}, [(AntennaId(3, 1), 1), (AntennaId(4, 1), 1)]))
    return Scheme(cfg, 3, bf, pats, sets)


def _golden_ex4() -> Scheme:
    cfg = SystemConfig(1, 2, 5)
    v = {
        (1, 2): [1, 1, 1, 0, 0, 0, 0], (2, 1): [1, 1, 1, 0, 0, 0, 0],
        (2, 2): [0, 1, 0, 0, 1, 0, 0], (3, 1): [0, 1, 0, 0, 1, 0, 0],
        (3, 2): [0, 0, 1, 0, 0, 1, 0], (4, 1): [0, 0, 1, 0, 0, 1, 0],
        (4, 2): [0, 0, 0, 0, 1, 0, 1], (5, 1): [0, 0, 0, 0, 1, 0, 1],
        (5, 2): [1, 0, 0, 1, 0, 0, 0], (1, 1): [1, 0, 0, 1, 0, 0, 0],
    }
    bf = {AntennaId(i, 1): [v[(i, 1)], v[(i, 2)]] for i in range(1, 6)}
    pats = {1: [1, 1, 2, 2, 1, 2, 1], 2: [1, 2, 2, 1, 1, 2, 1], 3: [1, 1, 1, 1, 2, 2, 2],
            4: [1, 1, 1, 1, 1, 2, 2], 5: [1, 1, 1, 2, 1, 1, 2]}
    sets = tuple(AlignmentSet({i, i % 5 + 1}, [(AntennaId(i, 1), 2), (AntennaId(i % 5 + 1, 1), 1)])
                 for i in range(1, 6))
    return Scheme(cfg, 7, bf, pats, sets)


_GOLDEN = {"ex3": _golden_ex3, "ex4": _golden_ex4}


def golden_example(name: str) -> Scheme:
    """The published (1,2,4) and (1,2,5) schemes, entered by hand."""
    try:
        return _GOLDEN[name]()
    except KeyError:
        raise UnknownName(f"unknown golden example {name!r}; choose from {sorted(_GOLDEN)}") from None


# -- dispatcher -----------------------------------------------------------------

def synthesize(config: SystemConfig) -> Scheme:
    """Pick the construction matching the optimal preset-mode count."""
    n_star = optimal_preset_modes(config).n_star
    M, K = config.M, config.K
    if n_star == 1:
        return synthesize_tdma(config)
    gl = group_layout(config, n_star)
    if gl is not None and gl[1] >= 2:
        return synthesize_grouped(config)
    if M == 1 and n_star == 2 and K % 2 == 1:
        return synthesize_circulant_siso(K, config.N)
    if M == 2 and n_star == 3 and K % 2 == 0:
        return synthesize_matching(config)
    raise UnsupportedConfig(f"no construction for ({M},{config.N},{K}) with n*={n_star}")


def canonical_form(scheme: Scheme):
    """Relabelling-invariant summary used to compare schemes.

    Slots are sorted by (receiver modes, active antennas) and each antenna's
    columns are sorted; set members are renamed accordingly.
    """
    m = scheme.m
    recv = sorted(scheme.patterns)

    def slot_key(t):
        active = tuple(sorted((a.transmitter, a.antenna, sum(c[t] for c in cols))
                              for a, cols in scheme.beamforming.items()))
        return (tuple(scheme.patterns[j][t] for j in recv), active)

    perm = sorted(range(m), key=slot_key)
    bf, relabel = {}, {}
    for a, cols in scheme.beamforming.items():
        permuted = [tuple(c[t] for t in perm) for c in cols]
        order = sorted(range(len(permuted)), key=lambda d: permuted[d])
        bf[a] = tuple(permuted[d] for d in order)
        for new, old in enumerate(order, 1):
            relabel[(a, old + 1)] = new
    pats = tuple(tuple(scheme.patterns[j][t] for t in perm) for j in recv)
    sets = sorted((tuple(sorted(s.transmitters)), tuple(sorted((a, relabel[(a, d)]) for a, d in s.members)))
                  for s in scheme.sets)
    return (scheme.config, m, tuple(sorted(bf.items())), pats, tuple(sets))
