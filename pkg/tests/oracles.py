"""Independent reference computations used by the test suite.

Nothing here imports the algorithms under test: bounds are brute-forced,
ranks come from sympy or numpy, the LP goes through scipy's HiGHS.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import sympy
from scipy.optimize import linprog


def D(M, K, n):
    return Fraction(n * K, K + math.ceil(n / M) * (n - 1))


def brute_bound(M, K, n_eff):
    return max(D(M, K, n) for n in range(1, n_eff + 1))


def sympy_rank(rows):
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix([[sympy.Rational(x) for x in r] for r in rows]).rank()


def projection_dim(A, B, tol=1e-9):
    """dim of span(B) projected onto the orthogonal complement of span(A)."""
    if A.shape[1]:
        U, s, _ = np.linalg.svd(A, full_matrices=False)
        r = int(np.sum(s > tol * max(s[0], 1e-300))) if s.size else 0
        Q = U[:, :r]
        P = B - Q @ (Q.T @ B)
    else:
        P = B
    if P.size == 0:
        return 0
    s = np.linalg.svd(P, compute_uv=False)
    scale = max(np.linalg.norm(B, 2), 1e-300)
    return int(np.sum(s > tol * scale))


def converse_lp_highs(M, K, n):
    """Same inequality system built from scratch and solved in floating point."""
    ants = [(i, a) for i in range(1, K + 1) for a in range(1, M + 1)]
    MK = len(ants)
    subsets = list(itertools.combinations(range(MK), n))
    nv = MK + len(subsets)
    A, b = [], []
    for j in range(1, K + 1):
        row = [1.0] * MK + [0.0] * len(subsets)
        for k, T in enumerate(subsets):
            if all(ants[i][0] != j for i in T):
                row[MK + k] = -(n - 1)
        A.append(row)
        b.append(1.0)
    for i in range(MK):
        row = [0.0] * nv
        row[i] = -1.0
        for k, T in enumerate(subsets):
            if i in T:
                row[MK + k] = 1.0
        A.append(row)
        b.append(0.0)
    c = [-1.0] * MK + [0.0] * len(subsets)
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * nv, method="highs")
    assert res.status == 0
    return -res.fun


def dense_receive_matrices(doc, table, j):
    """Desired and interference blocks at receiver j from raw document data.

    ``doc`` is the parsed JSON dict, ``table[j-1][flat][mode-1]`` the channel.
    """
    M = doc["config"]["M"]
    m = doc["m"]
    pat = doc["patterns"][str(j)]
    des, intf = [], []
    for key, cols in doc["beamforming"].items():
        i, a = key.rstrip(")").split("(")
        i, a = int(i), int(a)
        flat = (i - 1) * M + a - 1
        for col in cols:
            v = [Fraction(table[j - 1][flat][pat[t] - 1]) * col[t] for t in range(m)]
            (des if i == j else intf).append(v)
    return des, intf


def oracle_dof(doc, table, j):
    des, intf = dense_receive_matrices(doc, table, j)
    m = doc["m"]

    def rk(cols):
        if not cols:
            return 0
        return sympy_rank([[c[t] for c in cols] for t in range(m)])

    return rk(intf + des) - rk(intf), rk(intf)
