"""LP decoding over the fundamental polytope, plus exact small-code oracles.

The fundamental polytope is described explicitly: for every check j and
every odd-cardinality subset S of its neighborhood,

    sum_{i in S} x_i - sum_{i in N(j) \\ S} x_i <= |S| - 1,

together with the box 0 <= x <= 1.  Inside the box these inequalities carve
out exactly the intersection of the local even-weight-code hulls, at
2^(K-1) rows per degree-K check.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from . import simplex
from .errors import DegreeTooLarge, NumericalFailure, TooLarge
from .tanner import TannerGraph

MAX_CHECK_DEGREE = 12
INTEGRALITY_TOL = 1e-6
ENUM_GUARD_BITS = 24


@dataclass(frozen=True)
class LinearProgram:
    """min <c,x> subject to A x <= b and box[0] <= x <= box[1]."""

    c: np.ndarray
    a_ub: sp.csr_matrix
    b_ub: np.ndarray
    box: tuple = (0.0, 1.0)

    @property
    def n_vars(self) -> int:
        return self.a_ub.shape[1]


@dataclass(frozen=True)
class LpSolution:
    x: np.ndarray
    value: float
    is_integral: bool
    is_unique: bool


@lru_cache(maxsize=None)
def _odd_subset_rows(k: int):
    """Coefficient template for a degree-k check: one +/-1 row per odd subset
    (+1 inside, -1 outside) with bound |S| - 1."""
    words = np.arange(1 << k, dtype=np.uint32)
    bits = (words[:, None] >> np.arange(k - 1, -1, -1, dtype=np.uint32)) & 1
    odd = bits[bits.sum(axis=1) % 2 == 1]
    coeffs = odd.astype(np.float64) * 2.0 - 1.0
    bounds = odd.sum(axis=1).astype(np.float64) - 1.0
    return coeffs, bounds


def polytope_constraints(graph: TannerGraph) -> LinearProgram:
    """Fundamental-polytope constraint set with a zero objective."""
    if graph.n_checks and int(graph.check_degrees.max()) > MAX_CHECK_DEGREE:
        raise DegreeTooLarge(
            f"check degree beyond {MAX_CHECK_DEGREE} needs 2^(K-1) rows per "
            "check and is out of the supported range")
    data, rows, cols, bnds = [], [], [], []
    row0 = 0
    for j in range(graph.n_checks):
        nbrs = graph.check_neighbors[j]
        coeffs, bounds = _odd_subset_rows(len(nbrs))
        r, k = coeffs.shape
        data.append(coeffs.ravel())
        rows.append((row0 + np.repeat(np.arange(r), k)))
        cols.append(np.tile(np.asarray(nbrs, dtype=np.int64), r))
        bnds.append(bounds)
        row0 += r
    if row0 == 0:
        a = sp.csr_matrix((0, graph.n_vars))
        b = np.zeros(0)
    else:
        a = sp.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(row0, graph.n_vars))
        b = np.concatenate(bnds)
    return LinearProgram(c=np.zeros(graph.n_vars), a_ub=a, b_ub=b)


def _solve_once(lp: LinearProgram, c, method: str, tol: float):
    if method == "highs":
        res = linprog(c, A_ub=lp.a_ub, b_ub=lp.b_ub,
                      bounds=(lp.box[0], lp.box[1]), method="highs-ds")
        if res.status != 0:
            raise NumericalFailure(f"linprog failed: {res.message}")
        return np.asarray(res.x), float(res.fun)
    if method == "bland":
        lo, hi = lp.box
        if lo != 0.0:
            raise ValueError("reference simplex assumes a zero lower bound")
        a = np.vstack([lp.a_ub.toarray(), np.eye(lp.n_vars)])
        b = np.concatenate([lp.b_ub, np.full(lp.n_vars, hi)])
        return simplex.solve_bland(c, a, b, tol=tol)
    raise ValueError(f"unknown LP method {method!r}")


def solve_lp(lp: LinearProgram, tol: float = 1e-8, method: str = "highs",
             unique_check: bool = True, seed: int = 0) -> LpSolution:
    """Solve to a vertex optimum and classify it.

    is_integral: every coordinate within a fixed tolerance of {0,1}.
    is_unique: heuristic; the problem is re-solved twice under tiny random
    objective perturbations (relative scale 1e-10) and flagged unique only
    when the support of the optimum never changes.
    """
    x, value = _solve_once(lp, lp.c, method, tol)
    integral = bool(np.all(np.minimum(np.abs(x), np.abs(1.0 - x))
                           <= INTEGRALITY_TOL))
    unique = True
    if unique_check:
        rng = np.random.default_rng(seed)
        eps = 1e-10 * max(1.0, float(np.abs(lp.c).max()))
        support = x > INTEGRALITY_TOL
        for _ in range(2):
            c_pert = lp.c + eps * rng.uniform(-1.0, 1.0, lp.n_vars)
            x_p, _ = _solve_once(lp, c_pert, method, tol)
            if not np.array_equal(x_p > INTEGRALITY_TOL, support):
                unique = False
                break
    return LpSolution(x=x, value=value, is_integral=integral, is_unique=unique)


def lp_decode(graph: TannerGraph, llrs, tol: float = 1e-8,
              method: str = "highs", unique_check: bool = True,
              constraints: LinearProgram | None = None,
              seed: int = 0) -> LpSolution:
    """min <llr, x> over the fundamental polytope.  The value is never
    positive (the origin is feasible); a zero value means the all-zeros
    word is among the optima."""
    llrs = np.asarray(llrs, dtype=np.float64)
    lp = constraints if constraints is not None else polytope_constraints(graph)
    return solve_lp(replace(lp, c=llrs), tol=tol, method=method,
                    unique_check=unique_check, seed=seed)


def gf2_nullspace_basis(h: np.ndarray) -> np.ndarray:
    """Basis of the GF(2) null space of h as rows of a (k, N) uint8 array."""
    h = (np.asarray(h, dtype=np.uint8) % 2).copy()
    m, n = h.shape
    pivot_cols = []
    row = 0
    for col in range(n):
        sub = np.flatnonzero(h[row:, col]) + row
        if sub.size == 0:
            continue
        if sub[0] != row:
            h[[row, sub[0]]] = h[[sub[0], row]]
        others = np.flatnonzero(h[:, col])
        others = others[others != row]
        h[others] ^= h[row]
        pivot_cols.append(col)
        row += 1
        if row == m:
            break
    free_cols = [c for c in range(n) if c not in set(pivot_cols)]
    basis = np.zeros((len(free_cols), n), dtype=np.uint8)
    for bi, fc in enumerate(free_cols):
        basis[bi, fc] = 1
        for r, pc in enumerate(pivot_cols):
            basis[bi, pc] = h[r, fc]
    return basis


def ml_decode_bruteforce(graph: TannerGraph, llrs):
    """Exact minimizer of <llr, x> over all codewords, by enumerating the
    null space of H.  Guarded to 2^24 codewords; raises TooLarge beyond."""
    llrs = np.asarray(llrs, dtype=np.float64)
    basis = gf2_nullspace_basis(graph.adjacency_matrix())
    k = basis.shape[0]
    if k > ENUM_GUARD_BITS:
        raise TooLarge(f"nullspace dimension {k} exceeds enumeration guard")
    best_val = 0.0
    best_word = np.zeros(graph.n_vars, dtype=np.uint8)
    chunk = 1 << 16
    for start in range(0, 1 << k, chunk):
        idx = np.arange(start, min(start + chunk, 1 << k), dtype=np.uint64)
        sel = ((idx[:, None] >> np.arange(k, dtype=np.uint64)) & 1).astype(np.uint8)
        words = (sel @ basis) % 2
        vals = words @ llrs
        a = int(np.argmin(vals))
        if vals[a] < best_val:
            best_val = float(vals[a])
            best_word = words[a]
    return best_word, best_val


def dual_value(assignment) -> float:
    """Objective of the dual point: the sum of its per-check values."""
    return float(np.sum(assignment.theta))


def dump_inequalities(lp: LinearProgram) -> str:
    """Plain-text dump, one constraint per line: dense coefficients then the
    bound.  Intended for cross-checking with external tools."""
    dense = lp.a_ub.toarray()
    lines = []
    for row, bound in zip(dense, lp.b_ub):
        lines.append(" ".join(f"{v:g}" for v in row) + f" {bound:g}")
    return "\n".join(lines) + ("\n" if lines else "")
