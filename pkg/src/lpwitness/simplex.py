"""Dense tableau primal simplex with Bland's rule.

Solves  min <c, x>  s.t.  A x <= b,  x >= 0  for b >= 0, so the slack basis
is an immediate starting vertex and no phase-1 is needed.  Bland's pivoting
(smallest eligible index for both the entering and the leaving variable)
guarantees termination; this is the slow-but-trustworthy reference path used
to cross-check the production solver on small instances.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalFailure


def solve_bland(c, a, b, tol: float = 1e-9, max_pivots: int | None = None):
    """Return (x, value).  Requires b >= 0 elementwise.

    Raises NumericalFailure on pivot-budget exhaustion or an unbounded
    direction (impossible for box-bounded feasible sets).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    m, n = a.shape
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if (b < -tol).any():
        raise ValueError("slack-basis start requires b >= 0")

    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = a
    t[:m, n:n + m] = np.eye(m)
    t[:m, -1] = np.maximum(b, 0.0)
    t[m, :n] = c
    basis = np.arange(n, n + m)

    if max_pivots is None:
        max_pivots = 200 * (m + n) + 1000
    for _ in range(max_pivots):
        reduced = t[m, :n + m]
        entering_candidates = np.flatnonzero(reduced < -tol)
        if entering_candidates.size == 0:
            x = np.zeros(n)
            for row, bv in enumerate(basis):
                if bv < n:
                    x[bv] = t[row, -1]
            return x, float(-t[m, -1])
        enter = int(entering_candidates[0])

        col = t[:m, enter]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            raise NumericalFailure("unbounded pivot column in a bounded LP")
        ratios = t[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol]
        leave_row = int(tied[np.argmin(basis[tied])])

        pivot = t[leave_row, enter]
        t[leave_row] /= pivot
        factors = t[:, enter].copy()
        factors[leave_row] = 0.0
        t -= np.outer(factors, t[leave_row])
        basis[leave_row] = enter
    raise NumericalFailure("pivot budget exhausted")
