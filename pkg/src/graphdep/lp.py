"""Dense dual simplex for small covering-type linear programs.

Solves ``min c.x  s.t.  A x >= b, x >= 0`` when ``c >= 0``.  With a
non-negative cost vector the all-slack basis is dual feasible from the start,
so no phase one is needed.  Pivoting follows Bland's rule, which rules out
cycling on the highly degenerate set-cover LPs this module is used for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = 1e-12


class LPError(RuntimeError):
    pass


@dataclass
class LPResult:
    value: float
    x: np.ndarray  # primal solution
    y: np.ndarray  # dual prices, one per constraint
    iterations: int


def cover_lp_min(c, A, b, max_iter: int = 100_000) -> LPResult:
    """Minimise ``c @ x`` subject to ``A @ x >= b`` and ``x >= 0``.

    Parameters
    ----------
    c : (k,) array, all entries >= 0
    A : (m, k) array
    b : (m,) array

    Raises
    ------
    LPError
        If ``c`` has a negative entry, the problem is infeasible, or the
        iteration cap is hit.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, k = A.shape
    if np.any(c < -_EPS):
        raise LPError("dual simplex start needs a non-negative cost vector")

    # Rows encode -A x + s = -b with the slacks s basic.
    tab = np.zeros((m + 1, k + m + 1))
    tab[:m, :k] = -A
    tab[:m, k : k + m] = np.eye(m)
    tab[:m, -1] = -b
    tab[m, :k] = c
    basis = list(range(k, k + m))

    for it in range(max_iter):
        rhs = tab[:m, -1]
        negative = [r for r in range(m) if rhs[r] < -_EPS]
        if not negative:
            break
        row = min(negative, key=lambda r: basis[r])
        coeffs = tab[row, :-1]
        cand = np.flatnonzero(coeffs < -_EPS)
        if cand.size == 0:
            raise LPError("infeasible: a constraint cannot be satisfied")
        ratios = tab[m, cand] / -coeffs[cand]
        best = ratios.min()
        col = int(cand[np.flatnonzero(ratios <= best + _EPS)[0]])
        tab[row] /= tab[row, col]
        for r in range(m + 1):
            if r != row and tab[r, col] != 0.0:
                tab[r] -= tab[r, col] * tab[row]
        basis[row] = col
    else:
        raise LPError(f"no convergence within {max_iter} pivots")

    x = np.zeros(k + m)
    for r, var in enumerate(basis):
        x[var] = tab[r, -1]
    y = tab[m, k : k + m].copy()
    return LPResult(float(c @ x[:k]), x[:k], y, it)
