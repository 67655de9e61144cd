"""Linear least squares through an orthogonal (QR) decomposition.

Normal equations are deliberately avoided; rank deficiency is detected from
the R diagonal against a fixed relative pivot tolerance and reported with
the offending column index.
"""

from __future__ import annotations

import numpy as np

from .errors import InsufficientDataError, RankDeficientError

RANK_TOL = 1e-10


def solve_least_squares(design, response, *, column_names: list[str] | None = None) -> np.ndarray:
    """Minimize ||design @ beta - response|| via Householder QR.

    Raises RankDeficientError naming the first column whose pivot falls
    below RANK_TOL times the column norm.
    """
    a = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if a.ndim != 2:
        raise InsufficientDataError("design must be a 2-D matrix")
    n, p = a.shape
    if y.shape != (n,):
        raise InsufficientDataError(f"response length {y.shape} does not match {n} design rows")
    if n < p:
        raise InsufficientDataError(f"need at least {p} points to fit {p} coefficients, got {n}")

    q, r = np.linalg.qr(a, mode="reduced")
    col_norms = np.linalg.norm(a, axis=0)
    for j in range(p):
        if col_norms[j] == 0.0 or abs(r[j, j]) < RANK_TOL * col_norms[j]:
            name = column_names[j] if column_names else f"column {j}"
            raise RankDeficientError(
                f"design matrix is rank deficient at {name}", column=j
            )

    rhs = q.T @ y
    beta = np.empty(p)
    for i in range(p - 1, -1, -1):
        beta[i] = (rhs[i] - r[i, i + 1 :] @ beta[i + 1 :]) / r[i, i]
    return beta
