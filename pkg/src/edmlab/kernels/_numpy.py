"""Pure numpy/python reference implementations of the numeric hot kernels.

Same call signatures and semantics as :mod:`edmlab.kernels._numba`; used as
the fallback backend and as the comparison baseline in the benchmarks.
"""

import math

import numpy as np

CF_MAX_ITER = 300
CF_EPS = 1e-15
FPMIN = 1e-300


def betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz).

    Returns NaN when the fraction fails to converge within CF_MAX_ITER.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h
    return math.nan


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    # Continued fraction converges fastest below the distribution mode.
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(ln_front) * betacf(a, b, x) / a
    return 1.0 - math.exp(ln_front) * betacf(b, a, 1.0 - x) / b


def poly2_eval(c0: float, lin: np.ndarray, quad: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Evaluate a (possibly degenerate) quadratic surface at many points.

    ``quad`` is symmetric: diagonal holds the square-term coefficients,
    off-diagonal entries hold half of each cross-term coefficient, so the
    value at row x is ``c0 + lin.x + x.quad.x``.
    """
    pts = np.asarray(pts, dtype=np.float64)
    return c0 + pts @ lin + np.einsum("ni,ij,nj->n", pts, quad, pts)
