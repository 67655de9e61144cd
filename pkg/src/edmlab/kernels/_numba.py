"""Numba-compiled hot kernels (default backend).

Mirrors :mod:`edmlab.kernels._numpy` exactly; compiled artifacts are cached
on disk so the JIT cost is paid once per environment.
"""

import math

import numpy as np
from numba import njit

CF_MAX_ITER = 300
CF_EPS = 1e-15
FPMIN = 1e-300


@njit(cache=True)
def betacf(a: float, b: float, x: float) -> float:
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


@njit(cache=True)
def betainc(a: float, b: float, x: float) -> float:
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
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(ln_front) * betacf(a, b, x) / a
    return 1.0 - math.exp(ln_front) * betacf(b, a, 1.0 - x) / b


@njit(cache=True)
def poly2_eval(c0: float, lin: np.ndarray, quad: np.ndarray, pts: np.ndarray) -> np.ndarray:
    n, k = pts.shape
    out = np.empty(n, dtype=np.float64)
    for r in range(n):
        acc = c0
        for i in range(k):
            xi = pts[r, i]
            acc += lin[i] * xi + quad[i, i] * xi * xi
            for j in range(i + 1, k):
                acc += 2.0 * quad[i, j] * xi * pts[r, j]
        out[r] = acc
    return out
