"""F-distribution machinery used by all dispersion-analysis verdicts.

The CDF routes through the regularized incomplete beta; the quantile is a
bracketed Newton/bisection hybrid on the CDF. Student-t quantiles are
derived from the F quantile via the identity t^2(nu) = F(1, nu).
"""

from __future__ import annotations

import math

from . import kernels
from .errors import NumericalError, ValidationError


def reg_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b); absolute error <= 1e-10."""
    if not (a > 0 and b > 0):
        raise ValidationError("shape parameters must be positive", field="a" if a <= 0 else "b")
    if not 0.0 <= x <= 1.0:
        raise ValidationError("x must lie in [0, 1]", field="x")
    v = kernels.betainc(float(a), float(b), float(x))
    if math.isnan(v):
        raise NumericalError(f"incomplete beta failed to converge for a={a}, b={b}, x={x}")
    return min(max(v, 0.0), 1.0)


def f_cdf(f: float, d1: float, d2: float) -> float:
    """P(F_{d1,d2} <= f) for f >= 0."""
    _check_df(d1, d2)
    if f < 0:
        raise ValidationError("F statistic must be nonnegative", field="f")
    if f == 0:
        return 0.0
    if math.isinf(f):
        return 1.0
    x = d1 * f / (d1 * f + d2)
    return reg_incomplete_beta(d1 / 2.0, d2 / 2.0, x)


def f_pdf(f: float, d1: float, d2: float) -> float:
    """Density of F_{d1,d2} at f > 0 (Newton step helper)."""
    _check_df(d1, d2)
    if f <= 0:
        return 0.0
    log_num = (d1 / 2.0) * math.log(d1) + (d2 / 2.0) * math.log(d2) + (d1 / 2.0 - 1.0) * math.log(f)
    log_den = ((d1 + d2) / 2.0) * math.log(d2 + d1 * f)
    log_beta = math.lgamma(d1 / 2.0) + math.lgamma(d2 / 2.0) - math.lgamma((d1 + d2) / 2.0)
    return math.exp(log_num - log_den - log_beta)


def f_quantile(p: float, d1: float, d2: float) -> float:
    """Inverse of f_cdf: the f with f_cdf(f, d1, d2) = p, |error| <= 1e-8.

    Bracketed Newton with bisection fallback; monotone and deterministic.
    """
    _check_df(d1, d2)
    if not 0.0 < p < 1.0:
        raise ValidationError("quantile level must lie in (0, 1)", field="p")

    lo = 0.0
    hi = 1.0
    doublings = 0
    while f_cdf(hi, d1, d2) < p:
        hi *= 2.0
        doublings += 1
        if doublings > 1100:
            raise NumericalError(f"quantile bracket failed for p={p}, d1={d1}, d2={d2}")

    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = f_cdf(x, d1, d2) - p
        if fx > 0:
            hi = x
        else:
            lo = x
        if abs(fx) < 1e-12:
            return x
        slope = f_pdf(x, d1, d2)
        if slope > 0.0:
            step = x - fx / slope
            x = step if lo < step < hi else 0.5 * (lo + hi)
        else:
            x = 0.5 * (lo + hi)
        if hi - lo <= 1e-14 * max(1.0, hi):
            return 0.5 * (lo + hi)
    raise NumericalError(f"F quantile did not converge for p={p}, d1={d1}, d2={d2}")


def t_quantile(p: float, nu: float) -> float:
    """Student-t quantile via the F(1, nu) distribution of t^2."""
    if not 0.0 < p < 1.0:
        raise ValidationError("quantile level must lie in (0, 1)", field="p")
    if p == 0.5:
        return 0.0
    root = math.sqrt(f_quantile(abs(2.0 * p - 1.0), 1.0, nu))
    return root if p > 0.5 else -root


def _check_df(d1: float, d2: float) -> None:
    if not (d1 > 0 and d2 > 0):
        raise ValidationError("degrees of freedom must be positive", field="d1" if d1 <= 0 else "d2")
