"""Empirical models of a technological parameter.

A mono-variable function zoo (polynomials up to degree 4 plus the classic
log-linearizable families) and multi-variable polynomial response surfaces,
fitted by QR least squares, scored on the original output scale, and ranked
to pick the best model of the class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    FamilyDomainError,
    InsufficientDataError,
    RankDeficientError,
    ValidationError,
)
from .lstsq import solve_least_squares

POLY_FAMILIES = ("poly1", "poly2", "poly3", "poly4")
MONO_FAMILIES = POLY_FAMILIES + ("power", "exponential", "logarithmic", "hyperbolic")
RS_FAMILIES = ("rs_linear", "rs_quadratic")
FAMILIES = MONO_FAMILIES + RS_FAMILIES

TIE_TOL = 1e-9


def coefficient_count(family: str, n_factors: int = 1) -> int:
    if family in POLY_FAMILIES:
        return int(family[-1]) + 1
    if family in MONO_FAMILIES:
        return 2
    if family == "rs_linear":
        return 1 + n_factors
    if family == "rs_quadratic":
        return 1 + n_factors + n_factors * (n_factors - 1) // 2 + n_factors
    raise ValidationError(f"unknown model family {family!r}", field="family")


@dataclass
class FittedModel:
    family: str
    coefficients: list[float]
    factor_codes: list[str]
    output_code: str
    domain: dict[str, tuple[float, float]]
    r2: float
    adj_r2: float | None
    rmse: float
    n_points: int
    # response-surface extras: the fit runs on centered/scaled factors
    center: list[float] = field(default_factory=list)
    half_range: list[float] = field(default_factory=list)
    coded_coefficients: list[float] = field(default_factory=list)
    shared_curvature: bool = False

    @property
    def arity(self) -> int:
        return len(self.factor_codes)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "coefficients": list(self.coefficients),
            "factor_codes": list(self.factor_codes),
            "output_code": self.output_code,
            "domain": {c: [lo, hi] for c, (lo, hi) in self.domain.items()},
            "metrics": {
                "r2": self.r2,
                "adj_r2": self.adj_r2,
                "rmse": self.rmse,
                "n_points": self.n_points,
            },
            "center": list(self.center),
            "half_range": list(self.half_range),
            "coded_coefficients": list(self.coded_coefficients),
            "shared_curvature": self.shared_curvature,
            "formula": formula(self),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FittedModel":
        metrics = d.get("metrics", {})
        return cls(
            family=d["family"],
            coefficients=list(d["coefficients"]),
            factor_codes=list(d["factor_codes"]),
            output_code=d["output_code"],
            domain={c: (lo, hi) for c, (lo, hi) in d["domain"].items()},
            r2=metrics.get("r2", d.get("r2")),
            adj_r2=metrics.get("adj_r2", d.get("adj_r2")),
            rmse=metrics.get("rmse", d.get("rmse")),
            n_points=metrics.get("n_points", d.get("n_points", 0)),
            center=list(d.get("center", [])),
            half_range=list(d.get("half_range", [])),
            coded_coefficients=list(d.get("coded_coefficients", [])),
            shared_curvature=bool(d.get("shared_curvature", False)),
        )


@dataclass
class ModelRanking:
    entries: list[tuple[FittedModel, float]]
    criterion: str
    skipped: dict[str, str] = field(default_factory=dict)

    def best(self) -> FittedModel:
        return self.entries[0][0]

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "entries": [
                {"model": m.to_dict(), "criterion_value": v} for m, v in self.entries
            ],
            "skipped": dict(self.skipped),
        }


# --- mono-variable fitting ---------------------------------------------------


def _check_mono_domain(family: str, x: np.ndarray, y: np.ndarray) -> None:
    if family in ("power", "logarithmic"):
        bad = [float(v) for v in x[x <= 0]]
        if bad:
            raise FamilyDomainError(
                f"{family} requires x > 0; offending x values: {bad}", field="x"
            )
    if family == "hyperbolic":
        bad = [float(v) for v in x[x == 0]]
        if bad:
            raise FamilyDomainError(
                f"{family} requires x != 0; offending x values: {bad}", field="x"
            )
    if family in ("power", "exponential"):
        bad = [float(v) for v in y[y <= 0]]
        if bad:
            raise FamilyDomainError(
                f"{family} requires y > 0 for log-linearization; offending y values: {bad}",
                field="y",
            )
    if not np.all(np.isfinite(y)):
        raise FamilyDomainError(f"{family} requires finite y values", field="y")


def fit_mono(
    family: str,
    points,
    *,
    factor_code: str = "x",
    output_code: str = "y",
) -> FittedModel:
    """Fit one single-factor family; transformed families are fitted by
    log/reciprocal linearization, with goodness always computed on the
    original y scale."""
    if family not in MONO_FAMILIES:
        raise ValidationError(f"{family!r} is not a mono-variable family", field="family")
    pts = [(float(x), float(y)) for x, y in points]
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    p = coefficient_count(family)
    if x.size < p + 1:
        raise InsufficientDataError(
            f"{family} needs at least {p + 1} points, got {x.size}"
        )
    _check_mono_domain(family, x, y)

    if family in POLY_FAMILIES:
        degree = int(family[-1])
        design = np.vander(x, degree + 1, increasing=True)
        coeffs = solve_least_squares(design, y)
    elif family == "power":
        beta = solve_least_squares(np.column_stack([np.ones_like(x), np.log(x)]), np.log(y))
        coeffs = np.array([math.exp(beta[0]), beta[1]])
    elif family == "exponential":
        beta = solve_least_squares(np.column_stack([np.ones_like(x), x]), np.log(y))
        coeffs = np.array([math.exp(beta[0]), beta[1]])
    elif family == "logarithmic":
        coeffs = solve_least_squares(np.column_stack([np.ones_like(x), np.log(x)]), y)
    else:  # hyperbolic
        coeffs = solve_least_squares(np.column_stack([np.ones_like(x), 1.0 / x]), y)

    model = FittedModel(
        family=family,
        coefficients=[float(c) for c in coeffs],
        factor_codes=[factor_code],
        output_code=output_code,
        domain={factor_code: (float(x.min()), float(x.max()))},
        r2=0.0,
        adj_r2=None,
        rmse=0.0,
        n_points=int(x.size),
    )
    _attach_goodness(model, pts)
    return model


# --- response-surface fitting ------------------------------------------------


def _rs_basis_names(codes: list[str], quadratic: bool) -> list[str]:
    names = ["1"] + list(codes)
    if quadratic:
        n = len(codes)
        names += [f"{codes[i]}*{codes[j]}" for i in range(n) for j in range(i + 1, n)]
        names += [f"{c}^2" for c in codes]
    return names


def _rs_design(coded: np.ndarray, quadratic: bool, shared_curvature: bool = False) -> np.ndarray:
    n_pts, n = coded.shape
    cols = [np.ones(n_pts)] + [coded[:, i] for i in range(n)]
    if quadratic:
        for i in range(n):
            for j in range(i + 1, n):
                cols.append(coded[:, i] * coded[:, j])
        if shared_curvature:
            cols.append((coded**2).sum(axis=1))
        else:
            for i in range(n):
                cols.append(coded[:, i] ** 2)
    return np.column_stack(cols)


def fit_response_surface(
    points,
    degree: str = "rs_quadratic",
    *,
    domain: dict[str, tuple[float, float]] | None = None,
    factor_codes: list[str] | None = None,
    output_code: str = "y",
) -> FittedModel:
    """Fit a linear or quadratic response surface over several factors.

    Factors are centered at the domain midpoint and scaled by the half-range
    before fitting; reported coefficients are mapped back to natural units
    (order: constant, linear terms, cross terms i<j, square terms).

    Two-level factorials with center points cannot separate the individual
    square terms (their coded columns coincide); for that geometry the fit
    falls back to a single shared curvature coefficient, flagged on the
    model. Designs with no curvature information at all raise a
    rank-deficiency error advising center points.
    """
    if degree not in RS_FAMILIES:
        raise ValidationError(f"{degree!r} is not a response-surface family", field="family")
    pts = [(list(map(float, xv)), float(yv)) for xv, yv in points]
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if x.ndim != 2 or x.shape[1] < 2:
        raise ValidationError("response surfaces need at least 2 factors", field="factors")
    n = x.shape[1]
    codes = list(factor_codes) if factor_codes else [f"x{i + 1}" for i in range(n)]
    if len(codes) != n:
        raise ValidationError("factor_codes length does not match point dimension", field="factor_codes")

    if domain is None:
        box = {c: (float(x[:, i].min()), float(x[:, i].max())) for i, c in enumerate(codes)}
    else:
        box = {c: (float(domain[c][0]), float(domain[c][1])) for c in codes}
    center = np.array([(lo + hi) / 2.0 for lo, hi in (box[c] for c in codes)])
    half = np.array([(hi - lo) / 2.0 for lo, hi in (box[c] for c in codes)])
    half[half == 0.0] = 1.0  # degenerate factor; surfaces as rank deficiency below
    coded = (x - center) / half

    quadratic = degree == "rs_quadratic"
    p_full = coefficient_count(degree, n)
    if x.shape[0] < p_full:
        raise InsufficientDataError(
            f"{degree} over {n} factors needs at least {p_full} points, got {x.shape[0]}"
        )

    names = _rs_basis_names(codes, quadratic)
    shared = False
    try:
        coeffs = solve_least_squares(_rs_design(coded, quadratic), y, column_names=names)
    except RankDeficientError as err:
        if not quadratic:
            raise
        reduced_names = names[: p_full - n] + ["curvature"]
        try:
            reduced = solve_least_squares(
                _rs_design(coded, True, shared_curvature=True), y, column_names=reduced_names
            )
        except RankDeficientError:
            raise RankDeficientError(
                f"{err}; the design cannot identify quadratic terms - add center points",
                column=err.column,
            ) from err
        shared = True
        coeffs = np.concatenate([reduced[:-1], np.full(n, reduced[-1])])

    c0, lin, quad = _coded_parts(coeffs, n, quadratic)
    nat_const, nat_lin, nat_quad = _to_natural(c0, lin, quad, center, half)
    natural = _flatten_quadratic(nat_const, nat_lin, nat_quad, quadratic)

    model = FittedModel(
        family=degree,
        coefficients=[float(c) for c in natural],
        factor_codes=codes,
        output_code=output_code,
        domain=box,
        r2=0.0,
        adj_r2=None,
        rmse=0.0,
        n_points=int(x.shape[0]),
        center=[float(c) for c in center],
        half_range=[float(h) for h in half],
        coded_coefficients=[float(c) for c in coeffs],
        shared_curvature=shared,
    )
    _attach_goodness(model, pts)
    return model


def _coded_parts(coeffs: np.ndarray, n: int, quadratic: bool):
    """Split a flat coefficient vector into (constant, linear, quad matrix)."""
    c0 = float(coeffs[0])
    lin = np.asarray(coeffs[1 : 1 + n], dtype=float)
    quad = np.zeros((n, n))
    if quadratic:
        k = 1 + n
        for i in range(n):
            for j in range(i + 1, n):
                quad[i, j] = quad[j, i] = coeffs[k] / 2.0
                k += 1
        for i in range(n):
            quad[i, i] = coeffs[k]
            k += 1
    return c0, lin, quad


def _to_natural(c0: float, lin: np.ndarray, quad: np.ndarray, center: np.ndarray, half: np.ndarray):
    """Expand a model in coded units c = (x - center)/half into natural units."""
    d = np.diag(1.0 / half)
    quad_nat = d @ quad @ d
    u = lin / half
    const = c0 - u @ center + center @ quad_nat @ center
    lin_nat = u - 2.0 * quad_nat @ center
    return float(const), lin_nat, quad_nat


def _flatten_quadratic(c0: float, lin: np.ndarray, quad: np.ndarray, quadratic: bool) -> list[float]:
    n = lin.size
    out = [c0] + [float(v) for v in lin]
    if quadratic:
        for i in range(n):
            for j in range(i + 1, n):
                out.append(float(2.0 * quad[i, j]))
        out += [float(quad[i, i]) for i in range(n)]
    return out


# --- prediction and goodness -------------------------------------------------


def predict(model: FittedModel, x) -> float:
    """Evaluate the fitted formula at one point (scalar or vector)."""
    if model.family in MONO_FAMILIES:
        if np.ndim(x) > 0:
            if len(x) != 1:
                raise ValidationError(
                    f"model {model.family} takes 1 factor, got {len(x)}", field="x"
                )
            x = x[0]
        return _predict_mono(model, float(x))
    xv = np.asarray(x, dtype=float)
    if xv.shape != (model.arity,):
        raise ValidationError(
            f"model {model.family} takes {model.arity} factors, got shape {xv.shape}", field="x"
        )
    return float(predict_batch(model, xv[None, :])[0])


def predict_batch(model: FittedModel, x: np.ndarray) -> np.ndarray:
    """Vectorized prediction over an (N, arity) matrix of natural settings."""
    x = np.asarray(x, dtype=float)
    if model.family in MONO_FAMILIES:
        return np.array([_predict_mono(model, float(v)) for v in x[:, 0]])
    n = model.arity
    coded = (x - np.asarray(model.center)) / np.asarray(model.half_range)
    c0, lin, quad = _coded_parts(
        np.asarray(model.coded_coefficients), n, model.family == "rs_quadratic"
    )
    return kernels.poly2_eval(c0, lin, quad, np.ascontiguousarray(coded))


def _predict_mono(model: FittedModel, x: float) -> float:
    c = model.coefficients
    fam = model.family
    if fam in POLY_FAMILIES:
        acc = 0.0
        for coef in reversed(c):
            acc = acc * x + coef
        return float(acc)
    a, b = c
    if fam == "power":
        return float(a * x**b)
    if fam == "exponential":
        return float(a * math.exp(b * x))
    if fam == "logarithmic":
        return float(a + b * math.log(x))
    return float(a + b / x)  # hyperbolic


def in_domain(model: FittedModel, x) -> bool:
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    for i, code in enumerate(model.factor_codes):
        lo, hi = model.domain[code]
        if not lo <= xv[i] <= hi:
            return False
    return True


def goodness(model: FittedModel, points) -> dict:
    """r2 / adjusted r2 / rmse of a model over a point set, on the original
    y scale. A zero-residual fit of a constant response scores r2 = 1."""
    pts = list(points)
    if len(pts) < 2:
        raise InsufficientDataError("goodness needs at least 2 points")
    y = np.array([float(p[1]) for p in pts])
    xs = [p[0] for p in pts]
    yhat = np.array([predict(model, x) for x in xs])
    ss_res = float(((y - yhat) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res <= 1e-12 * max(1.0, float((y**2).sum())) else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    n = len(pts)
    p = len(model.coefficients)
    adj = None
    if n > p:
        adj = 1.0 - (1.0 - r2) * (n - 1) / (n - p)
    return {"r2": r2, "adj_r2": adj, "rmse": math.sqrt(ss_res / n)}


def _attach_goodness(model: FittedModel, pts) -> None:
    g = goodness(model, pts)
    model.r2 = g["r2"]
    model.adj_r2 = g["adj_r2"]
    model.rmse = g["rmse"]


# --- selection ---------------------------------------------------------------


def simulate_and_select(
    points,
    candidate_families=None,
    criterion: str = "adj_r2",
    *,
    factor_codes: list[str] | None = None,
    output_code: str = "y",
) -> ModelRanking:
    """Fit every applicable candidate family and rank them best-first.

    Families whose domain constraints fail (or that cannot be fitted) are
    skipped with a reason. Criterion ties within 1e-9 break toward fewer
    coefficients, then family declaration order.
    """
    if criterion not in ("adj_r2", "rmse"):
        raise ValidationError(f"unknown criterion {criterion!r}", field="criterion")
    pts = list(points)
    mono = np.ndim(pts[0][0]) == 0
    if candidate_families is None:
        candidate_families = MONO_FAMILIES if mono else RS_FAMILIES
    ordered = [f for f in FAMILIES if f in set(candidate_families)]
    if not ordered:
        raise ValidationError("no candidate family given", field="candidate_families")

    fitted: list[tuple[FittedModel, float]] = []
    skipped: dict[str, str] = {}
    for fam in ordered:
        try:
            if fam in MONO_FAMILIES:
                if not mono:
                    skipped[fam] = "mono-variable family on multi-factor data"
                    continue
                code = factor_codes[0] if factor_codes else "x"
                m = fit_mono(fam, pts, factor_code=code, output_code=output_code)
            else:
                if mono:
                    skipped[fam] = "response-surface family on single-factor data"
                    continue
                m = fit_response_surface(
                    pts, fam, factor_codes=factor_codes, output_code=output_code
                )
        except (FamilyDomainError, InsufficientDataError, RankDeficientError) as err:
            skipped[fam] = str(err)
            continue
        value = m.adj_r2 if criterion == "adj_r2" else m.rmse
        if value is None:
            value = m.r2
        fitted.append((m, float(value)))

    if not fitted:
        raise ValidationError(
            "no applicable model family for this data; "
            + "; ".join(f"{f}: {r}" for f, r in skipped.items())
        )

    sign = -1.0 if criterion == "adj_r2" else 1.0

    def sort_key_pairwise(a, b):
        va, vb = a[1] * sign, b[1] * sign
        if abs(va - vb) <= TIE_TOL * max(1.0, abs(va), abs(vb)):
            ka = (len(a[0].coefficients), FAMILIES.index(a[0].family))
            kb = (len(b[0].coefficients), FAMILIES.index(b[0].family))
            return -1 if ka < kb else (1 if ka > kb else 0)
        return -1 if va < vb else 1

    import functools

    fitted.sort(key=functools.cmp_to_key(sort_key_pairwise))
    return ModelRanking(fitted, criterion, skipped)


# --- rendering ---------------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def formula(model: FittedModel) -> str:
    """Human-readable formula string, e.g. ``y = 2.000*x^1.500``."""
    y = model.output_code
    c = model.coefficients
    fam = model.family
    if fam in POLY_FAMILIES:
        x = model.factor_codes[0]
        terms = [_fmt(c[0])]
        for i, coef in enumerate(c[1:], start=1):
            terms.append(f"{_fmt(abs(coef))}*{x}" + (f"^{i}" if i > 1 else ""))
            terms[-1] = ("- " if coef < 0 else "+ ") + terms[-1]
        return f"{y} = " + " ".join(terms)
    if fam == "power":
        return f"{y} = {_fmt(c[0])}*{model.factor_codes[0]}^{_fmt(c[1])}"
    if fam == "exponential":
        return f"{y} = {_fmt(c[0])}*exp({_fmt(c[1])}*{model.factor_codes[0]})"
    if fam == "logarithmic":
        return f"{y} = {_fmt(c[0])} {'-' if c[1] < 0 else '+'} {_fmt(abs(c[1]))}*ln({model.factor_codes[0]})"
    if fam == "hyperbolic":
        return f"{y} = {_fmt(c[0])} {'-' if c[1] < 0 else '+'} {_fmt(abs(c[1]))}/{model.factor_codes[0]}"
    names = _rs_basis_names(model.factor_codes, fam == "rs_quadratic")
    parts = [_fmt(c[0])]
    for coef, name in zip(c[1:], names[1:]):
        parts.append(("- " if coef < 0 else "+ ") + f"{_fmt(abs(coef))}*{name}")
    return f"{y} = " + " ".join(parts)
