"""Optimal processing conditions over the factor box.

Deterministic two-stage search: a full grid scan, then coordinate descent
with step halving from the best grid point. Single quadratic-surface
objectives are additionally checked against the analytic stationary point.
Multiple objectives are collapsed by weighted scalarization after min-max
normalization over the grid (the outputs' units are incommensurable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, NotFoundError, ValidationError
from .models import FittedModel, _coded_parts, in_domain, predict, predict_batch

MAX_FREE_FACTORS = 6
GRID_POINTS_SMALL = 11  # up to 4 free factors
GRID_POINTS_LARGE = 7
MIN_STEP_FRACTION = 1e-6
BOUND_EPS = 1e-9


@dataclass
class Objective:
    model: FittedModel
    sense: str = "minimize"
    weight: float = 1.0

    def validate(self) -> None:
        if self.sense not in ("minimize", "maximize"):
            raise ValidationError(f"sense must be minimize or maximize, got {self.sense!r}", field="sense")
        if self.weight < 0:
            raise ValidationError("objective weight must be >= 0", field="weight")


@dataclass
class OptimizationProblem:
    objectives: list[Objective]
    bounds: dict[str, tuple[float, float]] | None = None
    fixed_factors: dict[str, float] = field(default_factory=dict)


@dataclass
class OptimumReport:
    settings: dict[str, float]
    objective_values: list[dict]
    scalarized_value: float
    iterations: int
    trace: list[tuple[dict[str, float], float]]
    active_bounds: list[str]

    def to_dict(self) -> dict:
        return {
            "settings": dict(self.settings),
            "objective_values": [dict(v) for v in self.objective_values],
            "scalarized_value": self.scalarized_value,
            "iterations": self.iterations,
            "trace": [{"settings": dict(s), "value": v} for s, v in self.trace],
            "active_bounds": list(self.active_bounds),
        }


class _Scalarizer:
    """Weighted sum of grid-normalized objectives; lower is always better."""

    def __init__(self, problem: OptimizationProblem, codes: list[str], grid: np.ndarray):
        total_w = sum(o.weight for o in problem.objectives)
        self.objectives = problem.objectives
        self.codes = codes
        self.weights = [o.weight / total_w for o in problem.objectives]
        self.signs = [1.0 if o.sense == "minimize" else -1.0 for o in problem.objectives]
        self.norms = []
        self.grid_values = None
        cols = []
        for obj in problem.objectives:
            preds = predict_batch(obj.model, self._project(grid, obj.model))
            lo, hi = float(preds.min()), float(preds.max())
            span = hi - lo if hi > lo else 1.0
            self.norms.append((lo, span))
            cols.append(preds)
        acc = np.zeros(grid.shape[0])
        for w, s, (lo, span), preds in zip(self.weights, self.signs, self.norms, cols):
            acc += w * s * (preds - lo) / span
        self.grid_values = acc

    def _project(self, pts: np.ndarray, model: FittedModel) -> np.ndarray:
        idx = [self.codes.index(c) for c in model.factor_codes]
        return pts[:, idx]

    def value(self, x: np.ndarray) -> float:
        acc = 0.0
        for obj, w, s, (lo, span) in zip(self.objectives, self.weights, self.signs, self.norms):
            xi = np.array([x[self.codes.index(c)] for c in obj.model.factor_codes])
            acc += w * s * (predict(obj.model, xi) - lo) / span
        return acc


def scalarize(problem: OptimizationProblem, settings: dict[str, float]) -> float:
    """Scalarized objective value at given settings (lower is better).

    Normalization constants come from the same stage-1 grid the optimizer
    scans, so this matches the values reported by :func:`optimize`.
    """
    codes, fixed, bounds = _problem_frame(problem)
    grid, _ = _build_grid(codes, fixed, bounds)
    sc = _Scalarizer(problem, codes, grid)
    x = np.array([_setting(settings, fixed, c) for c in codes])
    return sc.value(x)


def _setting(settings: dict[str, float], fixed: dict[str, float], code: str) -> float:
    if code in fixed:
        return fixed[code]
    if code not in settings:
        raise ValidationError(f"missing setting for factor {code!r}", field=code)
    return float(settings[code])


def _problem_frame(problem: OptimizationProblem):
    """Validate the problem; return (all codes sorted, fixed map, free bounds)."""
    if not problem.objectives:
        raise ValidationError("at least one objective is required", field="objectives")
    for o in problem.objectives:
        o.validate()
    if sum(o.weight for o in problem.objectives) <= 0:
        raise ValidationError("objective weights must sum to a positive value", field="weight")

    codes = sorted({c for o in problem.objectives for c in o.model.factor_codes})
    fixed = {c: float(v) for c, v in (problem.fixed_factors or {}).items()}
    for c in fixed:
        if c not in codes:
            raise ValidationError(f"fixed factor {c!r} is not used by any objective", field=c)

    bounds: dict[str, tuple[float, float]] = {}
    for c in codes:
        if c in fixed:
            continue
        lo, hi = -math.inf, math.inf
        for o in problem.objectives:
            if c in o.model.factor_codes:
                mlo, mhi = o.model.domain[c]
                lo, hi = max(lo, mlo), min(hi, mhi)
        if problem.bounds and c in problem.bounds:
            blo, bhi = problem.bounds[c]
            lo, hi = max(lo, float(blo)), min(hi, float(bhi))
        if not lo < hi:
            raise ValidationError(
                f"bounds for factor {c!r} are degenerate or outside the model domain", field=c
            )
        bounds[c] = (lo, hi)

    free = [c for c in codes if c not in fixed]
    if len(free) > MAX_FREE_FACTORS:
        raise CapacityError(
            f"at most {MAX_FREE_FACTORS} free factors supported, got {len(free)}"
        )
    if not free:
        raise ValidationError("all factors are fixed; nothing to optimize")
    return codes, fixed, bounds


def _build_grid(codes: list[str], fixed: dict[str, float], bounds: dict[str, tuple[float, float]]):
    free = [c for c in codes if c not in fixed]
    n_pts = GRID_POINTS_SMALL if len(free) <= 4 else GRID_POINTS_LARGE
    axes = [np.linspace(bounds[c][0], bounds[c][1], n_pts) for c in free]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid_free = np.column_stack([m.ravel() for m in mesh])
    grid = np.empty((grid_free.shape[0], len(codes)))
    j = 0
    for i, c in enumerate(codes):
        if c in fixed:
            grid[:, i] = fixed[c]
        else:
            grid[:, i] = grid_free[:, j]
            j += 1
    return grid, n_pts


def optimize(problem: OptimizationProblem) -> OptimumReport:
    """Deterministic grid + coordinate-descent search over the factor box."""
    codes, fixed, bounds = _problem_frame(problem)
    free = [c for c in codes if c not in fixed]

    grid, n_pts = _build_grid(codes, fixed, bounds)
    sc = _Scalarizer(problem, codes, grid)
    evaluations = grid.shape[0]

    # Stage 1: np.argmin returns the first minimum; rows are enumerated in
    # lexicographic order, so ties already break toward the smallest settings.
    best_idx = int(np.argmin(sc.grid_values))
    x = grid[best_idx].copy()
    best = float(sc.grid_values[best_idx])
    trace: list[tuple[dict[str, float], float]] = [(_as_settings(codes, x), best)]

    # Stage 2: coordinate descent with step halving, one grid cell down to
    # 1e-6 of each factor range.
    free_idx = [codes.index(c) for c in free]
    ranges = {c: bounds[c][1] - bounds[c][0] for c in free}
    steps = {c: ranges[c] / (n_pts - 1) for c in free}
    while any(steps[c] > MIN_STEP_FRACTION * ranges[c] for c in free):
        improved = False
        for c, i in zip(free, free_idx):
            for direction in (1.0, -1.0):
                while True:
                    cand = x[i] + direction * steps[c]
                    cand = min(max(cand, bounds[c][0]), bounds[c][1])
                    if cand == x[i]:
                        break
                    x_try = x.copy()
                    x_try[i] = cand
                    evaluations += 1
                    val = sc.value(x_try)
                    if val < best:
                        x, best = x_try, val
                        trace.append((_as_settings(codes, x), best))
                        improved = True
                    else:
                        break
        if not improved:
            for c in free:
                steps[c] /= 2.0

    # Analytic check for a single quadratic-surface objective.
    station = _quadratic_stationary(problem, codes, fixed, bounds)
    if station is not None:
        evaluations += 1
        val = sc.value(station)
        if val < best:
            x, best = station, val
            trace.append((_as_settings(codes, x), best))

    settings = _as_settings(codes, x)
    active = [
        c
        for c in free
        if abs(settings[c] - bounds[c][0]) <= BOUND_EPS * max(1.0, ranges[c])
        or abs(settings[c] - bounds[c][1]) <= BOUND_EPS * max(1.0, ranges[c])
    ]
    values = []
    for obj in problem.objectives:
        xi = np.array([settings[c] for c in obj.model.factor_codes])
        values.append(
            {
                "output_code": obj.model.output_code,
                "sense": obj.sense,
                "weight": obj.weight,
                "value": predict(obj.model, xi),
                "extrapolated": not in_domain(obj.model, xi),
            }
        )
    return OptimumReport(
        settings=settings,
        objective_values=values,
        scalarized_value=best,
        iterations=evaluations,
        trace=trace,
        active_bounds=active,
    )


def _as_settings(codes: list[str], x: np.ndarray) -> dict[str, float]:
    return {c: float(v) for c, v in zip(codes, x)}


def _quadratic_stationary(
    problem: OptimizationProblem,
    codes: list[str],
    fixed: dict[str, float],
    bounds: dict[str, tuple[float, float]],
) -> np.ndarray | None:
    """Stationary point of a single rs_quadratic objective, clipped to bounds."""
    if len(problem.objectives) != 1:
        return None
    model = problem.objectives[0].model
    if model.family != "rs_quadratic":
        return None
    n = model.arity
    c0, lin, quad = _coded_parts(np.asarray(model.coefficients), n, True)
    free_local = [i for i, c in enumerate(model.factor_codes) if c not in fixed]
    fixed_local = [i for i in range(n) if i not in free_local]
    if not free_local:
        return None
    h_ff = quad[np.ix_(free_local, free_local)]
    g_f = lin[free_local].astype(float).copy()
    if fixed_local:
        xc = np.array([fixed[model.factor_codes[i]] for i in fixed_local])
        g_f += 2.0 * quad[np.ix_(free_local, fixed_local)] @ xc
    try:
        x_f = np.linalg.solve(2.0 * h_ff, -g_f)
    except np.linalg.LinAlgError:
        return None
    x = np.empty(len(codes))
    for i, c in enumerate(codes):
        if c in fixed:
            x[i] = fixed[c]
        else:
            j = model.factor_codes.index(c)
            x[i] = x_f[free_local.index(j)]
            x[i] = min(max(x[i], bounds[c][0]), bounds[c][1])
    return x


def what_if(models: list[FittedModel], settings: dict[str, float]) -> list[dict]:
    """Predictions for each model at the operator's chosen settings, with
    extrapolation flags; missing factors are reported by name."""
    if not models:
        raise NotFoundError("no fitted model given")
    out = []
    for m in models:
        missing = [c for c in m.factor_codes if c not in settings]
        if missing:
            raise ValidationError(f"missing setting for factor {missing[0]!r}", field=missing[0])
        xi = np.array([float(settings[c]) for c in m.factor_codes])
        out.append(
            {
                "output_code": m.output_code,
                "family": m.family,
                "value": predict(m, xi),
                "extrapolated": not in_domain(m, xi),
            }
        )
    return out
