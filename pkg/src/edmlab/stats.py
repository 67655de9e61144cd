"""Statistical validation of measured runs.

Covers the homogeneity/outlier suggestion loop (Cochran's C across replicate
groups, Grubbs' test within a group) and the one- and two-factor dispersion
analyses. All functions are pure; nothing here touches the store, and the
elimination decision always stays with the operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import f_cdf, f_quantile, t_quantile
from .errors import InsufficientDataError, UnsupportedDesignError, ValidationError

SUGGEST_ELIMINATE = "suggest_eliminate"
KEEP = "keep"


@dataclass
class OutlierSuggestion:
    """Grubbs verdict for one sample; ``index`` is 0-based into the sample."""

    index: int
    value: float
    statistic: float
    critical_value: float
    alpha: float
    verdict: str
    run_reference: tuple[str, int, int] | None = None

    def to_dict(self) -> dict:
        d = {
            "index": self.index,
            "value": self.value,
            "statistic": self.statistic,
            "critical_value": self.critical_value,
            "alpha": self.alpha,
            "verdict": self.verdict,
        }
        if self.run_reference is not None:
            d["run_reference"] = {
                "experiment_id": self.run_reference[0],
                "run_index": self.run_reference[1],
                "replicate_index": self.run_reference[2],
            }
        return d


@dataclass
class HomogeneityReport:
    group_count: int
    cochran_c: float
    cochran_critical: float | None
    homogeneous: bool
    per_group_variances: list[float]
    alpha: float

    def to_dict(self) -> dict:
        return {
            "group_count": self.group_count,
            "cochran_c": self.cochran_c,
            "cochran_critical": self.cochran_critical,
            "homogeneous": self.homogeneous,
            "per_group_variances": list(self.per_group_variances),
            "alpha": self.alpha,
        }


@dataclass
class AnovaRow:
    source: str
    sum_squares: float
    df: int
    mean_square: float | None = None
    f_statistic: float | None = None
    p_value: float | None = None


@dataclass
class AnovaTable:
    rows: list[AnovaRow]
    significant: dict[str, bool]
    alpha: float
    factor_codes: list[str] = field(default_factory=list)

    def row(self, source: str) -> AnovaRow:
        for r in self.rows:
            if r.source == source:
                return r
        raise KeyError(source)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "factor_codes": list(self.factor_codes),
            "rows": [
                {
                    "source": r.source,
                    "sum_squares": r.sum_squares,
                    "df": r.df,
                    "mean_square": r.mean_square,
                    "f_statistic": r.f_statistic,
                    "p_value": r.p_value,
                }
                for r in self.rows
            ],
            "significant": dict(self.significant),
        }


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValidationError("significance level must lie in (0, 1)", field="alpha")


def grubbs_critical(n: int, alpha: float) -> float:
    """Grubbs critical value from the t-quantile at alpha/(2n) with n-2 df."""
    t = t_quantile(1.0 - alpha / (2.0 * n), n - 2)
    return (n - 1) / math.sqrt(n) * math.sqrt(t * t / (n - 2 + t * t))


def grubbs_scan(sample, alpha: float = 0.05) -> OutlierSuggestion:
    """Single-outlier suggestion: flags the point farthest from the mean.

    The verdict is only a suggestion; exclusions happen in the store after
    the operator confirms.
    """
    _check_alpha(alpha)
    x = np.asarray(sample, dtype=float)
    n = x.size
    if n < 3:
        raise InsufficientDataError(f"Grubbs needs at least 3 values, got {n}")
    mean = x.mean()
    s = x.std(ddof=1)
    critical = grubbs_critical(n, alpha)
    if s == 0.0:
        return OutlierSuggestion(0, float(x[0]), 0.0, critical, alpha, KEEP)
    deviations = np.abs(x - mean)
    idx = int(np.argmax(deviations))  # argmax takes the smallest index on ties
    g = float(deviations[idx] / s)
    verdict = SUGGEST_ELIMINATE if g > critical else KEEP
    return OutlierSuggestion(idx, float(x[idx]), g, critical, alpha, verdict)


def cochran_critical(k: int, m: int, alpha: float) -> float:
    """Critical value for Cochran's C with k groups of m replicates."""
    nu = m - 1
    fq = f_quantile(1.0 - alpha / k, (k - 1) * nu, nu)
    return 1.0 / (1.0 + (k - 1) / fq)


def homogeneity_check(groups, alpha: float = 0.05) -> HomogeneityReport:
    """Cochran's C test for homogeneity of replicate-group variances.

    All-constant data is homogeneous by convention (C = 1/k) regardless of
    group balance; otherwise the groups must share one size m >= 2.
    """
    _check_alpha(alpha)
    if len(groups) < 2:
        raise ValidationError("homogeneity check needs at least 2 replicate groups")
    sizes = []
    variances = []
    for g in groups:
        arr = np.asarray(g, dtype=float)
        if arr.size < 2:
            raise UnsupportedDesignError("every replicate group needs at least 2 values")
        sizes.append(int(arr.size))
        variances.append(float(arr.var(ddof=1)))
    k = len(groups)

    if all(v == 0.0 for v in variances):
        critical = cochran_critical(k, sizes[0], alpha) if len(set(sizes)) == 1 else None
        return HomogeneityReport(k, 1.0 / k, critical, True, variances, alpha)

    if len(set(sizes)) != 1:
        raise UnsupportedDesignError(
            f"Cochran's test needs equal replicate-group sizes, got {sorted(set(sizes))}"
        )
    c = max(variances) / sum(variances)
    critical = cochran_critical(k, sizes[0], alpha)
    return HomogeneityReport(k, c, critical, c <= critical, variances, alpha)


def _f_and_p(ss: float, df: int, ms_error: float, df_error: int) -> tuple[float, float]:
    """F and p for one tested source against the error mean square."""
    ms = ss / df if df > 0 else 0.0
    if ms_error == 0.0:
        if ss == 0.0:
            return 0.0, 1.0
        return math.inf, 0.0
    f = ms / ms_error
    return f, 1.0 - f_cdf(f, df, df_error)


def anova_one_way(groups, alpha: float = 0.05) -> AnovaTable:
    """Mono-factorial dispersion analysis over groups of measured values."""
    _check_alpha(alpha)
    k = len(groups)
    if k < 2:
        raise ValidationError("one-way analysis needs at least 2 groups")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if any(a.size < 1 for a in arrays):
        raise InsufficientDataError("every group needs at least one value")
    n_total = sum(a.size for a in arrays)
    if n_total <= k:
        raise InsufficientDataError("total observations must exceed the group count")
    if all(a.size < 2 for a in arrays):
        raise InsufficientDataError("at least one group needs 2 or more values")

    grand = float(np.concatenate(arrays).mean())
    ss_between = float(sum(a.size * (a.mean() - grand) ** 2 for a in arrays))
    ss_within = float(sum(((a - a.mean()) ** 2).sum() for a in arrays))
    ss_total = float(sum(((a - grand) ** 2).sum() for a in arrays))
    df_between = k - 1
    df_within = n_total - k

    ms_within = ss_within / df_within
    f, p = _f_and_p(ss_between, df_between, ms_within, df_within)
    rows = [
        AnovaRow("factor_A", ss_between, df_between, ss_between / df_between, f, p),
        AnovaRow("error", ss_within, df_within, ms_within),
        AnovaRow("total", ss_total, n_total - 1),
    ]
    return AnovaTable(rows, {"factor_A": p < alpha}, alpha)


def anova_two_way(cells, alpha: float = 0.05) -> AnovaTable:
    """Bi-factorial dispersion analysis on a complete balanced a x b layout.

    ``cells[i][j]`` holds the m >= 2 replicates at level i of factor A and
    level j of factor B.
    """
    _check_alpha(alpha)
    a = len(cells)
    if a < 2:
        raise UnsupportedDesignError("two-way analysis needs at least 2 levels of factor A")
    b = len(cells[0])
    if b < 2:
        raise UnsupportedDesignError("two-way analysis needs at least 2 levels of factor B")
    if any(len(row) != b for row in cells):
        raise UnsupportedDesignError("incomplete layout: every A level needs the same B levels")
    sizes = {len(cell) for row in cells for cell in row}
    if len(sizes) != 1:
        raise UnsupportedDesignError(f"unbalanced layout: cell sizes {sorted(sizes)}")
    m = sizes.pop()
    if m < 2:
        raise UnsupportedDesignError("every cell needs at least 2 replicates")

    data = np.asarray([[list(map(float, cell)) for cell in row] for row in cells])
    grand = data.mean()
    mean_a = data.mean(axis=(1, 2))
    mean_b = data.mean(axis=(0, 2))
    mean_cell = data.mean(axis=2)

    ss_a = float(b * m * ((mean_a - grand) ** 2).sum())
    ss_b = float(a * m * ((mean_b - grand) ** 2).sum())
    interaction = mean_cell - mean_a[:, None] - mean_b[None, :] + grand
    ss_ab = float(m * (interaction**2).sum())
    ss_error = float(((data - mean_cell[:, :, None]) ** 2).sum())
    ss_total = float(((data - grand) ** 2).sum())

    df_a, df_b = a - 1, b - 1
    df_ab = df_a * df_b
    df_error = a * b * (m - 1)
    ms_error = ss_error / df_error

    f_a, p_a = _f_and_p(ss_a, df_a, ms_error, df_error)
    f_b, p_b = _f_and_p(ss_b, df_b, ms_error, df_error)
    f_ab, p_ab = _f_and_p(ss_ab, df_ab, ms_error, df_error)

    rows = [
        AnovaRow("factor_A", ss_a, df_a, ss_a / df_a, f_a, p_a),
        AnovaRow("factor_B", ss_b, df_b, ss_b / df_b, f_b, p_b),
        AnovaRow("interaction", ss_ab, df_ab, ss_ab / df_ab, f_ab, p_ab),
        AnovaRow("error", ss_error, df_error, ms_error),
        AnovaRow("total", ss_total, a * b * m - 1),
    ]
    significant = {
        "factor_A": p_a < alpha,
        "factor_B": p_b < alpha,
        "interaction": p_ab < alpha,
    }
    return AnovaTable(rows, significant, alpha)
