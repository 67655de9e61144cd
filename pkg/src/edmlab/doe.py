"""Full-factorial program-matrix planning over declared input factors.

Two-level designs in standard Yates order (first factor alternates fastest),
with optional center points and replication. Coded levels are -1/0/+1;
natural levels are recovered through the center/half-range mapping that the
response-surface fitting reuses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import CapacityError, ValidationError

MAX_FACTORS = 8


@dataclass
class FactorLevels:
    code: str
    low: float
    high: float


@dataclass
class DesignSpec:
    factors: list[FactorLevels]
    replicates: int = 1
    center_points: int = 0
    shuffle_seed: int | None = None

    def validate(self) -> None:
        if not 1 <= len(self.factors) <= MAX_FACTORS:
            raise CapacityError(
                f"factor count must be between 1 and {MAX_FACTORS}, got {len(self.factors)}",
                field="factors",
            )
        seen = set()
        for f in self.factors:
            if not f.code:
                raise ValidationError("factor code must be non-empty", field="code")
            if f.code in seen:
                raise ValidationError(f"duplicate factor code {f.code!r}", field="code")
            seen.add(f.code)
            if not f.low < f.high:
                raise ValidationError(
                    f"factor {f.code}: low level must be below high level", field="low_level"
                )
        if self.replicates < 1:
            raise ValidationError("replicates must be >= 1", field="replicates")
        if self.center_points < 0:
            raise ValidationError("center_points must be >= 0", field="center_points")


@dataclass
class MatrixRow:
    run_index: int
    replicate_index: int
    coded_levels: list[float]
    natural_levels: list[float]
    is_center: bool = False


@dataclass
class ProgramMatrix:
    factor_codes: list[str]
    rows: list[MatrixRow]
    replicates: int
    center_points: int
    levels: dict[str, tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "factor_codes": list(self.factor_codes),
            "replicates": self.replicates,
            "center_points": self.center_points,
            "levels": {c: [lo, hi] for c, (lo, hi) in self.levels.items()},
            "rows": [
                {
                    "run_index": r.run_index,
                    "replicate_index": r.replicate_index,
                    "coded_levels": list(r.coded_levels),
                    "natural_levels": list(r.natural_levels),
                    "is_center": r.is_center,
                }
                for r in self.rows
            ],
        }


def code_level(natural: float, low: float, high: float) -> float:
    """Map a natural value onto the coded scale: low -> -1, high -> +1."""
    _check_levels(low, high)
    center = (low + high) / 2.0
    half = (high - low) / 2.0
    return (natural - center) / half


def decode_level(coded: float, low: float, high: float) -> float:
    """Inverse of code_level."""
    _check_levels(low, high)
    center = (low + high) / 2.0
    half = (high - low) / 2.0
    return center + coded * half


def _check_levels(low: float, high: float) -> None:
    if not low < high:
        raise ValidationError("low level must be below high level", field="low_level")


def build_full_factorial(spec: DesignSpec) -> ProgramMatrix:
    """Build the program matrix of a 2^k factorial with center points.

    Row order: design points in Yates order with their replicates blocked
    together, then the center points. Identical specs produce identical
    matrices; ``shuffle_seed`` (off by default) permutes execution order
    only.
    """
    spec.validate()
    k = len(spec.factors)
    codes = [f.code for f in spec.factors]

    points: list[list[float]] = []
    for i in range(2**k):
        # Yates standard order: first factor alternates fastest.
        points.append([-1.0 if (i >> j) & 1 == 0 else 1.0 for j in range(k)])
    for _ in range(spec.center_points):
        points.append([0.0] * k)

    rows: list[MatrixRow] = []
    for run_index, coded in enumerate(points, start=1):
        natural = [
            decode_level(c, f.low, f.high) for c, f in zip(coded, spec.factors)
        ]
        is_center = all(c == 0.0 for c in coded)
        for rep in range(1, spec.replicates + 1):
            rows.append(MatrixRow(run_index, rep, list(coded), list(natural), is_center))

    if spec.shuffle_seed is not None:
        random.Random(spec.shuffle_seed).shuffle(rows)

    return ProgramMatrix(
        factor_codes=codes,
        rows=rows,
        replicates=spec.replicates,
        center_points=spec.center_points,
        levels={f.code: (f.low, f.high) for f in spec.factors},
    )
