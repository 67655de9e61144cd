"""Comparative determination against conventional machining and job costing.

Money is fixed-point decimal; the component breakdown always sums to the
total exactly, and rounding to 4 fractional digits (half-up) happens only
when a breakdown is presented or serialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation

from .errors import NotFoundError, ValidationError

CENT = Decimal("0.0001")
MINUTES_PER_HOUR = Decimal(60)

UNCONVENTIONAL_FASTER = "unconventional_faster"
CLASSIC_FASTER = "classic_faster"
EQUAL = "equal"


def as_money(value, field: str = "amount") -> Decimal:
    try:
        d = Decimal(str(value))
    except (InvalidOperation, ValueError) as err:
        raise ValidationError(f"{field} is not a valid decimal: {value!r}", field=field) from err
    if not d.is_finite():
        raise ValidationError(f"{field} must be finite", field=field)
    return d


@dataclass
class CostRates:
    machine_rate: Decimal = Decimal(0)  # currency per hour
    labor_rate: Decimal = Decimal(0)  # currency per hour
    electrode_wear_cost: Decimal = Decimal(0)  # currency per cm^3
    dielectric_cost: Decimal = Decimal(0)  # currency per hour
    energy_rate: Decimal = Decimal(0)  # currency per kWh
    power_draw: Decimal = Decimal(0)  # kW

    def __post_init__(self):
        for name in (
            "machine_rate",
            "labor_rate",
            "electrode_wear_cost",
            "dielectric_cost",
            "energy_rate",
            "power_draw",
        ):
            value = as_money(getattr(self, name), name)
            if value < 0:
                raise ValidationError(f"{name} must be >= 0", field=name)
            setattr(self, name, value)


@dataclass
class CostBreakdown:
    """Full-precision decimal components; total is their exact sum."""

    machine: Decimal
    labor: Decimal
    electrode: Decimal
    dielectric: Decimal
    energy: Decimal
    total: Decimal

    def quantized(self) -> dict[str, str]:
        """4-digit presentation; the shown total is the sum of the shown
        components so the printed table always adds up."""
        parts = {
            name: getattr(self, name).quantize(CENT, rounding=ROUND_HALF_UP)
            for name in ("machine", "labor", "electrode", "dielectric", "energy")
        }
        parts["total"] = sum(parts.values(), Decimal(0))
        return {k: str(v) for k, v in parts.items()}

    def to_dict(self) -> dict:
        return self.quantized()


@dataclass
class Comparison:
    unconventional_time: float  # minutes
    classic_time: float  # minutes
    ratio: float
    classic_method: str
    verdict: str
    provenance: str = "measured"  # measured | predicted

    def to_dict(self) -> dict:
        return {
            "unconventional_time": self.unconventional_time,
            "classic_time": self.classic_time,
            "ratio": self.ratio,
            "classic_method": self.classic_method,
            "verdict": self.verdict,
            "provenance": self.provenance,
        }


def processing_cost(minutes, rates: CostRates, electrode_wear_volume=0) -> CostBreakdown:
    """Five-component cost of one unconventional processing job."""
    t = as_money(minutes, "minutes")
    if t <= 0:
        raise ValidationError("processing time must be positive", field="minutes")
    wear = as_money(electrode_wear_volume, "electrode_wear_volume")
    if wear < 0:
        raise ValidationError("electrode wear volume must be >= 0", field="electrode_wear_volume")
    hours = t / MINUTES_PER_HOUR
    machine = rates.machine_rate * hours
    labor = rates.labor_rate * hours
    electrode = rates.electrode_wear_cost * wear
    dielectric = rates.dielectric_cost * hours
    energy = rates.energy_rate * rates.power_draw * hours
    total = machine + labor + electrode + dielectric + energy
    return CostBreakdown(machine, labor, electrode, dielectric, energy, total)


def comparative_determination(
    experiment_minutes: float,
    material: str,
    operation: str,
    benchmarks,
    provenance: str = "measured",
) -> Comparison:
    """Compare a processing time against the conventional benchmark for the
    same (material, operation); with several matches the smallest classic
    time wins (most conservative comparison)."""
    if not experiment_minutes > 0:
        raise ValidationError("experiment time must be positive", field="experiment_minutes")
    matches = [
        b for b in benchmarks if b.material == material and b.operation == operation
    ]
    if not matches:
        raise NotFoundError(
            f"no conventional benchmark for material={material!r}, operation={operation!r}"
        )
    best = min(matches, key=lambda b: float(b.processing_time))
    classic = float(best.processing_time)
    ratio = float(experiment_minutes) / classic
    if ratio < 1.0:
        verdict = UNCONVENTIONAL_FASTER
    elif ratio > 1.0:
        verdict = CLASSIC_FASTER
    else:
        verdict = EQUAL
    return Comparison(
        unconventional_time=float(experiment_minutes),
        classic_time=classic,
        ratio=ratio,
        classic_method=best.method_name,
        verdict=verdict,
        provenance=provenance,
    )
