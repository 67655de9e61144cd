"""Domain records stored in the experiment database.

One dataclass per table. Records validate their own invariants; the store
adds referential checks on top. Monetary fields are decimals and serialize
as strings, everything else as plain JSON scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from decimal import Decimal

from .economics import as_money
from .errors import ValidationError

MEDIUM_CLASSES = ("dielectric_liquid", "electrolyte", "gas", "vacuum")
SENSES = ("minimize", "maximize")
OWNER_KINDS = ("PO", "TO")


def _require(cond: bool, message: str, field_name: str) -> None:
    if not cond:
        raise ValidationError(message, field=field_name)


@dataclass
class ProcessedObject:
    id: str
    name: str
    material: str = ""
    shape_notes: str = ""

    def validate(self) -> None:
        _require(bool(self.id), "id must be non-empty", "id")
        _require(bool(self.name), "name must be non-empty", "name")


@dataclass
class TransferObject:
    id: str
    name: str = ""
    material: str = ""  # e.g. copper, graphite
    shape_notes: str = ""

    def validate(self) -> None:
        _require(bool(self.id), "id must be non-empty", "id")


@dataclass
class ObjectProperty:
    owner_kind: str
    owner_id: str
    property_name: str
    value: float
    unit: str = ""

    def validate(self) -> None:
        _require(self.owner_kind in OWNER_KINDS, f"owner_kind must be one of {OWNER_KINDS}", "owner_kind")
        _require(bool(self.owner_id), "owner_id must be non-empty", "owner_id")
        _require(bool(self.property_name), "property_name must be non-empty", "property_name")
        self.value = float(self.value)


@dataclass
class MachineRecord:
    id: str
    name: str = ""
    generator_type: str = ""
    max_current: float = 1.0  # amperes
    hourly_rate: Decimal = Decimal(0)

    def validate(self) -> None:
        _require(bool(self.id), "id must be non-empty", "id")
        self.max_current = float(self.max_current)
        _require(self.max_current > 0, "max_current must be > 0", "max_current")
        self.hourly_rate = as_money(self.hourly_rate, "hourly_rate")
        _require(self.hourly_rate >= 0, "hourly_rate must be >= 0", "hourly_rate")


@dataclass
class WorkingEnvironment:
    id: str
    name: str = ""
    medium_class: str = "dielectric_liquid"
    description: str = ""

    def validate(self) -> None:
        _require(bool(self.id), "id must be non-empty", "id")
        _require(
            self.medium_class in MEDIUM_CLASSES,
            f"medium_class must be one of {MEDIUM_CLASSES}",
            "medium_class",
        )


@dataclass
class InputFactorDef:
    code: str
    name: str = ""
    unit: str = ""
    min_level: float = 0.0
    max_level: float = 1.0

    def validate(self) -> None:
        _require(bool(self.code), "code must be non-empty", "code")
        self.min_level = float(self.min_level)
        self.max_level = float(self.max_level)
        _require(self.min_level < self.max_level, "min_level must be below max_level", "min_level")


@dataclass
class OutputParamDef:
    code: str
    name: str = ""
    unit: str = ""
    sense: str = "minimize"

    def validate(self) -> None:
        _require(bool(self.code), "code must be non-empty", "code")
        _require(self.sense in SENSES, f"sense must be one of {SENSES}", "sense")


@dataclass
class Observation:
    experiment_id: str
    run_index: int
    replicate_index: int
    factor_values: dict[str, float] = field(default_factory=dict)
    output_values: dict[str, float] = field(default_factory=dict)
    excluded: bool = False
    exclusion_reason: str = ""

    def validate(self) -> None:
        _require(bool(self.experiment_id), "experiment_id must be non-empty", "experiment_id")
        self.run_index = int(self.run_index)
        self.replicate_index = int(self.replicate_index)
        _require(self.run_index >= 1, "run_index must be >= 1", "run_index")
        _require(self.replicate_index >= 1, "replicate_index must be >= 1", "replicate_index")
        self.factor_values = {str(k): float(v) for k, v in self.factor_values.items()}
        self.output_values = {str(k): float(v) for k, v in self.output_values.items()}
        self.excluded = bool(self.excluded)

    @property
    def run_reference(self) -> tuple[str, int, int]:
        return (self.experiment_id, self.run_index, self.replicate_index)


@dataclass
class ClassicBenchmark:
    id: str
    material: str
    operation: str
    method_name: str = ""
    processing_time: float = 1.0  # minutes
    cost_per_piece: Decimal = Decimal(0)

    def validate(self) -> None:
        _require(bool(self.id), "id must be non-empty", "id")
        self.processing_time = float(self.processing_time)
        _require(self.processing_time > 0, "processing_time must be > 0", "processing_time")
        self.cost_per_piece = as_money(self.cost_per_piece, "cost_per_piece")


@dataclass(frozen=True)
class TableDef:
    file_name: str  # on-disk table name, as in the original system
    cls: type
    key: tuple[str, ...]
    decimal_fields: tuple[str, ...] = ()


TABLES: dict[str, TableDef] = {
    "po": TableDef("PO", ProcessedObject, ("id",)),
    "poproperties": TableDef("POPROPERTIES", ObjectProperty, ("owner_id", "property_name")),
    "to": TableDef("TO", TransferObject, ("id",)),
    "toproperties": TableDef("TOPROPERTIES", ObjectProperty, ("owner_id", "property_name")),
    "outcome": TableDef("OUTCOME", Observation, ("experiment_id", "run_index", "replicate_index")),
    "inputs": TableDef("INPUTS", InputFactorDef, ("code",)),
    "outputs": TableDef("OUTPUTS", OutputParamDef, ("code",)),
    "we": TableDef("WE", WorkingEnvironment, ("id",)),
    "machine": TableDef("MACHINE", MachineRecord, ("id",), ("hourly_rate",)),
    "classic": TableDef("CLASSIC", ClassicBenchmark, ("id",), ("cost_per_piece",)),
}


def record_to_dict(entity) -> dict:
    out = {}
    for f in fields(entity):
        v = getattr(entity, f.name)
        out[f.name] = str(v) if isinstance(v, Decimal) else v
    return out


def record_from_dict(kind: str, data: dict):
    table = TABLES[kind]
    known = {f.name for f in fields(table.cls)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(
            f"unknown field(s) for {kind}: {sorted(unknown)}", field=sorted(unknown)[0]
        )
    if kind in ("poproperties", "toproperties"):
        data = dict(data)
        expected = "PO" if kind == "poproperties" else "TO"
        data.setdefault("owner_kind", expected)
        if data["owner_kind"] != expected:
            raise ValidationError(
                f"{kind} rows must have owner_kind={expected}", field="owner_kind"
            )
    try:
        entity = table.cls(**data)
    except TypeError as err:
        raise ValidationError(f"bad {kind} record: {err}") from err
    entity.validate()
    return entity


def entity_key(kind: str, entity) -> tuple:
    return tuple(getattr(entity, f) for f in TABLES[kind].key)
