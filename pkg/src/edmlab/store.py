"""File-backed experiment store.

One line-oriented JSON file per table in a store directory, plus a ``meta``
file carrying the schema version. Mutations rewrite the affected table
atomically and are serialized through one writer lock; records read out are
plain immutable values. Fitted models and optimization reports are kept in
two auxiliary files next to the ten entity tables so reports can list them.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from .entities import TABLES, Observation, entity_key, record_from_dict, record_to_dict
from .errors import NotFoundError, StorageError, ValidationError

SCHEMA_VERSION = 1
META_FILE = "meta"
MODELS_FILE = "MODELS"
OPTIMIZATIONS_FILE = "OPTIMIZATIONS"


def _dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class ExperimentStore:
    """Persistent store for the ten experiment tables."""

    def __init__(self, path, create: bool = True):
        self.path = Path(path)
        self._lock = threading.RLock()
        self._tables: dict[str, dict[tuple, object]] = {k: {} for k in TABLES}
        self._models: dict[str, dict] = {}
        self._optimizations: dict[str, dict] = {}
        if self.path.exists():
            self._load()
        elif create:
            self.initialize()
        else:
            raise StorageError(f"store directory {self.path} does not exist")

    # -- lifecycle ----------------------------------------------------------

    def initialize(self) -> dict:
        """Erase all information and rewrite the schema header. Idempotent."""
        with self._lock:
            try:
                self.path.mkdir(parents=True, exist_ok=True)
                (self.path / META_FILE).write_text(
                    f"schema_version={SCHEMA_VERSION}\n", encoding="utf-8"
                )
            except OSError as err:
                raise StorageError(f"store path not writable: {err}") from err
            self._tables = {k: {} for k in TABLES}
            self._models = {}
            self._optimizations = {}
            for kind in TABLES:
                self._write_table(kind)
            self._write_aux(MODELS_FILE, self._models)
            self._write_aux(OPTIMIZATIONS_FILE, self._optimizations)
        return {"initialized": True, "tables": {k: 0 for k in TABLES}}

    def _load(self) -> None:
        meta_path = self.path / META_FILE
        if not meta_path.exists():
            raise StorageError(f"{self.path} is not an experiment store (missing meta)")
        meta = meta_path.read_text(encoding="utf-8").strip()
        if meta != f"schema_version={SCHEMA_VERSION}":
            raise StorageError(f"unsupported store schema: {meta!r}")
        for kind, table in TABLES.items():
            path = self.path / f"{table.file_name}.jsonl"
            rows: dict[tuple, object] = {}
            if path.exists():
                for line in path.read_text(encoding="utf-8").splitlines():
                    if not line.strip():
                        continue
                    entity = record_from_dict(kind, json.loads(line))
                    rows[entity_key(kind, entity)] = entity
            self._tables[kind] = rows
        self._models = self._read_aux(MODELS_FILE)
        self._optimizations = self._read_aux(OPTIMIZATIONS_FILE)

    def _read_aux(self, name: str) -> dict[str, dict]:
        path = self.path / f"{name}.jsonl"
        out: dict[str, dict] = {}
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    rec = json.loads(line)
                    out[rec["id"]] = rec
        return out

    def _atomic_write(self, path: Path, text: str) -> None:
        tmp = path.with_suffix(".tmp")
        try:
            tmp.write_text(text, encoding="utf-8")
            os.replace(tmp, path)
        except OSError as err:
            raise StorageError(f"cannot write {path}: {err}") from err

    def _write_table(self, kind: str) -> None:
        table = TABLES[kind]
        rows = self._tables[kind]
        lines = [_dumps(record_to_dict(rows[k])) for k in sorted(rows)]
        self._atomic_write(self.path / f"{table.file_name}.jsonl", "".join(l + "\n" for l in lines))

    def _write_aux(self, name: str, rows: dict[str, dict]) -> None:
        lines = [_dumps(rows[k]) for k in sorted(rows)]
        self._atomic_write(self.path / f"{name}.jsonl", "".join(l + "\n" for l in lines))

    # -- CRUD ----------------------------------------------------------------

    @staticmethod
    def _check_kind(kind: str) -> str:
        k = kind.lower()
        if k not in TABLES:
            raise ValidationError(f"unknown table {kind!r}", field="kind")
        return k

    def upsert(self, kind: str, record) -> object:
        kind = self._check_kind(kind)
        with self._lock:
            entity = record_from_dict(kind, dict(record)) if isinstance(record, dict) else record
            entity.validate()
            self._check_references(kind, entity)
            self._tables[kind][entity_key(kind, entity)] = entity
            self._write_table(kind)
            return entity

    def _check_references(self, kind: str, entity) -> None:
        if kind == "poproperties" and (entity.owner_id,) not in self._tables["po"]:
            raise_ref = f"no PO with id {entity.owner_id!r}"
        elif kind == "toproperties" and (entity.owner_id,) not in self._tables["to"]:
            raise_ref = f"no TO with id {entity.owner_id!r}"
        elif kind == "outcome":
            declared_inputs = {k[0] for k in self._tables["inputs"]}
            declared_outputs = {k[0] for k in self._tables["outputs"]}
            bad_f = sorted(set(entity.factor_values) - declared_inputs)
            bad_o = sorted(set(entity.output_values) - declared_outputs)
            if bad_f:
                raise_ref = f"undeclared input factor code(s) {bad_f}"
            elif bad_o:
                raise_ref = f"undeclared output parameter code(s) {bad_o}"
            else:
                return
        else:
            return
        from .errors import ReferentialIntegrityError

        raise ReferentialIntegrityError(raise_ref)

    def get(self, kind: str, key) -> object:
        kind = self._check_kind(kind)
        k = self._normalize_key(kind, key)
        with self._lock:
            try:
                return self._tables[kind][k]
            except KeyError:
                raise NotFoundError(f"{kind} record {k} not found") from None

    def _normalize_key(self, kind: str, key) -> tuple:
        fields = TABLES[kind].key
        if not isinstance(key, (tuple, list)):
            key = (key,)
        if len(key) != len(fields):
            raise ValidationError(
                f"{kind} key needs fields {fields}, got {len(key)} value(s)", field=fields[0]
            )
        out = []
        for name, value in zip(fields, key):
            out.append(int(value) if name.endswith("_index") else str(value))
        return tuple(out)

    def delete(self, kind: str, key) -> dict:
        kind = self._check_kind(kind)
        with self._lock:
            k = self._normalize_key(kind, key)
            if k not in self._tables[kind]:
                raise NotFoundError(f"{kind} record {k} not found")
            cascaded = 0
            if kind in ("po", "to"):
                prop_kind = "poproperties" if kind == "po" else "toproperties"
                props = self._tables[prop_kind]
                doomed = [pk for pk in props if pk[0] == k[0]]
                for pk in doomed:
                    del props[pk]
                cascaded = len(doomed)
                if doomed:
                    self._write_table(prop_kind)
            if kind == "inputs":
                users = [
                    o for o in self._tables["outcome"].values() if k[0] in o.factor_values
                ]
                if users:
                    raise ValidationError(
                        f"cannot delete input factor {k[0]!r}: referenced by "
                        f"{len(users)} observation(s)"
                    )
            if kind == "outputs":
                users = [
                    o for o in self._tables["outcome"].values() if k[0] in o.output_values
                ]
                if users:
                    raise ValidationError(
                        f"cannot delete output parameter {k[0]!r}: referenced by "
                        f"{len(users)} observation(s)"
                    )
            del self._tables[kind][k]
            self._write_table(kind)
            return {"deleted": True, "cascaded_properties": cascaded}

    def list(self, kind: str, predicate=None) -> list:
        kind = self._check_kind(kind)
        with self._lock:
            rows = [self._tables[kind][k] for k in sorted(self._tables[kind])]
        if predicate is not None:
            rows = [r for r in rows if predicate(r)]
        return rows

    def counts(self) -> dict[str, int]:
        with self._lock:
            return {k: len(v) for k, v in self._tables.items()}

    # -- observations ---------------------------------------------------------

    def set_exclusion(
        self,
        experiment_id: str,
        run_index: int,
        replicate_index: int,
        excluded: bool,
        reason: str = "",
    ) -> Observation:
        with self._lock:
            obs = self.get("outcome", (experiment_id, run_index, replicate_index))
            obs.excluded = bool(excluded)
            obs.exclusion_reason = str(reason) if excluded else ""
            self._write_table("outcome")
            return obs

    def observations(self, experiment_id: str, include_excluded: bool = False) -> list[Observation]:
        rows = self.list("outcome", lambda o: o.experiment_id == experiment_id)
        if not include_excluded:
            rows = [o for o in rows if not o.excluded]
        return rows

    # -- fitted-model and optimization logs ------------------------------------

    def save_model(self, record: dict) -> dict:
        with self._lock:
            if "id" not in record:
                record = dict(record)
                record["id"] = f"M{len(self._models) + 1:04d}"
            self._models[record["id"]] = record
            self._write_aux(MODELS_FILE, self._models)
            return record

    def get_model(self, model_id: str) -> dict:
        with self._lock:
            try:
                return self._models[model_id]
            except KeyError:
                raise NotFoundError(f"no fitted model with id {model_id!r}") from None

    def list_models(self, predicate=None) -> list[dict]:
        with self._lock:
            rows = [self._models[k] for k in sorted(self._models)]
        if predicate is not None:
            rows = [r for r in rows if predicate(r)]
        return rows

    def save_optimization(self, record: dict) -> dict:
        with self._lock:
            if "id" not in record:
                record = dict(record)
                record["id"] = f"OPT{len(self._optimizations) + 1:04d}"
            self._optimizations[record["id"]] = record
            self._write_aux(OPTIMIZATIONS_FILE, self._optimizations)
            return record

    def list_optimizations(self) -> list[dict]:
        with self._lock:
            return [self._optimizations[k] for k in sorted(self._optimizations)]
