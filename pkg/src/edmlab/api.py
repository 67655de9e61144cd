"""Operator-facing operations shared by the CLI and the HTTP service.

Every method takes and returns plain JSON-able dicts so that the CLI's
``--format json`` output and the service payloads are field-for-field
identical. Analyses only read the store; exclusions go through the explicit
exclude operation, never through an analysis.
"""

from __future__ import annotations

import math
from decimal import Decimal

from . import doe, economics, models, optimize as opt, stats
from .entities import TABLES, record_to_dict
from .errors import NotFoundError, UnsupportedDesignError, ValidationError
from .store import ExperimentStore

DEFAULT_ALPHA = 0.05


def jsonable(obj):
    """Make a payload strictly JSON-serializable (inf/nan become strings,
    decimals become exact strings, tuples become lists)."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, Decimal):
        return str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "Infinity" if obj > 0 else "-Infinity"
        if math.isnan(obj):
            return "NaN"
        return obj
    return obj


class Workbench:
    """All menu operations over one experiment store."""

    def __init__(self, store: ExperimentStore | str, alpha: float = DEFAULT_ALPHA):
        self.store = store if isinstance(store, ExperimentStore) else ExperimentStore(store)
        if not 0 < alpha < 1:
            raise ValidationError("alpha must lie in (0, 1)", field="alpha")
        self.alpha = alpha

    # -- initialization / modification / listing ------------------------------

    def initialize(self) -> dict:
        return jsonable(self.store.initialize())

    def entity_upsert(self, kind: str, record: dict) -> dict:
        entity = self.store.upsert(kind, record)
        return jsonable({"kind": kind.lower(), "record": record_to_dict(entity)})

    def entity_delete(self, kind: str, key) -> dict:
        result = self.store.delete(kind, key)
        result["kind"] = kind.lower()
        return jsonable(result)

    def entity_get(self, kind: str, key) -> dict:
        entity = self.store.get(kind, key)
        return jsonable({"kind": kind.lower(), "record": record_to_dict(entity)})

    def entity_list(self, kind: str, filters: dict | None = None) -> dict:
        predicate = None
        if filters:
            def predicate(rec, _f=dict(filters)):
                d = record_to_dict(rec)
                return all(str(d.get(k)) == str(v) for k, v in _f.items())

        rows = [record_to_dict(r) for r in self.store.list(kind, predicate)]
        return jsonable({"kind": kind.lower(), "count": len(rows), "records": rows})

    def report(self, kind: str, filters: dict | None = None) -> dict:
        k = kind.lower()
        if k in TABLES:
            return self.entity_list(k, filters)
        if k == "models":
            rows = self.store.list_models(
                (lambda m: all(str(m.get(f)) == str(v) for f, v in filters.items()))
                if filters
                else None
            )
            return jsonable({"kind": "models", "count": len(rows), "records": rows})
        if k == "optimizations":
            rows = self.store.list_optimizations()
            return jsonable({"kind": "optimizations", "count": len(rows), "records": rows})
        raise ValidationError(f"unknown report kind {kind!r}", field="kind")

    # -- planning / ingestion --------------------------------------------------

    def plan(self, body: dict) -> dict:
        factors = body.get("factors")
        if not factors:
            raise ValidationError("at least one factor is required", field="factors")
        spec = doe.DesignSpec(
            factors=[
                doe.FactorLevels(str(f["code"]), float(f["low"]), float(f["high"]))
                for f in factors
            ],
            replicates=int(body.get("replicates", 1)),
            center_points=int(body.get("center_points", 0)),
            shuffle_seed=body.get("shuffle_seed"),
        )
        return jsonable(doe.build_full_factorial(spec).to_dict())

    def ingest(self, observations: list[dict]) -> dict:
        count = 0
        for record in observations:
            self.store.upsert("outcome", record)
            count += 1
        return {"ingested": count}

    def exclude(
        self,
        experiment_id: str,
        run_index: int,
        replicate_index: int,
        excluded: bool = True,
        reason: str = "",
    ) -> dict:
        obs = self.store.set_exclusion(experiment_id, run_index, replicate_index, excluded, reason)
        return jsonable({"record": record_to_dict(obs)})

    # -- data extraction helpers ------------------------------------------------

    def _measurements(self, experiment_id: str, output_code: str):
        """Non-excluded observations of an experiment carrying the output."""
        self._require_output(output_code)
        rows = [
            o
            for o in self.store.observations(experiment_id)
            if output_code in o.output_values
        ]
        if not rows:
            raise NotFoundError(
                f"no observations with output {output_code!r} in experiment {experiment_id!r}"
            )
        return rows

    def _require_output(self, code: str) -> None:
        if not any(o.code == code for o in self.store.list("outputs")):
            raise NotFoundError(f"output parameter {code!r} is not declared")

    def _require_factor(self, code: str):
        for f in self.store.list("inputs"):
            if f.code == code:
                return f
        raise NotFoundError(f"input factor {code!r} is not declared")

    def _replicate_groups(self, experiment_id: str, output_code: str):
        rows = self._measurements(experiment_id, output_code)
        groups: dict[int, list] = {}
        for o in sorted(rows, key=lambda o: (o.run_index, o.replicate_index)):
            groups.setdefault(o.run_index, []).append(o)
        return groups

    # -- statistic processing ----------------------------------------------------

    def analyze_homogeneity(self, experiment_id: str, output_code: str, alpha: float | None = None) -> dict:
        alpha = self.alpha if alpha is None else float(alpha)
        groups = self._replicate_groups(experiment_id, output_code)
        if len(groups) < 2:
            raise UnsupportedDesignError(
                "homogeneity check needs at least 2 replicate groups (runs)"
            )
        values = [[o.output_values[output_code] for o in grp] for grp in groups.values()]
        report = stats.homogeneity_check(values, alpha)

        suggestions = []
        if not report.homogeneous:
            for run_index, grp in groups.items():
                sample = [o.output_values[output_code] for o in grp]
                if len(sample) < 3:
                    continue
                s = stats.grubbs_scan(sample, alpha)
                if s.verdict == stats.SUGGEST_ELIMINATE:
                    s.run_reference = grp[s.index].run_reference
                    suggestions.append(s.to_dict())
        return jsonable(
            {
                "experiment_id": experiment_id,
                "output_code": output_code,
                "homogeneity": report.to_dict(),
                "suggestions": suggestions,
            }
        )

    def analyze_anova1(
        self, experiment_id: str, output_code: str, factor_code: str, alpha: float | None = None
    ) -> dict:
        alpha = self.alpha if alpha is None else float(alpha)
        self._require_factor(factor_code)
        rows = self._measurements(experiment_id, output_code)
        levels: dict[float, list[float]] = {}
        for o in rows:
            if factor_code in o.factor_values:
                levels.setdefault(o.factor_values[factor_code], []).append(
                    o.output_values[output_code]
                )
        if len(levels) < 2:
            raise UnsupportedDesignError(
                f"factor {factor_code!r} has fewer than 2 levels in experiment {experiment_id!r}"
            )
        groups = [levels[v] for v in sorted(levels)]
        table = stats.anova_one_way(groups, alpha)
        table.factor_codes = [factor_code]
        return jsonable(
            {
                "experiment_id": experiment_id,
                "output_code": output_code,
                "factor_codes": [factor_code],
                "levels": {str(v): len(levels[v]) for v in sorted(levels)},
                "table": table.to_dict(),
            }
        )

    def analyze_anova2(
        self,
        experiment_id: str,
        output_code: str,
        factor_codes: list[str],
        alpha: float | None = None,
    ) -> dict:
        alpha = self.alpha if alpha is None else float(alpha)
        if len(factor_codes) != 2:
            raise ValidationError("two-factor analysis needs exactly 2 factor codes", field="factor_codes")
        code_a, code_b = factor_codes
        self._require_factor(code_a)
        self._require_factor(code_b)
        rows = self._measurements(experiment_id, output_code)
        cells: dict[tuple[float, float], list[float]] = {}
        for o in rows:
            if code_a in o.factor_values and code_b in o.factor_values:
                key = (o.factor_values[code_a], o.factor_values[code_b])
                cells.setdefault(key, []).append(o.output_values[output_code])
        levels_a = sorted({k[0] for k in cells})
        levels_b = sorted({k[1] for k in cells})
        missing = [(a, b) for a in levels_a for b in levels_b if (a, b) not in cells]
        if missing:
            raise UnsupportedDesignError(
                f"incomplete layout: no replicates at {code_a}={missing[0][0]}, {code_b}={missing[0][1]}"
            )
        layout = [[cells[(a, b)] for b in levels_b] for a in levels_a]
        table = stats.anova_two_way(layout, alpha)
        table.factor_codes = list(factor_codes)
        return jsonable(
            {
                "experiment_id": experiment_id,
                "output_code": output_code,
                "factor_codes": list(factor_codes),
                "levels": {code_a: levels_a, code_b: levels_b},
                "table": table.to_dict(),
            }
        )

    # -- modeling ----------------------------------------------------------------

    def _factor_domain(self, code: str) -> tuple[float, float] | None:
        for f in self.store.list("inputs"):
            if f.code == code:
                return (f.min_level, f.max_level)
        return None

    def _mono_points(self, experiment_id: str, output_code: str, factor_code: str):
        rows = self._measurements(experiment_id, output_code)
        pts = [
            (o.factor_values[factor_code], o.output_values[output_code])
            for o in rows
            if factor_code in o.factor_values
        ]
        if not pts:
            raise NotFoundError(
                f"no observations with factor {factor_code!r} in experiment {experiment_id!r}"
            )
        return pts

    def _multi_points(self, experiment_id: str, output_code: str, factor_codes: list[str]):
        rows = self._measurements(experiment_id, output_code)
        pts = [
            ([o.factor_values[c] for c in factor_codes], o.output_values[output_code])
            for o in rows
            if all(c in o.factor_values for c in factor_codes)
        ]
        if not pts:
            raise NotFoundError(
                f"no observations with factors {factor_codes} in experiment {experiment_id!r}"
            )
        return pts

    def model_fit(
        self,
        experiment_id: str,
        output_code: str,
        factor_codes: list[str],
        family: str,
    ) -> dict:
        for c in factor_codes:
            self._require_factor(c)
        if family in models.MONO_FAMILIES:
            if len(factor_codes) != 1:
                raise ValidationError(
                    f"family {family} takes exactly one factor", field="factor_codes"
                )
            pts = self._mono_points(experiment_id, output_code, factor_codes[0])
            model = models.fit_mono(
                family, pts, factor_code=factor_codes[0], output_code=output_code
            )
        elif family in models.RS_FAMILIES:
            pts = self._multi_points(experiment_id, output_code, factor_codes)
            domain = {c: self._factor_domain(c) for c in factor_codes}
            model = models.fit_response_surface(
                pts, family, domain=domain, factor_codes=factor_codes, output_code=output_code
            )
        else:
            raise ValidationError(f"unknown model family {family!r}", field="family")
        record = model.to_dict()
        record["experiment_id"] = experiment_id
        record = self.store.save_model(jsonable(record))
        return jsonable(record)

    def model_simulate(
        self,
        experiment_id: str,
        output_code: str,
        factor_codes: list[str],
        candidate_families=None,
        criterion: str = "adj_r2",
    ) -> dict:
        for c in factor_codes:
            self._require_factor(c)
        if len(factor_codes) == 1:
            pts = self._mono_points(experiment_id, output_code, factor_codes[0])
        else:
            pts = self._multi_points(experiment_id, output_code, factor_codes)
        ranking = models.simulate_and_select(
            pts,
            candidate_families,
            criterion,
            factor_codes=factor_codes,
            output_code=output_code,
        )
        payload = ranking.to_dict()
        payload["experiment_id"] = experiment_id
        payload["output_code"] = output_code
        return jsonable(payload)

    # -- optimization ---------------------------------------------------------------

    def _load_model(self, model_id: str) -> models.FittedModel:
        return models.FittedModel.from_dict(self.store.get_model(model_id))

    def _best_model_for(self, experiment_id: str | None, output_code: str) -> dict:
        candidates = [
            m
            for m in self.store.list_models()
            if m["output_code"] == output_code
            and (experiment_id is None or m.get("experiment_id") == experiment_id)
        ]
        if not candidates:
            raise NotFoundError(
                f"no fitted model for output {output_code!r}; fit one first"
            )

        def score(m):
            adj = m["metrics"].get("adj_r2")
            return adj if adj is not None else m["metrics"]["r2"]

        return max(candidates, key=lambda m: (score(m), m["id"]))

    def _output_sense(self, output_code: str) -> str:
        for o in self.store.list("outputs"):
            if o.code == output_code:
                return o.sense
        return "minimize"

    def optimize(self, body: dict) -> dict:
        objectives = []
        specs = body.get("objectives")
        if not specs:
            if body.get("model_id"):
                record = self.store.get_model(body["model_id"])
            elif body.get("output_code"):
                record = self._best_model_for(body.get("experiment_id"), body["output_code"])
            else:
                raise ValidationError(
                    "give either objectives[], a model_id, or an output_code",
                    field="objectives",
                )
            specs = [
                {
                    "model_id": record["id"],
                    "sense": body.get("sense") or self._output_sense(record["output_code"]),
                    "weight": 1.0,
                }
            ]
        for s in specs:
            model = self._load_model(s["model_id"])
            sense = s.get("sense") or self._output_sense(model.output_code)
            objectives.append(opt.Objective(model, sense, float(s.get("weight", 1.0))))

        bounds = None
        if body.get("bounds"):
            bounds = {c: (float(v[0]), float(v[1])) for c, v in body["bounds"].items()}
        problem = opt.OptimizationProblem(
            objectives=objectives,
            bounds=bounds,
            fixed_factors={c: float(v) for c, v in (body.get("fixed_factors") or {}).items()},
        )
        report = opt.optimize(problem)
        record = report.to_dict()
        record["objectives"] = [
            {"model_id": s["model_id"], "sense": o.sense, "weight": o.weight}
            for s, o in zip(specs, objectives)
        ]
        record = self.store.save_optimization(jsonable(record))
        return jsonable(record)

    def whatif(self, model_ids: list[str], settings: dict) -> dict:
        if not model_ids:
            raise ValidationError("at least one model id is required", field="model_ids")
        loaded = [self._load_model(mid) for mid in model_ids]
        predictions = opt.what_if(loaded, {c: float(v) for c, v in settings.items()})
        for p, mid in zip(predictions, model_ids):
            p["model_id"] = mid
        return jsonable({"settings": settings, "predictions": predictions})

    def whatif_batch(self, model_ids: list[str], settings_list: list[dict]) -> dict:
        """Predictions over many settings at once (chart sampling for the UI,
        which never evaluates models client-side)."""
        if not isinstance(settings_list, list) or not settings_list:
            raise ValidationError("settings_list must be a non-empty array", field="settings_list")
        if len(settings_list) > 10_000:
            raise ValidationError("settings_list is limited to 10000 entries", field="settings_list")
        results = [self.whatif(model_ids, s)["predictions"] for s in settings_list]
        return jsonable({"settings_list": settings_list, "predictions_list": results})

    # -- economics ---------------------------------------------------------------------

    def compare(self, body: dict) -> dict:
        material = body.get("material")
        operation = body.get("operation")
        if not material or not operation:
            raise ValidationError("material and operation are required", field="material")
        if body.get("model_id"):
            model = self._load_model(body["model_id"])
            settings = body.get("settings") or {}
            minutes = opt.what_if([model], settings)[0]["value"]
            provenance = "predicted"
        else:
            if body.get("minutes") is None:
                raise ValidationError("give minutes or a model_id with settings", field="minutes")
            minutes = float(body["minutes"])
            provenance = str(body.get("provenance", "measured"))
        comparison = economics.comparative_determination(
            minutes, material, operation, self.store.list("classic"), provenance
        )
        return jsonable(comparison.to_dict())

    def cost(self, body: dict) -> dict:
        if body.get("minutes") is None:
            raise ValidationError("minutes is required", field="minutes")
        rates = economics.CostRates(
            machine_rate=body.get("machine_rate", 0),
            labor_rate=body.get("labor_rate", 0),
            electrode_wear_cost=body.get("electrode_wear_cost", 0),
            dielectric_cost=body.get("dielectric_cost", 0),
            energy_rate=body.get("energy_rate", 0),
            power_draw=body.get("power_draw", 0),
        )
        breakdown = economics.processing_cost(
            body["minutes"], rates, body.get("electrode_wear_volume", 0)
        )
        return jsonable(breakdown.to_dict())
