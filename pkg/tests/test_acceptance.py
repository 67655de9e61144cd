"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` for one pass/fail line per
criterion (add ``-s`` to see the printed summaries). Timed criteria measure
steady state; JIT warmup happens once in conftest.
"""

import io
import itertools
import json
import math
import threading
import time
import urllib.request
from contextlib import redirect_stdout

import numpy as np
import pytest

from edmlab.api import Workbench
from edmlab.cli import main as cli_main
from edmlab.distributions import f_cdf, f_quantile
from edmlab.doe import DesignSpec, FactorLevels, build_full_factorial, code_level, decode_level
from edmlab.economics import CostRates, processing_cost
from edmlab.models import MONO_FAMILIES, fit_mono, fit_response_surface, simulate_and_select
from edmlab.optimize import Objective, OptimizationProblem, optimize
from edmlab.service import make_server
from edmlab.stats import anova_one_way, anova_two_way, grubbs_scan, homogeneity_check

from .test_models import GENERATORS


def ok(n, text):
    print(f"PASS criterion {n}: {text}")


def best_time(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_criterion_01_anova_hand_oracle():
    table = anova_one_way([[1, 2, 3], [2, 3, 4], [3, 4, 5]])
    between, error = table.row("factor_A"), table.row("error")
    assert between.sum_squares == pytest.approx(6.0, abs=1e-9)
    assert between.df == 2
    assert error.sum_squares == pytest.approx(6.0, abs=1e-9)
    assert error.df == 6
    assert between.f_statistic == pytest.approx(3.0, abs=1e-9)
    assert between.p_value == pytest.approx(1 - f_cdf(3, 2, 6), abs=1e-9)
    elapsed = best_time(lambda: anova_one_way([[1, 2, 3], [2, 3, 4], [3, 4, 5]]))
    assert elapsed < 1e-3, f"anova_one_way took {elapsed * 1e3:.3f} ms"
    ok(1, f"one-way ANOVA matches the hand oracle in {elapsed * 1e6:.0f} us")


def test_criterion_02_distribution_correctness():
    for d in range(1, 21):
        assert f_cdf(1.0, d, d) == pytest.approx(0.5, abs=1e-10)
    # table values frozen from numerical integration of the F density
    assert f_quantile(0.95, 2, 6) == pytest.approx(5.14, abs=0.01)
    assert f_quantile(0.95, 2, 6) == pytest.approx(5.143252849784403, abs=1e-6)
    assert f_quantile(0.95, 1, 10) == pytest.approx(4.965, abs=0.005)
    assert f_quantile(0.95, 1, 10) == pytest.approx(4.964602743728392, abs=1e-6)
    ok(2, "f_cdf symmetry for d=1..20 and quantiles against integration oracle")


def test_criterion_03_partition_identity_fuzz():
    rng = np.random.default_rng(20260808)
    scale_factor = 3.7
    for _ in range(1000):
        k = int(rng.integers(2, 6))
        groups = [list(rng.normal(rng.uniform(-5, 5), rng.uniform(0.5, 3), size=int(rng.integers(2, 7)))) for _ in range(k)]
        t = anova_one_way(groups)
        total = t.row("total").sum_squares
        assert t.row("factor_A").sum_squares + t.row("error").sum_squares == pytest.approx(
            total, rel=1e-9, abs=1e-9
        )
        t2 = anova_one_way([[x * scale_factor for x in g] for g in groups])
        for src in ("factor_A", "error", "total"):
            assert t2.row(src).sum_squares == pytest.approx(
                scale_factor**2 * t.row(src).sum_squares, rel=1e-9, abs=1e-9
            )
        f1, f2 = t.row("factor_A").f_statistic, t2.row("factor_A").f_statistic
        assert f2 == pytest.approx(f1, rel=1e-9)
        assert t2.row("factor_A").p_value == pytest.approx(
            t.row("factor_A").p_value, rel=1e-9, abs=1e-12
        )
    for _ in range(1000):
        a, b, m = (int(rng.integers(2, 4)) for _ in range(3))
        cells = (rng.normal(0, 2, size=(a, b, m)) * rng.uniform(0.5, 4)).tolist()
        t = anova_two_way(cells)
        parts = sum(
            t.row(s).sum_squares for s in ("factor_A", "factor_B", "interaction", "error")
        )
        assert parts == pytest.approx(t.row("total").sum_squares, rel=1e-9, abs=1e-9)
        t2 = anova_two_way((np.asarray(cells) * scale_factor).tolist())
        for s in ("factor_A", "factor_B", "interaction", "error", "total"):
            assert t2.row(s).sum_squares == pytest.approx(
                scale_factor**2 * t.row(s).sum_squares, rel=1e-9, abs=1e-9
            )
        for s in ("factor_A", "factor_B", "interaction"):
            assert t2.row(s).f_statistic == pytest.approx(t.row(s).f_statistic, rel=1e-9)
            assert t2.row(s).p_value == pytest.approx(t.row(s).p_value, rel=1e-9, abs=1e-12)
    ok(3, "partition identity and scale equivariance on 2000 random datasets")


def test_criterion_04_design_matrix_properties():
    for k in range(1, 7):
        for r in (1, 2, 3):
            spec = DesignSpec(
                factors=[FactorLevels(f"f{i}", 2.0 * i + 1, 3.0 * i + 7) for i in range(k)],
                replicates=r,
            )
            matrix = build_full_factorial(spec)
            cols = np.array([row.coded_levels for row in matrix.rows])
            for i, j in itertools.combinations(range(k), 2):
                assert float(np.dot(cols[:, i], cols[:, j])) == 0.0
            for i in range(k):
                assert (cols[:, i] == -1).sum() == r * 2 ** (k - 1)
                assert (cols[:, i] == 1).sum() == r * 2 ** (k - 1)
            for row in matrix.rows:
                for c, natural, f in zip(row.coded_levels, row.natural_levels, spec.factors):
                    assert decode_level(c, f.low, f.high) == natural
                    x = natural
                    back = decode_level(code_level(x, f.low, f.high), f.low, f.high)
                    assert abs(back - x) <= 1e-12 * max(1.0, abs(x))
    ok(4, "orthogonality, balance and coding round-trip for k<=6, r<=3")


def test_criterion_05_model_recovery():
    for family in MONO_FAMILIES:
        fn, coeffs = GENERATORS[family]
        xs = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0]
        pts = [(x, fn(x)) for x in xs]
        model = fit_mono(family, pts)
        assert model.r2 == pytest.approx(1.0, abs=1e-9)
        for got, want in zip(model.coefficients, coeffs):
            assert got == pytest.approx(want, rel=1e-8)
        ranking = simulate_and_select(pts)
        best = ranking.best()
        if family in ("poly1", "poly2", "poly3"):
            # documented tie-break: nested polynomials tie at r2=1,
            # fewer coefficients win
            assert best.r2 == pytest.approx(1.0, abs=1e-9)
            assert int(best.family[-1]) <= int(family[-1])
        else:
            assert best.family == family
    grid = [
        ([a, b], (a - 2) ** 2 + (b + 1) ** 2)
        for a in (-3, 0, 3)
        for b in (-3, 0, 3)
    ]
    rs = fit_response_surface(grid, "rs_quadratic")
    assert rs.coefficients == pytest.approx([5.0, -4.0, 2.0, 0.0, 1.0, 1.0], abs=1e-8)
    ok(5, "all eight mono families and the quadratic surface recovered exactly")


def test_criterion_06_optimizer():
    pts = [
        ([a, b], (a - 2) ** 2 + (b + 1) ** 2)
        for a in np.linspace(-3, 3, 5)
        for b in np.linspace(-3, 3, 5)
    ]
    bowl = fit_response_surface(pts, "rs_quadratic", factor_codes=["x1", "x2"])

    def run():
        return optimize(OptimizationProblem([Objective(bowl, "minimize")]))

    elapsed = best_time(run, repeats=3)
    report = run()
    assert report.settings["x1"] == pytest.approx(2.0, abs=1e-4)
    assert report.settings["x2"] == pytest.approx(-1.0, abs=1e-4)
    assert elapsed < 1.0, f"optimize took {elapsed:.3f} s"

    line = fit_mono("poly1", [(x, float(x)) for x in (2, 4, 6, 8, 10)], factor_code="I")
    rising = optimize(OptimizationProblem([Objective(line, "minimize")]))
    assert rising.settings["I"] == pytest.approx(2.0, abs=1e-9)
    assert rising.active_bounds == ["I"]
    falling = optimize(OptimizationProblem([Objective(line, "maximize")]))
    assert falling.settings["I"] == pytest.approx(10.0, abs=1e-9)
    assert falling.active_bounds == ["I"]
    ok(6, f"quadratic optimum within 1e-4 in {elapsed * 1e3:.0f} ms; bounds detected")


def test_criterion_07_outlier_loop(tmp_path):
    sample = [10, 10, 10, 10, 50]
    suggestion = grubbs_scan(sample, alpha=0.05)
    assert suggestion.verdict == "suggest_eliminate"
    assert suggestion.index == 4
    assert suggestion.statistic == pytest.approx(1.789, abs=0.01)

    wb = Workbench(tmp_path / "store")
    wb.entity_upsert("inputs", {"code": "I", "min_level": 2, "max_level": 10})
    wb.entity_upsert("outputs", {"code": "vw", "sense": "minimize"})
    samples = {1: sample, 2: [10] * 5, 3: [10] * 5}
    rows = []
    for run, ys in samples.items():
        for rep, y in enumerate(ys, start=1):
            rows.append({
                "experiment_id": "E1", "run_index": run, "replicate_index": rep,
                "factor_values": {"I": float(run)}, "output_values": {"vw": float(y)},
            })
    wb.ingest(rows)

    def store_bytes():
        return {
            p.name: p.read_bytes() for p in sorted(wb.store.path.iterdir())
        }

    before = store_bytes()
    first = wb.analyze_homogeneity("E1", "vw")
    wb.analyze_anova1("E1", "vw", "I")
    assert store_bytes() == before, "analysis mutated the store"
    assert not first["homogeneity"]["homogeneous"]
    ref = first["suggestions"][0]["run_reference"]
    assert (ref["run_index"], ref["replicate_index"]) == (1, 5)

    wb.exclude("E1", 1, 5, True, "Grubbs alpha=0.05")
    after_exclusion = store_bytes()
    second = wb.analyze_homogeneity("E1", "vw")
    assert second["homogeneity"]["homogeneous"]
    assert store_bytes() == after_exclusion, "re-analysis mutated the store"
    ok(7, "suggested elimination at (1,5), G=1.789; homogeneous after exclusion")


def test_criterion_08_end_to_end_pipeline(tmp_path):
    t0 = time.perf_counter()
    wb = Workbench(tmp_path / "store")
    factors = [("ti", 30.0, 90.0), ("t0", 5.0, 25.0), ("I", 2.0, 10.0), ("H", 0.0, 80.0)]
    for code, lo, hi in factors:
        wb.entity_upsert("inputs", {"code": code, "min_level": lo, "max_level": hi})
    wb.entity_upsert("outputs", {"code": "vw", "name": "volume wear", "sense": "minimize"})

    matrix = wb.plan({
        "factors": [{"code": c, "low": lo, "high": hi} for c, lo, hi in factors],
        "replicates": 1,
        "center_points": 3,
    })
    assert len(matrix["rows"]) == 2**4 + 3

    def planted(coded):
        c1, c2, c3, c4 = coded
        return (
            25 + 6 * c1 - 4 * c2 + 3 * c3 + 2 * c4 + 1.5 * c1 * c2
            + 5 * (c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4)
        )

    observations = [
        {
            "experiment_id": "EDM1",
            "run_index": row["run_index"],
            "replicate_index": row["replicate_index"],
            "factor_values": dict(zip(matrix["factor_codes"], row["natural_levels"])),
            "output_values": {"vw": planted(row["coded_levels"])},
        }
        for row in matrix["rows"]
    ]
    wb.ingest(observations)

    model = wb.model_fit("EDM1", "vw", ["ti", "t0", "I", "H"], "rs_quadratic")
    assert model["shared_curvature"] is True
    report = wb.optimize({"model_id": model["id"], "sense": "minimize"})

    # planted optimum: solve grad = 0 in coded units, decode to natural
    h = np.array([[10.0, 1.5, 0, 0], [1.5, 10.0, 0, 0], [0, 0, 10.0, 0], [0, 0, 0, 10.0]])
    g = np.array([6.0, -4.0, 3.0, 2.0])
    coded_opt = np.linalg.solve(h, -g)
    planted_opt = {
        c: decode_level(coded_opt[i], lo, hi) for i, (c, lo, hi) in enumerate(factors)
    }
    for code, lo, hi in factors:
        tolerance = 0.02 * (hi - lo)
        assert abs(report["settings"][code] - planted_opt[code]) <= tolerance, code
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0, f"pipeline took {elapsed:.2f} s"
    ok(8, f"planted optimum recovered within 2% of each range in {elapsed:.2f} s")


def _run_cli_json(*argv):
    out = io.StringIO()
    code = None
    with redirect_stdout(out):
        code = cli_main(list(argv))
    assert code == 0, out.getvalue()
    return json.loads(out.getvalue())


def test_criterion_09_store_and_api_contracts(tmp_path):
    store_path = tmp_path / "store"
    wb = Workbench(store_path)

    # byte-stable entity round-trip
    wb.entity_upsert("machine", {
        "id": "M1", "name": "ELER 01", "generator_type": "RC",
        "max_current": 50, "hourly_rate": "35.5000",
    })
    machine_file = store_path / "MACHINE.jsonl"
    snapshot = machine_file.read_bytes()
    reloaded = Workbench(store_path)
    reloaded.entity_upsert("machine", json.loads(snapshot.decode().strip()))
    assert machine_file.read_bytes() == snapshot

    # initialize is idempotent
    first = wb.initialize()
    state = {p.name: p.read_bytes() for p in sorted(store_path.iterdir())}
    second = wb.initialize()
    assert first == second
    assert {p.name: p.read_bytes() for p in sorted(store_path.iterdir())} == state

    # CLI json equals the service payload on a fixed fixture
    wb.entity_upsert("inputs", {"code": "I", "min_level": 2, "max_level": 10})
    wb.entity_upsert("outputs", {"code": "vw", "sense": "minimize"})
    rows = []
    for run, (i, ys) in enumerate({2.0: [4.1, 4.3], 10.0: [9.0, 9.4]}.items(), start=1):
        for rep, y in enumerate(ys, start=1):
            rows.append({"experiment_id": "E1", "run_index": run, "replicate_index": rep,
                         "factor_values": {"I": i}, "output_values": {"vw": y}})
    wb.ingest(rows)

    server = make_server(store_path)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        port = server.server_address[1]

        def post(path, body):
            req = urllib.request.Request(
                f"http://127.0.0.1:{port}{path}",
                data=json.dumps(body).encode(),
                method="POST",
                headers={"Content-Type": "application/json"},
            )
            with urllib.request.urlopen(req) as resp:
                return json.loads(resp.read())

        cli_payload = _run_cli_json(
            "--store", str(store_path), "--format", "json", "analyze", "anova1",
            "--experiment", "E1", "--output", "vw", "--factor", "I",
        )
        service_payload = post(
            "/api/analysis/anova1",
            {"experiment_id": "E1", "output_code": "vw", "factor_codes": ["I"]},
        )
        assert cli_payload == service_payload

        cost_cli = _run_cli_json(
            "--store", str(store_path), "--format", "json", "cost",
            "--minutes", "90", "--machine-rate", "40", "--energy-rate", "0.2",
            "--power-kw", "5", "--electrode-cost", "3", "--wear-volume", "2",
        )
        cost_service = post("/api/cost", {
            "minutes": 90, "machine_rate": 40, "energy_rate": 0.2,
            "power_draw": 5, "electrode_wear_cost": 3, "electrode_wear_volume": 2,
        })
        assert cost_cli == cost_service
    finally:
        server.shutdown()
        server.server_close()

    # economic breakdown sums exactly on the 67.5 fixture
    breakdown = processing_cost(
        90,
        CostRates(machine_rate=40, energy_rate="0.2", power_draw=5, electrode_wear_cost=3),
        electrode_wear_volume=2,
    )
    parts = breakdown.machine + breakdown.labor + breakdown.electrode
    parts += breakdown.dielectric + breakdown.energy
    assert parts == breakdown.total
    from decimal import Decimal

    assert breakdown.total == Decimal("67.5")
    assert cost_cli["total"] == "67.5000"
    ok(9, "byte-stable round-trip, idempotent wipe, CLI/service parity, exact money")
