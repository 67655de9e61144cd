"""Fixed-width text rendering for listings and analysis results.

Everything here is presentation only: the same payload dicts that the CLI
prints as JSON and the service returns over HTTP are rendered into
deterministic tables for the terminal.
"""

from __future__ import annotations


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def render_table(headers: list[str], rows: list[list], title: str | None = None) -> str:
    cells = [[_cell(v) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, c in enumerate(row):
            widths[i] = max(widths[i], len(c))
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def render_records(kind: str, records: list[dict]) -> str:
    if not records:
        return f"{kind}: 0 records"
    headers = list(records[0].keys())
    rows = [[r.get(h) for h in headers] for r in records]
    table = render_table(headers, rows)
    return f"{table}\n{kind}: {len(records)} record(s)"


def render_matrix(matrix: dict) -> str:
    codes = matrix["factor_codes"]
    headers = ["run", "rep"] + [f"{c} (coded)" for c in codes] + [f"{c}" for c in codes]
    rows = []
    for r in matrix["rows"]:
        rows.append(
            [r["run_index"], r["replicate_index"]]
            + [f"{v:+.0f}" if v == int(v) else f"{v:+.3f}" for v in r["coded_levels"]]
            + [v for v in r["natural_levels"]]
        )
    table = render_table(headers, rows, title="Program matrix")
    return f"{table}\n{len(matrix['rows'])} row(s)"


def render_anova(payload: dict) -> str:
    t = payload["table"]
    headers = ["source", "SS", "df", "MS", "F", "p"]
    rows = [
        [
            r["source"],
            r["sum_squares"],
            r["df"],
            r["mean_square"],
            r["f_statistic"],
            r["p_value"],
        ]
        for r in t["rows"]
    ]
    lines = [render_table(headers, rows, title="Dispersion analysis")]
    for source, sig in t["significant"].items():
        lines.append(f"{source}: {'significant' if sig else 'not significant'} at alpha={t['alpha']}")
    return "\n".join(lines)


def render_homogeneity(payload: dict) -> str:
    h = payload["homogeneity"]
    lines = [
        "Homogeneity check (Cochran's C)",
        f"groups: {h['group_count']}  C = {_cell(h['cochran_c'])}  "
        f"critical = {_cell(h['cochran_critical'])}  alpha = {h['alpha']}",
        f"verdict: {'homogeneous' if h['homogeneous'] else 'NOT homogeneous'}",
    ]
    if payload.get("suggestions"):
        rows = [
            [
                s["run_reference"]["run_index"],
                s["run_reference"]["replicate_index"],
                s["value"],
                s["statistic"],
                s["critical_value"],
            ]
            for s in payload["suggestions"]
        ]
        lines.append(
            render_table(
                ["run", "replicate", "value", "G", "G critical"],
                rows,
                title="Suggested eliminations (operator decides)",
            )
        )
    return "\n".join(lines)


def render_model(model: dict) -> str:
    m = model["metrics"]
    lines = [
        f"model {model.get('id', '-')}: {model['formula']}",
        f"family = {model['family']}  factors = {','.join(model['factor_codes'])}"
        f"  output = {model['output_code']}",
        f"r2 = {_cell(m['r2'])}  adj_r2 = {_cell(m['adj_r2'])}  rmse = {_cell(m['rmse'])}"
        f"  n = {m['n_points']}",
    ]
    if model.get("shared_curvature"):
        lines.append("note: two-level design; one shared curvature coefficient for all squares")
    return "\n".join(lines)


def render_ranking(payload: dict) -> str:
    rows = [
        [
            i + 1,
            e["model"]["family"],
            e["criterion_value"],
            e["model"]["metrics"]["r2"],
            e["model"]["metrics"]["rmse"],
            e["model"]["formula"],
        ]
        for i, e in enumerate(payload["entries"])
    ]
    lines = [
        render_table(
            ["rank", "family", payload["criterion"], "r2", "rmse", "formula"],
            rows,
            title="Model ranking (best first)",
        )
    ]
    for fam, reason in payload.get("skipped", {}).items():
        lines.append(f"skipped {fam}: {reason}")
    return "\n".join(lines)


def render_optimum(payload: dict) -> str:
    rows = [[c, v] for c, v in payload["settings"].items()]
    lines = [render_table(["factor", "setting"], rows, title="Optimal conditions")]
    obj_rows = [
        [o["output_code"], o["sense"], o["value"], o["extrapolated"]]
        for o in payload["objective_values"]
    ]
    lines.append(render_table(["output", "sense", "predicted", "extrapolated"], obj_rows))
    lines.append(f"scalarized value: {_cell(payload['scalarized_value'])}")
    lines.append(f"evaluations: {payload['iterations']}")
    active = payload["active_bounds"]
    lines.append("active bounds: " + (", ".join(active) if active else "none"))
    return "\n".join(lines)


def render_cost(payload: dict) -> str:
    order = ["machine", "labor", "electrode", "dielectric", "energy", "total"]
    rows = [[k, payload[k]] for k in order]
    return render_table(["component", "cost"], rows, title="Processing cost")


def render_comparison(payload: dict) -> str:
    return "\n".join(
        [
            "Comparative determination",
            f"unconventional: {_cell(payload['unconventional_time'])} min"
            f" ({payload['provenance']})",
            f"conventional:   {_cell(payload['classic_time'])} min"
            f" ({payload['classic_method']})",
            f"ratio = {_cell(payload['ratio'])}  verdict: {payload['verdict']}",
        ]
    )
