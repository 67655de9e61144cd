"""Command-line interface mirroring the menu structure.

Subcommands: init, entity <add|del|list>, plan, ingest, exclude,
analyze <homogeneity|anova1|anova2>, model <mono|multi>,
simulate <mono|multi>, optimize, whatif, compare, cost, report, serve.

Exit codes: 0 success, 1 validation error, 2 not found, 3 numerical error,
64 usage error. ``--format json`` prints the exact payload the HTTP service
would return.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import reports
from .api import DEFAULT_ALPHA, Workbench
from .errors import (
    NotFoundError,
    NumericalError,
    ValidationError,
    WorkbenchError,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NOT_FOUND = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64

STORE_ENV = "EDMLAB_STORE"


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parse_factor(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--factor expects code:low:high, got {text!r}")
    return {"code": parts[0], "low": float(parts[1]), "high": float(parts[2])}


def _parse_assignment(text: str):
    if "=" not in text:
        raise UsageError(f"expected code=value, got {text!r}")
    code, value = text.split("=", 1)
    return code, float(value)


def _parse_bound(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--bound expects code:low:high, got {text!r}")
    return parts[0], [float(parts[1]), float(parts[2])]


def _parse_objective(text: str):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"--objective expects model:sense[:weight], got {text!r}")
    spec = {"model_id": parts[0], "sense": parts[1]}
    if len(parts) == 3:
        spec["weight"] = float(parts[2])
    return spec


def build_parser() -> Parser:
    p = Parser(prog="edmlab", description="EDM experiment workbench")
    # Global options work both before and after the subcommand.
    common = Parser(add_help=False)
    for target, declare in ((p, False), (common, True)):
        target.add_argument(
            "--store",
            default=argparse.SUPPRESS if declare else os.environ.get(STORE_ENV, "./edmlab-store"),
            help=f"store directory (default: ${STORE_ENV} or ./edmlab-store)",
        )
        target.add_argument(
            "--format",
            choices=("human", "json"),
            default=argparse.SUPPRESS if declare else "human",
        )
        target.add_argument(
            "--alpha",
            type=float,
            default=argparse.SUPPRESS if declare else DEFAULT_ALPHA,
            help="default significance level for analyses",
        )
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    add_parser("init", help="erase all information in the store").add_argument(
        "--yes", action="store_true", help="confirm the wipe"
    )

    entity = add_parser("entity", help="add, delete or list table records")
    esub = entity.add_subparsers(dest="entity_command", required=True, parser_class=Parser)
    e_add = esub.add_parser("add", parents=[common])
    e_add.add_argument("table")
    e_add.add_argument("--json", dest="record", help="record as a JSON object")
    e_add.add_argument("--file", help="read the record (or records) from a JSON file")
    e_del = esub.add_parser("del", parents=[common])
    e_del.add_argument("table")
    e_del.add_argument("key", nargs="+", help="primary key value(s)")
    e_list = esub.add_parser("list", parents=[common])
    e_list.add_argument("table")
    e_list.add_argument("--filter", action="append", default=[], metavar="FIELD=VALUE")

    plan = add_parser("plan", help="program matrix of a factorial experiment")
    plan.add_argument("--factor", action="append", required=True, metavar="CODE:LOW:HIGH")
    plan.add_argument("--replicates", type=int, default=1)
    plan.add_argument("--center-points", type=int, default=0)
    plan.add_argument("--shuffle-seed", type=int, default=None)

    ingest = add_parser("ingest", help="load observations into OUTCOME")
    ingest.add_argument("--file", default="-", help="JSON array or JSONL file ('-' = stdin)")

    excl = add_parser("exclude", help="set or clear an observation's exclusion flag")
    excl.add_argument("--experiment", required=True)
    excl.add_argument("--run", type=int, required=True)
    excl.add_argument("--replicate", type=int, required=True)
    excl.add_argument("--include", action="store_true", help="clear the flag instead")
    excl.add_argument("--reason", default="")

    analyze = add_parser("analyze", help="statistic processing / dispersion analysis")
    asub = analyze.add_subparsers(dest="analysis", required=True, parser_class=Parser)
    for name, nfactors in (("homogeneity", 0), ("anova1", 1), ("anova2", 2)):
        ap = asub.add_parser(name, parents=[common])
        ap.add_argument("--experiment", required=True)
        ap.add_argument("--output", required=True)
        if nfactors:
            ap.add_argument("--factor", action="append", required=True)

    model = add_parser("model", help="fit one model family and store it")
    msub = model.add_subparsers(dest="model_command", required=True, parser_class=Parser)
    m_mono = msub.add_parser("mono", parents=[common])
    m_mono.add_argument("--experiment", required=True)
    m_mono.add_argument("--output", required=True)
    m_mono.add_argument("--factor", required=True)
    m_mono.add_argument("--family", required=True)
    m_multi = msub.add_parser("multi", parents=[common])
    m_multi.add_argument("--experiment", required=True)
    m_multi.add_argument("--output", required=True)
    m_multi.add_argument("--factor", action="append", required=True)
    m_multi.add_argument("--degree", default="rs_quadratic",
                         choices=("rs_linear", "rs_quadratic"))

    sim = add_parser("simulate", help="fit a class of families and rank them")
    ssub = sim.add_subparsers(dest="simulate_command", required=True, parser_class=Parser)
    for name in ("mono", "multi"):
        sp = ssub.add_parser(name, parents=[common])
        sp.add_argument("--experiment", required=True)
        sp.add_argument("--output", required=True)
        sp.add_argument("--factor", action="append", required=True)
        sp.add_argument("--family", action="append", default=None,
                        help="candidate family (repeatable; default: whole class)")
        sp.add_argument("--criterion", default="adj_r2", choices=("adj_r2", "rmse"))

    op = add_parser("optimize", help="optimal conditions from fitted models")
    op.add_argument("--model", default=None, help="fitted model id")
    op.add_argument("--experiment", default=None)
    op.add_argument("--output", default=None)
    sense = op.add_mutually_exclusive_group()
    sense.add_argument("--minimize", action="store_true")
    sense.add_argument("--maximize", action="store_true")
    op.add_argument("--objective", action="append", default=None,
                    metavar="MODEL:SENSE[:WEIGHT]", help="multi-objective entry (repeatable)")
    op.add_argument("--bound", action="append", default=[], metavar="CODE:LOW:HIGH")
    op.add_argument("--fix", action="append", default=[], metavar="CODE=VALUE")

    wi = add_parser("whatif", help="predictions at chosen work conditions")
    wi.add_argument("--model", action="append", required=True)
    wi.add_argument("--set", action="append", required=True, metavar="CODE=VALUE")

    cmp_p = add_parser("compare", help="comparative determination vs conventional method")
    cmp_p.add_argument("--minutes", type=float, default=None)
    cmp_p.add_argument("--model", default=None)
    cmp_p.add_argument("--set", action="append", default=[], metavar="CODE=VALUE")
    cmp_p.add_argument("--material", required=True)
    cmp_p.add_argument("--operation", required=True)
    cmp_p.add_argument("--provenance", default=None, choices=("measured", "predicted"))

    cost = add_parser("cost", help="economic calculus of a processing job")
    cost.add_argument("--minutes", type=float, required=True)
    cost.add_argument("--machine-rate", default=0)
    cost.add_argument("--labor-rate", default=0)
    cost.add_argument("--electrode-cost", default=0, help="currency per cm^3 of wear")
    cost.add_argument("--dielectric-rate", default=0)
    cost.add_argument("--energy-rate", default=0, help="currency per kWh")
    cost.add_argument("--power-kw", default=0)
    cost.add_argument("--wear-volume", default=0, help="electrode wear in cm^3")

    rep = add_parser("report", help="lists with information from the store")
    rep.add_argument("kind")
    rep.add_argument("--experiment", default=None)
    rep.add_argument("--filter", action="append", default=[], metavar="FIELD=VALUE")

    srv = add_parser("serve", help="run the HTTP service for the operator UI")
    srv.add_argument("--listen", default="127.0.0.1:8600", metavar="HOST:PORT")

    return p


def _filters(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--filter expects FIELD=VALUE, got {pair!r}")
        k, v = pair.split("=", 1)
        out[k] = v
    return out


def _read_records(args) -> list[dict]:
    if args.record:
        data = json.loads(args.record)
    elif args.file:
        with open(args.file, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        raise UsageError("entity add needs --json or --file")
    return data if isinstance(data, list) else [data]


def _read_observations(path: str) -> list[dict]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    text = text.strip()
    if not text:
        return []
    if text.startswith("["):
        return json.loads(text)
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def run(args) -> tuple[dict, str]:
    """Execute one parsed command; returns (payload, human rendering)."""
    wb = Workbench(args.store, alpha=args.alpha)
    cmd = args.command

    if cmd == "init":
        if not args.yes:
            raise ValidationError("init erases the whole store; pass --yes to confirm")
        payload = wb.initialize()
        return payload, "store initialized; all tables empty"

    if cmd == "entity":
        if args.entity_command == "add":
            last = None
            for record in _read_records(args):
                last = wb.entity_upsert(args.table, record)
            return last, reports.render_records(args.table, [last["record"]])
        if args.entity_command == "del":
            payload = wb.entity_delete(args.table, tuple(args.key))
            return payload, f"deleted {args.table} {' '.join(args.key)}"
        payload = wb.entity_list(args.table, _filters(args.filter))
        return payload, reports.render_records(payload["kind"], payload["records"])

    if cmd == "plan":
        payload = wb.plan(
            {
                "factors": [_parse_factor(f) for f in args.factor],
                "replicates": args.replicates,
                "center_points": args.center_points,
                "shuffle_seed": args.shuffle_seed,
            }
        )
        return payload, reports.render_matrix(payload)

    if cmd == "ingest":
        payload = wb.ingest(_read_observations(args.file))
        return payload, f"ingested {payload['ingested']} observation(s)"

    if cmd == "exclude":
        payload = wb.exclude(
            args.experiment, args.run, args.replicate, not args.include, args.reason
        )
        word = "re-included" if args.include else "excluded"
        return payload, f"{word} ({args.experiment}, {args.run}, {args.replicate})"

    if cmd == "analyze":
        if args.analysis == "homogeneity":
            payload = wb.analyze_homogeneity(args.experiment, args.output)
            return payload, reports.render_homogeneity(payload)
        if args.analysis == "anova1":
            payload = wb.analyze_anova1(args.experiment, args.output, args.factor[0])
            return payload, reports.render_anova(payload)
        payload = wb.analyze_anova2(args.experiment, args.output, args.factor)
        return payload, reports.render_anova(payload)

    if cmd == "model":
        factors = [args.factor] if args.model_command == "mono" else args.factor
        family = args.family if args.model_command == "mono" else args.degree
        payload = wb.model_fit(args.experiment, args.output, factors, family)
        return payload, reports.render_model(payload)

    if cmd == "simulate":
        payload = wb.model_simulate(
            args.experiment, args.output, args.factor, args.family, args.criterion
        )
        return payload, reports.render_ranking(payload)

    if cmd == "optimize":
        body: dict = {
            "bounds": dict(_parse_bound(b) for b in args.bound) or None,
            "fixed_factors": dict(_parse_assignment(f) for f in args.fix),
        }
        if args.objective:
            body["objectives"] = [_parse_objective(o) for o in args.objective]
        else:
            body["model_id"] = args.model
            body["experiment_id"] = args.experiment
            body["output_code"] = args.output
            if args.minimize:
                body["sense"] = "minimize"
            elif args.maximize:
                body["sense"] = "maximize"
            if not args.model and not args.output:
                raise UsageError("optimize needs --objective, --model or --output")
        payload = wb.optimize(body)
        return payload, reports.render_optimum(payload)

    if cmd == "whatif":
        settings = dict(_parse_assignment(s) for s in args.set)
        payload = wb.whatif(args.model, settings)
        rows = [
            [p["model_id"], p["output_code"], p["value"], p["extrapolated"]]
            for p in payload["predictions"]
        ]
        return payload, reports.render_table(
            ["model", "output", "predicted", "extrapolated"], rows, title="What-if"
        )

    if cmd == "compare":
        body = {"material": args.material, "operation": args.operation}
        if args.model:
            body["model_id"] = args.model
            body["settings"] = dict(_parse_assignment(s) for s in args.set)
        else:
            body["minutes"] = args.minutes
        if args.provenance:
            body["provenance"] = args.provenance
        payload = wb.compare(body)
        return payload, reports.render_comparison(payload)

    if cmd == "cost":
        payload = wb.cost(
            {
                "minutes": args.minutes,
                "machine_rate": args.machine_rate,
                "labor_rate": args.labor_rate,
                "electrode_wear_cost": args.electrode_cost,
                "dielectric_cost": args.dielectric_rate,
                "energy_rate": args.energy_rate,
                "power_draw": args.power_kw,
                "electrode_wear_volume": args.wear_volume,
            }
        )
        return payload, reports.render_cost(payload)

    if cmd == "report":
        filters = _filters(args.filter)
        if args.experiment:
            filters["experiment_id"] = args.experiment
        payload = wb.report(args.kind, filters or None)
        return payload, reports.render_records(payload["kind"], payload["records"])

    if cmd == "serve":
        from .service import serve_forever

        host, _, port = args.listen.rpartition(":")
        serve_forever(args.store, host or "127.0.0.1", int(port), alpha=args.alpha)
        return {"stopped": True}, "service stopped"

    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(str(err), file=sys.stderr)
        print("run 'edmlab --help' for usage", file=sys.stderr)
        return EXIT_USAGE
    try:
        payload, text = run(args)
    except UsageError as err:
        print(str(err), file=sys.stderr)
        return EXIT_USAGE
    except NotFoundError as err:
        _print_error(args, err)
        return EXIT_NOT_FOUND
    except NumericalError as err:
        _print_error(args, err)
        return EXIT_NUMERICAL
    except ValidationError as err:
        _print_error(args, err)
        return EXIT_VALIDATION
    except WorkbenchError as err:
        _print_error(args, err)
        return EXIT_VALIDATION
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)
    return EXIT_OK


def _print_error(args, err: WorkbenchError) -> None:
    if getattr(args, "format", "human") == "json":
        body = {"error": {"code": err.code, "message": str(err), "field": err.field}}
        print(json.dumps(body, indent=2, sort_keys=True), file=sys.stderr)
    else:
        print(f"error ({err.code}): {err}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
