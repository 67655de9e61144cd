"""HTTP/JSON service exposing the workbench operations for the operator UI.

Stateless apart from the store: every response is computed from the request
and the store contents, so restarting the service never changes a response.
Validation failures map to 400, missing records to 404, numerical failures
to 422; every error body carries a machine-readable code.
"""

from __future__ import annotations

import json
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qsl, urlparse

from .api import Workbench
from .errors import (
    NotFoundError,
    NumericalError,
    ValidationError,
    WorkbenchError,
)

STATUS = {
    ValidationError: 400,
    NotFoundError: 404,
    NumericalError: 422,
}


def _status_for(err: WorkbenchError) -> int:
    for cls, code in STATUS.items():
        if isinstance(err, cls):
            return code
    return 400


class WorkbenchHandler(BaseHTTPRequestHandler):
    workbench: Workbench  # set by make_server
    protocol_version = "HTTP/1.1"

    # -- plumbing -------------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            data = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise ValidationError(f"request body is not valid JSON: {err}") from err
        if not isinstance(data, (dict, list)):
            raise ValidationError("request body must be a JSON object or array")
        return data

    def _send(self, status: int, payload) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _dispatch(self, method: str) -> None:
        try:
            url = urlparse(self.path)
            segments = [s for s in url.path.split("/") if s]
            query = dict(parse_qsl(url.query))
            status, payload = self.route(method, segments, query)
        except WorkbenchError as err:
            status = _status_for(err)
            payload = {"error": {"code": err.code, "message": str(err), "field": err.field}}
        except Exception as err:  # noqa: BLE001 - surface anything unexpected as JSON
            status = 500
            payload = {"error": {"code": "internal", "message": str(err), "field": None}}
        self._send(status, payload)

    def do_GET(self):
        self._dispatch("GET")

    def do_PUT(self):
        self._dispatch("PUT")

    def do_POST(self):
        self._dispatch("POST")

    def do_DELETE(self):
        self._dispatch("DELETE")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, PUT, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- routing ----------------------------------------------------------------

    TABLE_RE = re.compile(r"^(po|poproperties|to|toproperties|outcome|inputs|outputs|we|machine|classic)$")

    def route(self, method: str, seg: list[str], query: dict) -> tuple[int, dict]:
        wb = self.workbench
        if len(seg) < 2 or seg[0] != "api":
            raise NotFoundError(f"no route for {method} /{'/'.join(seg)}")
        head, rest = seg[1], seg[2:]

        if head == "health" and method == "GET":
            return 200, {"status": "ok", "store": str(wb.store.path)}

        if head == "init" and method == "POST":
            return 200, wb.initialize()

        if head == "plan" and method == "POST":
            return 200, wb.plan(self._body())

        if head == "observations" and method == "POST":
            if rest == ["exclude"]:
                b = self._body()
                return 200, wb.exclude(
                    b.get("experiment_id"),
                    b.get("run_index"),
                    b.get("replicate_index"),
                    bool(b.get("excluded", True)),
                    b.get("reason", ""),
                )
            if not rest:
                body = self._body()
                rows = body if isinstance(body, list) else body.get("observations", [])
                return 200, wb.ingest(rows)

        if head == "analysis" and method == "POST" and len(rest) == 1:
            b = self._body()
            alpha = b.get("alpha")
            if rest[0] == "homogeneity":
                return 200, wb.analyze_homogeneity(b.get("experiment_id"), b.get("output_code"), alpha)
            if rest[0] == "anova1":
                codes = b.get("factor_codes") or []
                if len(codes) != 1:
                    raise ValidationError("anova1 needs exactly one factor code", field="factor_codes")
                return 200, wb.analyze_anova1(b.get("experiment_id"), b.get("output_code"), codes[0], alpha)
            if rest[0] == "anova2":
                return 200, wb.analyze_anova2(
                    b.get("experiment_id"), b.get("output_code"), b.get("factor_codes") or [], alpha
                )

        if head == "models" and method == "POST" and len(rest) == 1:
            b = self._body()
            if rest[0] == "fit":
                return 200, wb.model_fit(
                    b.get("experiment_id"),
                    b.get("output_code"),
                    b.get("factor_codes") or [],
                    b.get("family"),
                )
            if rest[0] == "simulate":
                return 200, wb.model_simulate(
                    b.get("experiment_id"),
                    b.get("output_code"),
                    b.get("factor_codes") or [],
                    b.get("candidate_families"),
                    b.get("criterion", "adj_r2"),
                )
        if head == "models" and method == "GET":
            if rest:
                return 200, wb.store.get_model(rest[0])
            return 200, wb.report("models", query or None)

        if head == "optimize" and method == "POST":
            return 200, wb.optimize(self._body())

        if head == "whatif" and method == "POST":
            b = self._body()
            if "settings_list" in b:
                return 200, wb.whatif_batch(b.get("model_ids") or [], b["settings_list"])
            return 200, wb.whatif(b.get("model_ids") or [], b.get("settings") or {})

        if head == "compare" and method == "POST":
            return 200, wb.compare(self._body())

        if head == "cost" and method == "POST":
            return 200, wb.cost(self._body())

        if head == "reports" and method == "GET" and len(rest) == 1:
            return 200, wb.report(rest[0], query or None)

        if self.TABLE_RE.match(head):
            if method == "GET" and not rest:
                return 200, wb.entity_list(head, query or None)
            if method == "GET":
                return 200, wb.entity_get(head, tuple(rest))
            if method == "PUT":
                record = self._body()
                if rest:
                    record = self._inject_key(head, rest, record)
                return 200, wb.entity_upsert(head, record)
            if method == "DELETE" and rest:
                return 200, wb.entity_delete(head, tuple(rest))

        raise NotFoundError(f"no route for {method} /{'/'.join(seg)}")

    @staticmethod
    def _inject_key(kind: str, key_parts: list[str], record: dict) -> dict:
        from .entities import TABLES

        fields = TABLES[kind].key
        if len(key_parts) != len(fields):
            raise ValidationError(
                f"{kind} key needs {len(fields)} path segment(s): {fields}", field=fields[0]
            )
        record = dict(record)
        for name, value in zip(fields, key_parts):
            coerced = int(value) if name.endswith("_index") else value
            if name in record and record[name] != coerced:
                raise ValidationError(f"path key {name}={coerced!r} conflicts with body", field=name)
            record[name] = coerced
        return record


def make_server(store_path, host: str = "127.0.0.1", port: int = 0, alpha: float = 0.05):
    """Create (but do not start) the HTTP server; port 0 picks a free port."""
    workbench = Workbench(store_path, alpha=alpha)
    handler = type("BoundHandler", (WorkbenchHandler,), {"workbench": workbench})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(store_path, host: str, port: int, alpha: float = 0.05) -> None:
    server = make_server(store_path, host, port, alpha)
    addr = server.server_address
    print(f"edmlab service listening on http://{addr[0]}:{addr[1]}/api", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
