"""Embedded HTTP/JSON service backing the chain-editing UI.

One process serves one ``.rcm`` document. Reads hit an immutable
in-memory snapshot; mutations (PUT /api/model, POST /api/edits) go
through a single writer lock, are validated, written back to the source
file, and only then swapped in. Every response carries the snapshot's
revision counter in ``X-Model-Revision`` so clients can detect
concurrent changes.

Endpoints:

    GET  /api/taxonomy          builtin taxonomy tree
    GET  /api/model             current model JSON
    PUT  /api/model             replace whole model (422 on invalid)
    POST /api/edits             atomic batch of edit operations
    POST /api/analyze           coverage report; read-only what-if
    GET  /api/render/dot?scenario=ID   DOT text
    GET  /                      static UI bundle

Status codes: 400 malformed JSON or wrong shape, 404 unknown
scenario/control/route, 422 validation failure (diagnostics in body).
"""

from __future__ import annotations

import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from importlib import resources
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import analysis
from .analysis import NoTerminiError, coverage, report_to_dict
from .dsl import serialize
from .edits import Edit, apply_edits, edit_from_dict
from .model import (
    ERROR,
    ControlStatus,
    Diagnostic,
    ModelShapeError,
    RiskModel,
    model_from_dict,
    model_to_dict,
    validate_model,
    with_control_statuses,
)
from .report import RenderOptions, render_dot
from .taxonomy import builtin_taxonomy, taxonomy_to_dict

DEFAULT_PORT = 8323


class ModelStore:
    """Holds the current model snapshot and persists accepted writes."""

    def __init__(self, path: Path, model: RiskModel):
        self.path = Path(path)
        self._model = model
        self._revision = 1
        self._lock = threading.Lock()

    def snapshot(self) -> tuple[RiskModel, int]:
        with self._lock:
            return self._model, self._revision

    def _persist(self, model: RiskModel):
        text = serialize(model)
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, self.path)

    def replace(self, model: RiskModel) -> tuple[int, list[Diagnostic]]:
        """Swap in a whole new model. Errors leave the store untouched."""
        diags = validate_model(model, builtin_taxonomy())
        if any(d.severity == ERROR for d in diags):
            return 0, diags
        with self._lock:
            self._persist(model)
            self._model = model
            self._revision += 1
            return self._revision, diags

    def apply(self, edits: list[Edit]) -> tuple[int, RiskModel] | Diagnostic:
        """Apply an edit batch atomically; failure changes nothing."""
        with self._lock:
            result = apply_edits(self._model, edits)
            if isinstance(result, Diagnostic):
                return result
            self._persist(result)
            self._model = result
            self._revision += 1
            return self._revision, result


_STATIC_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".map": "application/json",
    ".ico": "image/x-icon",
}


def _static_file(name: str) -> tuple[bytes, str] | None:
    if not name or name.startswith(".") or any(c in name for c in "/\\"):
        return None
    root = resources.files("rcmodel") / "static"
    candidate = root / name
    if not candidate.is_file():
        return None
    ctype = _STATIC_TYPES.get(Path(name).suffix, "application/octet-stream")
    return candidate.read_bytes(), ctype


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    store: ModelStore

    # quiet by default; tests and the CLI can flip this on the server
    log_requests = False

    def log_message(self, format, *args):
        if self.log_requests:
            super().log_message(format, *args)

    # --- plumbing -----------------------------------------------------

    def _send(self, status: int, body: bytes, ctype: str):
        _, revision = self.store.snapshot()
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("X-Model-Revision", str(revision))
        self.end_headers()
        self.wfile.write(body)

    def _json(self, status: int, payload):
        body = json.dumps(payload, indent=2).encode("utf-8") + b"\n"
        self._send(status, body, "application/json")

    def _error(self, status: int, message: str):
        self._json(status, {"error": message})

    def _diagnostics(self, diags: list[Diagnostic]):
        self._json(422, {"diagnostics": [d.to_dict() for d in diags]})

    def _read_json(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise _BadRequest(f"malformed JSON body: {exc}") from None

    # --- routes -------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        try:
            if url.path == "/api/taxonomy":
                self._json(200, taxonomy_to_dict(builtin_taxonomy()))
            elif url.path == "/api/model":
                model, _ = self.store.snapshot()
                self._json(200, model_to_dict(model))
            elif url.path == "/api/render/dot":
                self._render_dot(url)
            elif url.path.startswith("/api/"):
                self._error(404, f"no such endpoint: {url.path}")
            else:
                self._static(url.path)
        except _BadRequest as exc:
            self._error(400, str(exc))

    def do_PUT(self):
        url = urlparse(self.path)
        if url.path != "/api/model":
            self._error(404, f"no such endpoint: {url.path}")
            return
        try:
            payload = self._read_json()
            model = model_from_dict(payload)
        except _BadRequest as exc:
            self._error(400, str(exc))
            return
        except ModelShapeError as exc:
            self._error(400, str(exc))
            return
        revision, diags = self.store.replace(model)
        if revision == 0:
            self._diagnostics(diags)
            return
        self._json(200, {"revision": revision, "diagnostics": [d.to_dict() for d in diags]})

    def do_POST(self):
        url = urlparse(self.path)
        try:
            if url.path == "/api/edits":
                self._post_edits()
            elif url.path == "/api/analyze":
                self._post_analyze()
            else:
                self._error(404, f"no such endpoint: {url.path}")
        except _BadRequest as exc:
            self._error(400, str(exc))

    # --- endpoint bodies ------------------------------------------------

    def _render_dot(self, url):
        params = parse_qs(url.query)
        ids = params.get("scenario")
        if not ids:
            raise _BadRequest("missing scenario query parameter")
        model, _ = self.store.snapshot()
        scenario = model.find_scenario(ids[0])
        if scenario is None:
            self._error(404, f"unknown scenario {ids[0]!r}")
            return
        text = render_dot(scenario)
        self._send(200, text.encode("utf-8"), "text/vnd.graphviz; charset=utf-8")

    def _post_edits(self):
        payload = self._read_json()
        if not isinstance(payload, list):
            raise _BadRequest("body must be a JSON array of edit operations")
        try:
            edits = [edit_from_dict(item) for item in payload]
        except ModelShapeError as exc:
            raise _BadRequest(str(exc)) from None
        result = self.store.apply(edits)
        if isinstance(result, Diagnostic):
            self._diagnostics([result])
            return
        revision, model = result
        self._json(200, {"revision": revision, "model": model_to_dict(model)})

    def _post_analyze(self):
        payload = self._read_json()
        if not isinstance(payload, dict):
            raise _BadRequest("body must be a JSON object")
        scenario_id = payload.get("scenario")
        if not isinstance(scenario_id, str):
            raise _BadRequest("scenario: expected a string id")
        statuses = payload.get("statuses", ["implemented"])
        if not isinstance(statuses, list) or not all(isinstance(s, str) for s in statuses):
            raise _BadRequest("statuses: expected a list of status names")
        try:
            status_set = frozenset(ControlStatus[s] for s in statuses)
        except KeyError as exc:
            raise _BadRequest(f"statuses: unknown status {exc.args[0]!r}") from None
        overrides_raw = payload.get("overrides", {})
        if not isinstance(overrides_raw, dict):
            raise _BadRequest("overrides: expected an object of control id to status")
        try:
            overrides = {
                k: ControlStatus[v] if isinstance(v, str) else _bad_status(v)
                for k, v in overrides_raw.items()
            }
        except KeyError as exc:
            raise _BadRequest(f"overrides: unknown status {exc.args[0]!r}") from None

        model, _ = self.store.snapshot()
        scenario = model.find_scenario(scenario_id)
        if scenario is None:
            self._error(404, f"unknown scenario {scenario_id!r}")
            return
        if overrides:
            try:
                scenario = with_control_statuses(scenario, overrides)
            except KeyError as exc:
                self._error(404, str(exc.args[0]))
                return
        try:
            report = coverage(scenario, statuses=status_set, cap=analysis.PATH_CAP)
        except NoTerminiError as exc:
            self._json(422, {"diagnostics": [
                Diagnostic(ERROR, "no-termini", str(exc), location=scenario_id).to_dict()
            ]})
            return
        self._json(200, report_to_dict(report))

    def _static(self, path: str):
        name = "index.html" if path == "/" else path.lstrip("/")
        found = _static_file(name)
        if found is None:
            self._error(404, f"not found: {path}")
            return
        body, ctype = found
        self._send(200, body, ctype)


class _BadRequest(Exception):
    pass


def _bad_status(value):
    raise _BadRequest(f"overrides: expected a status name string, got {value!r}")


def create_server(store: ModelStore, port: int, log_requests: bool = False) -> ThreadingHTTPServer:
    """Bind a threading HTTP server for the store on localhost."""
    handler = type("Handler", (_Handler,), {"store": store, "log_requests": log_requests})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def default_port() -> int:
    env = os.environ.get("RCMODEL_PORT")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_PORT
