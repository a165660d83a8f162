"""HTTP interface over the simulator.

A deliberately small JSON protocol on top of the standard library's
threading HTTP server: sessions hold a board plus its explored tree,
and every other endpoint renders views of that tree.  All responses
carry permissive CORS headers so a browser front end served from
anywhere can talk to a local simulator.

The protocol is documented in docs/serve-protocol.md.
"""

from __future__ import annotations

import json
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import elements as el
from .board import Board, SetupError
from .chsh import chsh_from_tree
from .detection import log_csv, sample_log
from .engine import SimConfig, run_tree, tree_document
from .fixtures import fixture_board, fixture_names
from .setupdoc import from_document, to_document
from . import views

PROTOCOL = {"format": "photonlab-serve", "version": 1}

_MAX_BODY = 10 * 1024 * 1024


class _HttpError(Exception):
    def __init__(self, status: int, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.message = message
        self.details = details


class Session:
    def __init__(self, sid: str, board: Board, config: SimConfig):
        self.id = sid
        self.board = board
        self.config = config
        self.tree = run_tree(board, config)

    def replace_board(self, board: Board) -> None:
        self.board = board
        self.tree = run_tree(board, self.config)

    def summary(self) -> dict:
        return {
            "session": self.id,
            "title": self.board.title,
            "nodeCount": len(self.tree.nodes),
            "exploredProbability": self.tree.explored_probability(),
        }


class LabService:
    """Session store plus every request handler, HTTP-free and testable."""

    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._counter = 0

    # -- sessions -----------------------------------------------------------------

    def _session(self, sid: str) -> Session:
        with self._lock:
            try:
                return self._sessions[sid]
            except KeyError:
                raise _HttpError(404, f"no session {sid!r}") from None

    def _config_from(self, doc) -> SimConfig:
        base = SimConfig()
        if not isinstance(doc, dict):
            raise _HttpError(400, "config must be an object")
        unknown = set(doc) - {"maxSteps", "minBranchProbability", "maxNodes"}
        if unknown:
            raise _HttpError(400, f"unknown config keys {sorted(unknown)}")
        try:
            return SimConfig(
                max_steps=int(doc.get("maxSteps", base.max_steps)),
                min_branch_probability=float(
                    doc.get("minBranchProbability", base.min_branch_probability)
                ),
                max_nodes=int(doc.get("maxNodes", base.max_nodes)),
            )
        except (TypeError, ValueError) as exc:
            raise _HttpError(400, f"bad config: {exc}") from None

    def _board_from(self, body: dict) -> Board:
        if ("setup" in body) == ("fixture" in body):
            raise _HttpError(400, "body needs either 'setup' or 'fixture'")
        if "fixture" in body:
            name = body["fixture"]
            if name not in fixture_names():
                raise _HttpError(404, f"no fixture {name!r}")
            return fixture_board(name)
        return from_document(body["setup"])

    def meta(self) -> dict:
        with self._lock:
            count = len(self._sessions)
        return {
            **PROTOCOL,
            "fixtureCount": len(fixture_names()),
            "sessionCount": count,
        }

    def list_fixtures(self) -> list[dict]:
        out = []
        for name in fixture_names():
            b = fixture_board(name)
            out.append({"name": name, "title": b.title, "notes": b.notes})
        return out

    def get_fixture(self, name: str) -> dict:
        if name not in fixture_names():
            raise _HttpError(404, f"no fixture {name!r}")
        return to_document(fixture_board(name))

    def element_catalog(self) -> list[dict]:
        out = []
        for kind in sorted(el.ALL_KINDS):
            out.append(
                {
                    "kind": kind,
                    "params": sorted(el.allowed_params(kind)),
                    "isSource": kind in el.SOURCE_KINDS,
                    "isMeasurement": kind in el.MEASUREMENT_KINDS,
                    "isLogic": kind in el.LOGIC_KINDS,
                }
            )
        return out

    def operator(self, body: dict) -> dict:
        try:
            return views.operator_document(
                body.get("kind", ""),
                int(body.get("rotation", 0)),
                body.get("params") or {},
                basis=str(body.get("basis", "HV")),
            )
        except (TypeError, ValueError) as exc:
            raise _HttpError(400, str(exc)) from None

    def create_session(self, body: dict) -> dict:
        board = self._board_from(body)
        config = self._config_from(body.get("config", {}))
        with self._lock:
            self._counter += 1
            sid = f"s{self._counter}"
            session = Session(sid, board, config)
            self._sessions[sid] = session
        return self.describe_session(sid)

    def list_sessions(self) -> list[dict]:
        with self._lock:
            sessions = list(self._sessions.values())
        return [s.summary() for s in sessions]

    def describe_session(self, sid: str) -> dict:
        s = self._session(sid)
        return {
            "session": s.id,
            "setup": to_document(s.board),
            "config": {
                "maxSteps": s.config.max_steps,
                "minBranchProbability": s.config.min_branch_probability,
                "maxNodes": s.config.max_nodes,
            },
            "detections": views.detections_document(s.tree),
        }

    def replace_setup(self, sid: str, body: dict) -> dict:
        s = self._session(sid)
        board = from_document(body)
        s.replace_board(board)
        return self.describe_session(sid)

    def delete_session(self, sid: str) -> dict:
        with self._lock:
            if sid not in self._sessions:
                raise _HttpError(404, f"no session {sid!r}")
            del self._sessions[sid]
        return {"deleted": sid}

    def tree(self, sid: str, include_states: bool) -> dict:
        return tree_document(self._session(sid).tree, include_states=include_states)

    def _node_id(self, raw: str) -> int:
        try:
            return int(raw)
        except ValueError:
            raise _HttpError(404, f"bad node id {raw!r}") from None

    def node_state(self, sid: str, nid: str, basis: str, fmt: str) -> dict:
        s = self._session(sid)
        try:
            return views.node_state_document(s.tree, self._node_id(nid), basis, fmt)
        except IndexError:
            raise _HttpError(404, f"no node {nid}") from None
        except ValueError as exc:
            raise _HttpError(400, str(exc)) from None

    def node_entanglement(self, sid: str, nid: str) -> dict:
        s = self._session(sid)
        try:
            return views.entanglement_document(s.tree, self._node_id(nid))
        except IndexError:
            raise _HttpError(404, f"no node {nid}") from None
        except ValueError as exc:
            raise _HttpError(400, str(exc)) from None

    def node_blink(self, sid: str, nid: str, seed, shots: int, basis: str) -> dict:
        s = self._session(sid)
        try:
            return views.blink_document(s.tree, self._node_id(nid), seed, shots, basis)
        except IndexError:
            raise _HttpError(404, f"no node {nid}") from None
        except ValueError as exc:
            raise _HttpError(400, str(exc)) from None

    def chsh(self, sid: str) -> dict:
        s = self._session(sid)
        try:
            return chsh_from_tree(s.tree).to_document()
        except ValueError as exc:
            raise _HttpError(400, str(exc)) from None

    def sample(self, sid: str, body: dict):
        s = self._session(sid)
        try:
            runs = int(body.get("runs", 100))
            seed = body.get("seed", "0")
        except (TypeError, ValueError) as exc:
            raise _HttpError(400, f"bad sample request: {exc}") from None
        if runs < 0 or runs > 1_000_000:
            raise _HttpError(400, "runs must be between 0 and 1000000")
        records = sample_log(s.board, seed, runs, s.config)
        fmt = body.get("format", "records")
        if fmt == "csv":
            return log_csv(s.board, records)
        if fmt == "records":
            return {"seed": str(seed), "runs": runs, "records": records}
        raise _HttpError(400, f"unknown sample format {fmt!r}")


def _build_routes():
    S = r"(?P<sid>s\d+)"
    N = r"(?P<nid>-?\d+)"
    table = [
        ("GET", rf"^/api/meta$", lambda svc, m, q, b: svc.meta()),
        ("GET", rf"^/api/fixtures$", lambda svc, m, q, b: svc.list_fixtures()),
        ("GET", rf"^/api/fixtures/(?P<name>[^/]+)$",
         lambda svc, m, q, b: svc.get_fixture(m["name"])),
        ("GET", rf"^/api/elements$", lambda svc, m, q, b: svc.element_catalog()),
        ("POST", rf"^/api/operator$", lambda svc, m, q, b: svc.operator(b)),
        ("POST", rf"^/api/sessions$", lambda svc, m, q, b: svc.create_session(b)),
        ("GET", rf"^/api/sessions$", lambda svc, m, q, b: svc.list_sessions()),
        ("GET", rf"^/api/sessions/{S}$",
         lambda svc, m, q, b: svc.describe_session(m["sid"])),
        ("PUT", rf"^/api/sessions/{S}/setup$",
         lambda svc, m, q, b: svc.replace_setup(m["sid"], b)),
        ("DELETE", rf"^/api/sessions/{S}$",
         lambda svc, m, q, b: svc.delete_session(m["sid"])),
        ("GET", rf"^/api/sessions/{S}/tree$",
         lambda svc, m, q, b: svc.tree(m["sid"], q.get("states", "1") != "0")),
        ("GET", rf"^/api/sessions/{S}/nodes/{N}/state$",
         lambda svc, m, q, b: svc.node_state(
             m["sid"], m["nid"], q.get("basis", "HV"), q.get("format", "cartesian"))),
        ("GET", rf"^/api/sessions/{S}/nodes/{N}/entanglement$",
         lambda svc, m, q, b: svc.node_entanglement(m["sid"], m["nid"])),
        ("GET", rf"^/api/sessions/{S}/nodes/{N}/blink$",
         lambda svc, m, q, b: svc.node_blink(
             m["sid"], m["nid"], q.get("seed", "0"),
             int(q.get("shots", "1")), q.get("basis", "HV"))),
        ("GET", rf"^/api/sessions/{S}/chsh$", lambda svc, m, q, b: svc.chsh(m["sid"])),
        ("POST", rf"^/api/sessions/{S}/sample$",
         lambda svc, m, q, b: svc.sample(m["sid"], b)),
    ]
    return [(method, re.compile(pat), fn) for method, pat, fn in table]


_ROUTES = _build_routes()

_FALLBACK_PAGE = """<!doctype html>
<title>photonlab</title>
<h1>photonlab simulator</h1>
<p>This is the JSON API; see <code>docs/serve-protocol.md</code>.
Start at <a href="/api/meta">/api/meta</a>,
<a href="/api/fixtures">/api/fixtures</a>, or POST to /api/sessions.</p>
"""


class LabRequestHandler(BaseHTTPRequestHandler):
    service: LabService = None  # set on the server class
    ui_dir: Path | None = None
    protocol_version = "HTTP/1.1"

    # -- plumbing ---------------------------------------------------------------

    def log_message(self, fmt, *args):  # tests want a quiet server
        pass

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, POST, PUT, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, doc) -> None:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        self._send(status, text.encode("utf-8"), "application/json; charset=utf-8")

    def _send_error_json(self, status: int, message: str, details=None) -> None:
        doc = {"error": message}
        if details:
            doc["details"] = details
        self._send_json(status, doc)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length > _MAX_BODY:
            raise _HttpError(413, "request body too large")
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _HttpError(400, f"request body is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise _HttpError(400, "request body must be a JSON object")
        return doc

    # -- dispatch ----------------------------------------------------------------

    def _dispatch(self, method: str) -> None:
        url = urlparse(self.path)
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}
        path_matched = False
        try:
            for route_method, pattern, fn in _ROUTES:
                m = pattern.match(url.path)
                if not m:
                    continue
                path_matched = True
                if route_method != method:
                    continue
                body = self._read_body() if method in ("POST", "PUT") else {}
                result = fn(self.service, m.groupdict(), query, body)
                if isinstance(result, str):
                    self._send(200, result.encode("utf-8"), "text/csv; charset=utf-8")
                else:
                    self._send_json(200, result)
                return
            if path_matched:
                self._send_error_json(405, f"{method} not allowed here")
            elif method == "GET" and not url.path.startswith("/api/"):
                self._serve_static(url.path)
            else:
                self._send_error_json(404, f"no route {url.path}")
        except _HttpError as exc:
            self._send_error_json(exc.status, exc.message, exc.details)
        except SetupError as exc:
            self._send_error_json(400, "setup rejected", exc.errors)
        except BrokenPipeError:
            pass
        except Exception as exc:  # pragma: no cover - last-resort guard
            self._send_error_json(500, f"internal error: {exc}")

    def _serve_static(self, path: str) -> None:
        if self.ui_dir is None:
            self._send(200, _FALLBACK_PAGE.encode("utf-8"), "text/html; charset=utf-8")
            return
        name = path.lstrip("/") or "index.html"
        target = (self.ui_dir / name).resolve()
        root = self.ui_dir.resolve()
        if root not in target.parents and target != root:
            self._send_error_json(404, "outside the UI directory")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            # single-page front ends route client side; fall back to the shell
            target = root / "index.html"
            if not target.is_file():
                self._send_error_json(404, f"no file {name}")
                return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), ctype)

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_PUT(self):
        self._dispatch("PUT")

    def do_DELETE(self):
        self._dispatch("DELETE")

    def do_OPTIONS(self):
        self._send(204, b"", "text/plain")


def make_server(host: str = "127.0.0.1", port: int = 8077,
                ui_dir: str | None = None) -> ThreadingHTTPServer:
    service = LabService()
    handler = type(
        "BoundHandler",
        (LabRequestHandler,),
        {"service": service, "ui_dir": Path(ui_dir) if ui_dir else None},
    )
    return ThreadingHTTPServer((host, port), handler)


def serve(host: str = "127.0.0.1", port: int = 8077, ui_dir: str | None = None) -> None:
    httpd = make_server(host, port, ui_dir)
    actual_port = httpd.server_address[1]
    print(f"photonlab serving on http://{host}:{actual_port}", flush=True)
    try:
        httpd.serve_forever()
    finally:
        httpd.server_close()
