"""HTTP JSON service over in-memory sessions.

State is a per-process append-only store of QP documents linked by
mutation provenance; all algebra runs on the server, the client only
renders.  Responses are JSON; errors use {code, message, details}.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Dict, Optional

from .fixtures import FIXTURE_NAMES, fixture
from .jacobian import UnboundedAtD, fd_algebra
from .qpcore import DEFAULT_BOUND, DEFAULT_CAP, MutationError, ViolationReport, check_mutability, mutate
from .qpdoc import DocumentError, emit_qp, parse_qp
from .selfinj import NotSelfinjective, nakayama_permutation
from .silting import SiltingError, verify_theorem


class ApiError(Exception):
    def __init__(self, status: int, code: int, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


class SessionStore:
    """Registered QPs with parent links; ids are stable per process."""

    def __init__(self, settings: Optional[dict] = None):
        self.settings = settings or {}
        self.bound = int(self.settings.get("degree_bound", DEFAULT_BOUND))
        self.cap = int(self.settings.get("cap", DEFAULT_CAP))
        self.seed = int(self.settings.get("seed", 0))
        self._lock = threading.Lock()
        self._items: Dict[str, dict] = {}
        self._counter = 0

    def _new_id(self) -> str:
        self._counter += 1
        return f"qp{self._counter}"

    def add(self, qp, parent: Optional[str] = None, vertices=None, name=None) -> str:
        with self._lock:
            qid = self._new_id()
            self._items[qid] = {
                "qp": qp,
                "parent": parent,
                "vertices": list(vertices) if vertices else None,
                "name": name,
                "analysis": None,
            }
            return qid

    def get(self, qid: str) -> dict:
        with self._lock:
            if qid not in self._items:
                raise ApiError(404, 404, f"unknown qp id {qid!r}")
            return self._items[qid]

    def history(self, qid: str):
        chain = []
        cur: Optional[str] = qid
        while cur is not None:
            item = self.get(cur)
            chain.append({
                "id": cur,
                "vertices": item["vertices"],
                "name": item["name"],
            })
            cur = item["parent"]
        chain.reverse()
        return chain

    # -- handlers --------------------------------------------------------

    def upload(self, payload: dict) -> dict:
        try:
            qp = parse_qp(payload)
        except DocumentError as exc:
            raise ApiError(422, 422, f"invalid QP document: {exc}") from exc
        name = (payload.get("metadata") or {}).get("name")
        qid = self.add(qp, name=name)
        return {"id": qid, "document": emit_qp(qp, name=name)}

    def load_fixture(self, name: str) -> dict:
        try:
            qp = fixture(name)
        except KeyError as exc:
            raise ApiError(404, 404, str(exc), {"known": FIXTURE_NAMES}) from exc
        qid = self.add(qp, name=name.upper())
        return {"id": qid, "document": emit_qp(qp, name=name.upper())}

    def document(self, qid: str) -> dict:
        item = self.get(qid)
        name = item["name"] if item["parent"] is None else None
        return emit_qp(item["qp"], name=name)

    def _vertices(self, qp, raw) -> list:
        if not isinstance(raw, list) or not raw:
            raise ApiError(422, 422, "body must contain a non-empty vertices list")
        by_str = {str(v): v for v in qp.quiver.vertices}
        out = []
        for tok in raw:
            key = str(tok)
            if key not in by_str:
                raise ApiError(422, 422, f"unknown vertex label {tok!r}",
                               {"known": list(by_str)})
            out.append(by_str[key])
        return out

    def mutate(self, qid: str, payload: dict) -> dict:
        item = self.get(qid)
        qp = item["qp"]
        vertices = self._vertices(qp, payload.get("vertices"))
        plan = check_mutability(qp, vertices)
        if isinstance(plan, ViolationReport):
            raise ApiError(422, 2, "mutation preconditions violated",
                           plan.messages())
        try:
            result = mutate(qp, vertices, self.bound, self.cap)
        except MutationError as exc:
            raise ApiError(422, 2, str(exc)) from exc
        # mutated documents carry only their provenance, not the root's name,
        # so an exported document is byte-identical to the CLI output
        new_id = self.add(result, parent=qid, vertices=[str(v) for v in vertices],
                          name=item["name"])
        return {"id": new_id, "document": emit_qp(result)}

    def analysis(self, qid: str) -> dict:
        item = self.get(qid)
        if item["analysis"] is not None:
            return item["analysis"]
        qp = item["qp"]
        two_cycle = qp.quiver.two_cycle_vertices()
        vertices = [
            {"label": str(v), "on_two_cycle": v in two_cycle}
            for v in qp.quiver.vertices
        ]
        A = fd_algebra(qp, self.bound)
        if isinstance(A, UnboundedAtD):
            out = {
                "finite_dimensional": False,
                "selfinjective": False,
                "dimension": None,
                "nakayama": None,
                "orbits": [],
                "vertices": vertices,
                "note": f"finiteness not certified at bound {A.bound}",
            }
            item["analysis"] = out
            return out
        sigma = nakayama_permutation(A, seed=self.seed)
        if isinstance(sigma, NotSelfinjective):
            out = {
                "finite_dimensional": True,
                "selfinjective": False,
                "dimension": A.dim,
                "nakayama": None,
                "orbits": [],
                "vertices": vertices,
                "note": sigma.note,
            }
            item["analysis"] = out
            return out
        orbits = []
        for orb in sigma.cycles(list(qp.quiver.vertices)):
            sorted_orb = sorted(orb, key=lambda v: qp.quiver.vertex_order(v))
            plan = check_mutability(qp, sorted_orb)
            mutable = not isinstance(plan, ViolationReport)
            orbits.append({
                "vertices": [str(v) for v in sorted_orb],
                "mutable": mutable,
                "violations": plan.messages() if isinstance(plan, ViolationReport) else [],
            })
        out = {
            "finite_dimensional": True,
            "selfinjective": True,
            "dimension": A.dim,
            "nakayama": sigma.cycle_notation(list(qp.quiver.vertices)),
            "orbits": orbits,
            "vertices": vertices,
            "note": None,
        }
        item["analysis"] = out
        return out

    def verify(self, qid: str, payload: dict) -> dict:
        item = self.get(qid)
        qp = item["qp"]
        vertices = self._vertices(qp, payload.get("vertices"))
        plan = check_mutability(qp, vertices)
        if isinstance(plan, ViolationReport):
            raise ApiError(422, 2, "mutation preconditions violated",
                           plan.messages())
        try:
            report = verify_theorem(qp, vertices, self.bound, seed=self.seed)
        except (MutationError, SiltingError) as exc:
            raise ApiError(422, 4, str(exc)) from exc
        return report.to_dict()


_ROUTES = [
    ("POST", re.compile(r"^/qps$"), "upload"),
    ("GET", re.compile(r"^/qps/([^/]+)$"), "document"),
    ("POST", re.compile(r"^/qps/([^/]+)/mutate$"), "mutate"),
    ("GET", re.compile(r"^/qps/([^/]+)/analysis$"), "analysis"),
    ("POST", re.compile(r"^/qps/([^/]+)/verify$"), "verify"),
    ("GET", re.compile(r"^/qps/([^/]+)/history$"), "history"),
    ("GET", re.compile(r"^/fixtures$"), "fixtures"),
    ("POST", re.compile(r"^/fixtures/([^/]+)$"), "load_fixture"),
]


def make_handler(store: SessionStore, static_dir: Optional[str] = None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        server_version = "qpmut"

        def log_message(self, fmt, *args):   # keep tests quiet
            pass

        def _send(self, status: int, payload, content_type="application/json"):
            body = (json.dumps(payload, default=str) + "\n").encode("utf-8") \
                if content_type == "application/json" else payload
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                return json.loads(raw.decode("utf-8") or "{}")
            except json.JSONDecodeError as exc:
                raise ApiError(400, 400, f"invalid JSON body: {exc}") from exc

        def do_OPTIONS(self):
            self._send(204, "", content_type="text/plain")

        def _static(self, path: str) -> bool:
            if static_root is None:
                return False
            rel = path.lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                return False
            ctype = {
                ".html": "text/html", ".js": "text/javascript",
                ".css": "text/css", ".json": "application/json",
                ".svg": "image/svg+xml",
            }.get(target.suffix, "application/octet-stream")
            self._send(200, target.read_bytes(), content_type=ctype)
            return True

        def _dispatch(self, method: str):
            try:
                for m, pattern, name in _ROUTES:
                    if m != method:
                        continue
                    match = pattern.match(self.path.split("?")[0])
                    if not match:
                        continue
                    args = match.groups()
                    if name == "upload":
                        return self._send(200, store.upload(self._body()))
                    if name == "document":
                        return self._send(200, store.document(args[0]))
                    if name == "mutate":
                        return self._send(200, store.mutate(args[0], self._body()))
                    if name == "analysis":
                        return self._send(200, store.analysis(args[0]))
                    if name == "verify":
                        return self._send(200, store.verify(args[0], self._body()))
                    if name == "history":
                        return self._send(200, {"chain": store.history(args[0])})
                    if name == "fixtures":
                        return self._send(200, {"names": FIXTURE_NAMES})
                    if name == "load_fixture":
                        return self._send(200, store.load_fixture(args[0]))
                if method == "GET" and self._static(self.path):
                    return None
                raise ApiError(404, 404, f"no route for {method} {self.path}")
            except ApiError as err:
                self._send(err.status, {
                    "code": err.code, "message": err.message, "details": err.details,
                })

        def do_GET(self):
            self._dispatch("GET")

        def do_POST(self):
            self._dispatch("POST")

    return Handler


def make_server(host: str = "127.0.0.1", port: int = 8642,
                settings: Optional[dict] = None,
                static_dir: Optional[str] = None) -> ThreadingHTTPServer:
    store = SessionStore(settings)
    handler = make_handler(store, static_dir)
    server = ThreadingHTTPServer((host, port), handler)
    server.store = store
    return server


def serve(host: str = "127.0.0.1", port: int = 8642,
          settings: Optional[dict] = None, static_dir: Optional[str] = None) -> None:
    server = make_server(host, port, settings, static_dir)
    sys_host, sys_port = server.server_address[:2]
    print(f"qpmut serving on http://{sys_host}:{sys_port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
