"""HTTP/JSON session service: spaces and live assessment sessions.

In-memory store, one lock per session so concurrent answers serialize
(the loser of the race gets 409 because the current question moved on).
Optional append-only JSONL persistence of session events for audit.
Static files (the browser UI bundle) are served from ``static_dir``.
"""

from __future__ import annotations

import json
import mimetypes
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .core import (
    CapacityError,
    LspaceError,
    ParseError,
    ValidationError,
    format_state_line,
    parse_states,
)
from .quasi_ordinal import parse_hasse
from .sequence_space import (
    SequenceSpace,
    fringes,
    parse_seqs,
    state_masks,
)
from .base_dimension import minimize
from .assessment import (
    AssessmentConfig,
    ProjectionAssessment,
    ResponseModel,
)

SESSION_STATE_CAP = 1 << 16
COUNT_CAP = 1 << 20


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class SpaceRecord:
    def __init__(self, space_id: str, sp: SequenceSpace, state_count: int | None,
                 dim_c: int):
        self.id = space_id
        self.space = sp
        self.state_count = state_count
        self.dim_c = dim_c

    def payload(self) -> dict:
        return {
            "id": self.id,
            "n": self.space.domain.n,
            "concepts": list(self.space.domain.concepts),
            "state_count": self.state_count,
            "dim_c": self.dim_c,
            "sequences": [",".join(w) for w in self.space.all_sequence_labels()],
        }


class SessionRecord:
    def __init__(self, session_id: str, space: SpaceRecord, cfg: AssessmentConfig):
        self.id = session_id
        self.space = space
        self.cfg = cfg
        self.lock = threading.Lock()
        self.loop = ProjectionAssessment(space.space, cfg)

    @property
    def status(self) -> str:
        return "done" if self.loop.done else "active"

    def marginals_payload(self) -> dict:
        return {c: self.loop.marginals.get(c) for c in self.space.space.domain.concepts}

    def payload(self, include_transcript: bool = False) -> dict:
        out = {
            "id": self.id,
            "space_id": self.space.id,
            "status": self.status,
            "question": self.loop.current_question,
            "marginals": self.marginals_payload(),
            "questions_asked": len(self.loop.log.entries),
            "config": {
                "beta": self.cfg.model.beta,
                "eta": self.cfg.model.eta,
                "theta_lo": self.cfg.theta_lo,
                "theta_hi": self.cfg.theta_hi,
                "collection_size": self.cfg.collection_size,
                "seed": self.cfg.seed,
            },
        }
        if self.loop.done:
            result = self.loop.result()
            inner, outer = fringes(self.space.space, result.state)
            out["final"] = {
                "state": format_state_line(result.state),
                "recently_learned": sorted(inner),
                "ready_to_learn": sorted(outer),
                "forced_termination": result.forced_termination,
            }
        if include_transcript:
            out["transcript"] = _transcript_payload(self.loop)
        return out


def _transcript_payload(loop: ProjectionAssessment) -> list[dict]:
    events = []
    for ev in loop.transcript.events:
        if ev[0] == "ask":
            events.append({"type": "ask", "concept": ev[1]})
        elif ev[0] == "answer":
            events.append({"type": "answer", "concept": ev[1], "correct": ev[2]})
        elif ev[0] == "marginal":
            events.append({"type": "marginal", "concept": ev[1], "p": ev[2]})
        elif ev[0] == "final":
            events.append({"type": "final", "state": format_state_line(ev[1])})
    return events


class ServiceState:
    """Shared store behind the handlers; spaces immutable, sessions locked."""

    def __init__(self, persist: str | None = None):
        self.spaces: dict[str, SpaceRecord] = {}
        self.sessions: dict[str, SessionRecord] = {}
        self.store_lock = threading.Lock()
        self.persist_path = Path(persist) if persist else None
        self.persist_lock = threading.Lock()

    def log_event(self, event: dict) -> None:
        if self.persist_path is None:
            return
        with self.persist_lock:
            with self.persist_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    # -- spaces ------------------------------------------------------------

    def create_space(self, body: dict) -> dict:
        fmt = body.get("format")
        text = body.get("text")
        if fmt not in ("hasse", "seqs", "states") or not isinstance(text, str):
            raise ApiError(400, "body needs format in {hasse,seqs,states} and text")
        try:
            if fmt == "hasse":
                space = parse_hasse(text)
            elif fmt == "seqs":
                space = parse_seqs(text)
            else:
                space = parse_states(text)
            sp, dim_c = minimize(space)
        except ParseError as exc:
            raise ApiError(400, f"parse error: {exc}") from None
        except CapacityError as exc:
            raise ApiError(422, str(exc)) from None
        except LspaceError as exc:
            raise ApiError(400, str(exc)) from None
        try:
            state_count = len(state_masks(sp, cap=COUNT_CAP))
        except CapacityError:
            state_count = None
        rec = SpaceRecord(uuid.uuid4().hex[:12], sp, state_count, dim_c)
        with self.store_lock:
            self.spaces[rec.id] = rec
        self.log_event({"event": "space", "id": rec.id, "n": sp.domain.n,
                        "state_count": state_count, "dim_c": dim_c})
        return rec.payload()

    def get_space(self, space_id: str) -> SpaceRecord:
        rec = self.spaces.get(space_id)
        if rec is None:
            raise ApiError(404, "unknown space id")
        return rec

    # -- sessions ----------------------------------------------------------

    def create_session(self, body: dict) -> dict:
        space = self.get_space(str(body.get("space_id")))
        if space.state_count is None or space.state_count > SESSION_STATE_CAP:
            raise ApiError(422, "space too large to enumerate for assessment")
        cfg_body = body.get("config") or {}
        if not isinstance(cfg_body, dict):
            raise ApiError(400, "config must be an object")
        try:
            cfg = AssessmentConfig(
                model=ResponseModel(
                    beta=float(cfg_body.get("beta", 0.1)),
                    eta=float(cfg_body.get("eta", 0.01)),
                ),
                theta_lo=float(cfg_body.get("theta_lo", 0.2)),
                theta_hi=float(cfg_body.get("theta_hi", 0.8)),
                collection_size=int(cfg_body.get("collection_size", 8)),
                seed=int(cfg_body.get("seed", 0)),
            )
        except (TypeError, ValueError, ValidationError) as exc:
            raise ApiError(400, f"invalid config: {exc}") from None
        rec = SessionRecord(uuid.uuid4().hex[:12], space, cfg)
        with self.store_lock:
            self.sessions[rec.id] = rec
        self.log_event({"event": "session", "id": rec.id, "space_id": space.id})
        return rec.payload()

    def get_session(self, session_id: str) -> SessionRecord:
        rec = self.sessions.get(session_id)
        if rec is None:
            raise ApiError(404, "unknown session id")
        return rec

    def answer(self, session_id: str, body: dict) -> dict:
        rec = self.get_session(session_id)
        concept = body.get("concept")
        correct = body.get("correct")
        if not isinstance(concept, str) or not isinstance(correct, bool):
            raise ApiError(400, "body needs concept (string) and correct (boolean)")
        with rec.lock:
            if rec.loop.done or concept != rec.loop.current_question:
                raise ApiError(409, "concept is not the current question")
            rec.loop.submit_answer(concept, correct)
            payload = rec.payload()
        self.log_event({"event": "answer", "session_id": rec.id,
                        "concept": concept, "correct": correct})
        if payload.get("final"):
            self.log_event({"event": "final", "session_id": rec.id,
                            "final": payload["final"]})
        return payload

    def delete_session(self, session_id: str) -> None:
        with self.store_lock:
            if session_id not in self.sessions:
                raise ApiError(404, "unknown session id")
            del self.sessions[session_id]


def make_handler(state: ServiceState, static_dir: str | None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, status: int, payload: dict) -> None:
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if not raw:
                raise ApiError(400, "missing request body")
            try:
                body = json.loads(raw)
            except json.JSONDecodeError:
                raise ApiError(400, "body is not valid JSON") from None
            if not isinstance(body, dict):
                raise ApiError(400, "body must be a JSON object")
            return body

        def _route(self, method: str) -> None:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            try:
                if method == "POST" and parts == ["spaces"]:
                    self._send_json(200, state.create_space(self._read_body()))
                elif method == "GET" and len(parts) == 2 and parts[0] == "spaces":
                    self._send_json(200, state.get_space(parts[1]).payload())
                elif method == "POST" and parts == ["sessions"]:
                    self._send_json(200, state.create_session(self._read_body()))
                elif (method == "POST" and len(parts) == 3
                      and parts[0] == "sessions" and parts[2] == "answer"):
                    self._send_json(200, state.answer(parts[1], self._read_body()))
                elif method == "GET" and len(parts) == 2 and parts[0] == "sessions":
                    rec = state.get_session(parts[1])
                    with rec.lock:
                        payload = rec.payload(include_transcript=True)
                    self._send_json(200, payload)
                elif method == "DELETE" and len(parts) == 2 and parts[0] == "sessions":
                    state.delete_session(parts[1])
                    self._send_json(200, {"deleted": parts[1]})
                elif method == "GET":
                    self._serve_static(parts)
                else:
                    raise ApiError(404, "no such endpoint")
            except ApiError as exc:
                self._send_json(exc.status, {"error": exc.message})
            except LspaceError as exc:
                self._send_json(400, {"error": str(exc)})

        def _serve_static(self, parts: list[str]) -> None:
            if static_root is None:
                raise ApiError(404, "no such endpoint")
            rel = "/".join(parts) or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                raise ApiError(404, "not found")
            data = target.read_bytes()
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            self._route("GET")

        def do_POST(self):
            self._route("POST")

        def do_DELETE(self):
            self._route("DELETE")

    return Handler


def make_server(
    port: int = 8431,
    persist: str | None = None,
    static_dir: str | None = None,
    host: str = "127.0.0.1",
) -> ThreadingHTTPServer:
    state = ServiceState(persist=persist)
    handler = make_handler(state, static_dir)
    server = ThreadingHTTPServer((host, port), handler)
    server.service_state = state  # type: ignore[attr-defined]
    return server


def run_server(port: int = 8431, persist: str | None = None,
               static_dir: str | None = None) -> None:
    server = make_server(port=port, persist=persist, static_dir=static_dir)
    print(f"serving on http://127.0.0.1:{server.server_address[1]}/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
