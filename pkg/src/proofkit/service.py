"""HTTP JSON facade over sessions, kernels, prover, and grading.

Every response is an envelope ``{"ok": true, "data": ...}`` or
``{"ok": false, "error": {"code", "message", "detail"}}``.  All stateful
data goes through an append-only JSON-lines log with periodic snapshots;
booting a service on the same data directory replays the log, so a crash
after any request loses nothing.  Mutating session requests carry the
client's revision number and are refused with 409 when stale.
"""
from __future__ import annotations

import json
import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.staticfiles import StaticFiles

from . import natural, sequent, session as sessions, tableau
from .errors import (
    FormatError,
    ProofkitError,
    UnknownAssignment,
)
from .hilbert import WProof, check_w_proof, load_axioms
from .natural import NdProof, check_nd_proof
from .notation import parse_formula, parse_sequent, render_formula
from .scripts import parse_script, render_script
from .semantics import (
    BudgetExceeded,
    Countermodel,
    Environment,
    Exhausted,
    Model,
    countermodel_search,
)
from .sequent import ScProof, check_proof
from .session import AssignmentStore, Session, Submission
from .tableau import LikelyUnprovable, Proved, SearchBudget, Unknown

SNAPSHOT_EVERY = 50
NOTATIONS = ("standard", "abstract")


class UnknownSession(ProofkitError):
    """A session id that names no live session."""


class StaleRevision(ProofkitError):
    """A mutating request carrying an out-of-date session revision."""


# ------------------------------------------------------------- rendering


def model_to_json(m: Model) -> dict:
    return {
        "size": m.size,
        "functions": [
            {
                "name": name,
                "arity": arity,
                "table": [
                    {"args": list(args), "value": value}
                    for args, value in sorted(table.items())
                ],
            }
            for (name, arity), table in sorted(m.funcs.items())
        ],
        "predicates": [
            {
                "name": name,
                "arity": arity,
                "holds": sorted(list(args) for args in table),
            }
            for (name, arity), table in sorted(m.preds.items())
        ],
    }


def env_to_json(env: Environment) -> dict:
    return {"values": list(env.values)}


def assessment_to_json(outcome, full: bool = False) -> dict:
    """A prover verdict; ``full`` adds the proof script or countermodel."""
    data: dict[str, Any] = {"verdict": outcome.verdict}
    if isinstance(outcome, Proved) and full:
        report = check_proof(outcome.proof)
        data["steps"] = report.steps
        data["script"] = render_script(outcome.proof)
    if isinstance(outcome, LikelyUnprovable) and outcome.counterexample:
        cex = outcome.counterexample
        data["model"] = model_to_json(cex.model)
        data["env"] = env_to_json(cex.env)
    return data


def submission_to_json(sub: Submission) -> dict:
    return {
        "assignment": sub.assignment_id,
        "student": sub.student_id,
        "steps": sub.steps,
        "open_goals": sub.open_goals,
        "timestamp": sub.timestamp,
    }


def session_to_json(s: Session, notation: str = "standard") -> dict:
    open_goals = []
    for goal in s.open_goals():
        if s.system == "SC":
            open_goals.append(
                {"formulas": [render_formula(f, notation) for f in goal]})
        else:
            open_goals.append({
                "goal": render_formula(goal.goal, notation),
                "assumptions": [
                    render_formula(a, notation) for a in goal.assumptions],
            })
    report = s.report()
    file = s.save()
    return {
        "id": s.id,
        "system": s.system,
        "goal": render_formula(s.goal, notation),
        "revision": s.revision,
        "cursor": s.cursor,
        "closed": not open_goals,
        "report": {"verdict": report.verdict, "steps": report.steps},
        "open_goals": open_goals,
        "entries": json.loads(file)["entries"],
        "file": file,
    }


# ----------------------------------------------------------- persistence


class ServiceStore:
    """All service state plus its durable log.

    Mutations funnel through :meth:`dispatch`, the single code path used
    both by live requests and by boot-time replay, so a replayed store is
    bit-for-bit the store that crashed.
    """

    def __init__(self, data_dir: str | Path | None = None,
                 prover_budget: float | None = None):
        self._tmp: TemporaryDirectory | None = None
        if data_dir is None:
            self._tmp = TemporaryDirectory(prefix="secav-")
            data_dir = self._tmp.name
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.data_dir / "log.jsonl"
        self.snapshot_path = self.data_dir / "snapshot.json"
        self.prover_budget = prover_budget
        self.sessions: dict[str, Session] = {}
        self.grades = AssignmentStore()
        self.pool = ThreadPoolExecutor(max_workers=2)
        self._lock = threading.RLock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._events = 0
        self._recover()

    # -- locking

    def session_lock(self, sid: str) -> threading.Lock:
        with self._lock:
            return self._session_locks.setdefault(sid, threading.Lock())

    def session(self, sid: str) -> Session:
        try:
            return self.sessions[sid]
        except KeyError:
            raise UnknownSession(sid) from None

    # -- the single mutation path

    def dispatch(self, event: dict) -> None:
        kind = event["e"]
        if kind == "session":
            s = Session(event["system"], event["goal"], sid=event["id"])
            self.sessions[s.id] = s
        elif kind == "import":
            s = sessions.load(event["file"], sid=event["id"])
            self.sessions[s.id] = s
        elif kind == "apply":
            s = self.session(event["id"])
            from_json = (sequent.rule_from_json if s.system == "SC"
                         else natural.rule_from_json)
            try:
                rule = from_json(event["rule"])
            except (ValueError, KeyError, TypeError) as exc:
                raise FormatError(f"bad rule: {exc}") from None
            s.apply(event["goal"], rule)
        elif kind == "goto":
            self.session(event["id"]).goto(event["index"])
        elif kind == "assignment":
            self.grades.create(event["system"], event["goal"],
                               due=event.get("due"), aid=event["id"])
        elif kind == "submit":
            self.grades.submit(event["aid"], event["student"],
                               event["snapshot"], now=event["now"])
        else:
            raise FormatError(f"unknown event kind {kind!r}")

    def commit(self, event: dict) -> None:
        """Apply one event and make it durable; no log entry on failure."""
        with self._lock:
            self.dispatch(event)
            line = json.dumps(event, separators=(",", ":"), sort_keys=True)
            with open(self.log_path, "a", encoding="utf-8") as f:
                f.write(line + "\n")
                f.flush()
                os.fsync(f.fileno())
            self._events += 1
            if self._events % SNAPSHOT_EVERY == 0:
                self._write_snapshot()

    # -- snapshot + replay

    def _write_snapshot(self) -> None:
        data = {
            "upto": self._events,
            "sessions": {
                sid: {"file": s.save(), "revision": s.revision}
                for sid, s in self.sessions.items()
            },
            "assignments": [
                {
                    "id": a.id,
                    "system": a.system,
                    "goal": render_formula(a.goal),
                    "due": a.due,
                }
                for a in self.grades.assignments()
            ],
            "submissions": [
                {
                    "aid": sub.assignment_id,
                    "student": sub.student_id,
                    "snapshot": sub.snapshot,
                    "now": sub.timestamp,
                }
                for sub in self.grades.submissions()
            ],
        }
        tmp = self.snapshot_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data), encoding="utf-8")
        os.replace(tmp, self.snapshot_path)

    def _recover(self) -> None:
        upto = 0
        if self.snapshot_path.exists():
            data = json.loads(self.snapshot_path.read_text(encoding="utf-8"))
            upto = data["upto"]
            for sid, entry in data["sessions"].items():
                s = sessions.load(entry["file"], sid=sid)
                s.revision = entry["revision"]
                self.sessions[sid] = s
            for row in data["assignments"]:
                self.grades.create(row["system"], row["goal"],
                                   due=row["due"], aid=row["id"])
            for row in data["submissions"]:
                self.grades.submit(row["aid"], row["student"],
                                   row["snapshot"], now=row["now"])
        count = 0
        if self.log_path.exists():
            with open(self.log_path, encoding="utf-8") as f:
                for line in f:
                    if not line.strip():
                        continue
                    if count >= upto:
                        self.dispatch(json.loads(line))
                    count += 1
        self._events = count

    def close(self) -> None:
        self.pool.shutdown(wait=True)
        if self._tmp is not None:
            self._tmp.cleanup()


# ----------------------------------------------------------------- app


def _ok(data, status: int = 200) -> JSONResponse:
    return JSONResponse({"ok": True, "data": data}, status_code=status)


def _error_status(exc: ProofkitError) -> int:
    if isinstance(exc, (UnknownSession, UnknownAssignment)):
        return 404
    if isinstance(exc, StaleRevision):
        return 409
    return 400


async def _body(request: Request) -> dict:
    try:
        data = await request.json()
    except Exception:
        raise FormatError("request body is not JSON") from None
    if not isinstance(data, dict):
        raise FormatError("request body must be a JSON object")
    return data


def _field(data: dict, name: str, kind: type) -> Any:
    if name not in data:
        raise FormatError(f"missing field {name!r}")
    value = data[name]
    if kind is float and isinstance(value, int) \
            and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise FormatError(f"field {name!r} must be {kind.__name__}")
    return value


def _notation(request: Request) -> str:
    notation = request.query_params.get("notation", "standard")
    if notation not in NOTATIONS:
        raise FormatError(f"unknown notation {notation!r}")
    return notation


def create_app(data_dir: str | Path | None = None,
               prover_budget: float | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    """Build the service; configuration falls back to the environment
    variables SECAV_DATA_DIR, SECAV_PROVER_BUDGET, and SECAV_UI_DIR.

    When `ui_dir` names a directory, its files are served at the root
    path (with index.html at /), so a browser front end runs same-origin
    with the API — no cross-origin setup needed.  API routes always win
    over static files.
    """
    if data_dir is None:
        data_dir = os.environ.get("SECAV_DATA_DIR") or None
    if prover_budget is None:
        raw = os.environ.get("SECAV_PROVER_BUDGET")
        prover_budget = float(raw) if raw else None
    if ui_dir is None:
        ui_dir = os.environ.get("SECAV_UI_DIR") or None

    store = ServiceStore(data_dir, prover_budget)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        store.close()

    app = FastAPI(
        title="secav-proofkit service",
        description="Proof sessions, checking, proving, and grading "
                    "over JSON.",
        version="1.0.0",
        lifespan=lifespan,
        openapi_url="/spec",
    )
    app.state.store = store

    @app.exception_handler(ProofkitError)
    async def proofkit_error(request: Request, exc: ProofkitError):
        return JSONResponse(
            {
                "ok": False,
                "error": {
                    "code": type(exc).__name__,
                    "message": str(exc),
                    "detail": None,
                },
            },
            status_code=_error_status(exc),
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            {
                "ok": False,
                "error": {
                    "code": "HttpError",
                    "message": str(exc.detail),
                    "detail": None,
                },
            },
            status_code=exc.status_code,
        )

    # -- sessions

    @app.post("/sessions")
    async def create_session(request: Request):
        data = await _body(request)
        sid = uuid.uuid4().hex
        if "file" in data:
            event = {"e": "import", "id": sid,
                     "file": _field(data, "file", str)}
        else:
            system = _field(data, "system", str)
            goal = _field(data, "goal", str)
            parse_formula(goal)
            event = {"e": "session", "id": sid, "system": system,
                     "goal": goal}
        store.commit(event)
        session = store.session(sid)
        session.refresh_warnings(submit=store.pool.submit)
        return _ok(session_to_json(session), status=201)

    @app.get("/sessions/{sid}")
    async def get_session(sid: str, request: Request):
        notation = _notation(request)
        with store.session_lock(sid):
            return _ok(session_to_json(store.session(sid), notation))

    @app.get("/sessions/{sid}/applicable")
    async def applicable(sid: str, request: Request):
        raw = request.query_params.get("goal", "0")
        try:
            index = int(raw)
        except ValueError:
            raise FormatError(f"goal must be an integer, got {raw!r}") \
                from None
        with store.session_lock(sid):
            templates = store.session(sid).applicable(index)
        return _ok({"goal": index,
                    "rules": [t.to_json() for t in templates]})

    @app.post("/sessions/{sid}/apply")
    async def apply_rule(sid: str, request: Request):
        data = await _body(request)
        with store.session_lock(sid):
            session = store.session(sid)
            revision = _field(data, "revision", int)
            if revision != session.revision:
                raise StaleRevision(
                    f"revision {revision} is stale, session is at "
                    f"{session.revision}")
            event = {
                "e": "apply",
                "id": sid,
                "goal": _field(data, "goal", int),
                "rule": _field(data, "rule", dict),
            }
            store.commit(event)
            session.refresh_warnings(submit=store.pool.submit)
            return _ok(session_to_json(session))

    @app.post("/sessions/{sid}/goto")
    async def goto(sid: str, request: Request):
        data = await _body(request)
        with store.session_lock(sid):
            session = store.session(sid)
            revision = _field(data, "revision", int)
            if revision != session.revision:
                raise StaleRevision(
                    f"revision {revision} is stale, session is at "
                    f"{session.revision}")
            event = {"e": "goto", "id": sid,
                     "index": _field(data, "index", int)}
            store.commit(event)
            session.refresh_warnings(submit=store.pool.submit)
            return _ok(session_to_json(session))

    @app.get("/sessions/{sid}/export")
    async def export(sid: str):
        with store.session_lock(sid):
            return _ok({"script": store.session(sid).export_script()})

    @app.get("/sessions/{sid}/warnings")
    async def warnings(sid: str):
        with store.session_lock(sid):
            session = store.session(sid)
            session.drain_assessments()
            return _ok({
                "revision": session.revision,
                "warnings": {
                    str(index): assessment_to_json(outcome)
                    for index, outcome in sorted(session.warnings.items())
                },
            })

    # -- stateless proof tools

    @app.post("/check")
    async def check(request: Request):
        data = await _body(request)
        script = _field(data, "script", str)
        fmt = data.get("format", "auto")
        if not isinstance(fmt, str):
            raise FormatError("field 'format' must be str")
        proof = parse_script(script, fmt)
        if isinstance(proof, WProof):
            if "axioms" not in data:
                raise FormatError(
                    "checking an axiomatic proof needs an 'axioms' field")
            axioms = load_axioms(_field(data, "axioms", str))
            report = check_w_proof(proof, axioms)
        elif isinstance(proof, ScProof):
            report = check_proof(proof)
        else:
            report = check_nd_proof(proof)
        return _ok(report.to_json())

    def _target_sequent(data: dict) -> tuple:
        if "sequent" in data:
            return parse_sequent(_field(data, "sequent", str))
        if "formula" in data:
            return (parse_formula(_field(data, "formula", str)),)
        raise FormatError("provide a 'formula' or a 'sequent'")

    def _budget(data: dict) -> SearchBudget:
        raw = data.get("budget")
        deadline = store.prover_budget or SearchBudget().deadline
        if raw is None:
            return SearchBudget(deadline=deadline)
        if not isinstance(raw, dict):
            raise FormatError("field 'budget' must be an object")
        default = SearchBudget()
        try:
            return SearchBudget(
                max_gamma=raw.get("max_gamma", default.max_gamma),
                max_expansions=raw.get("max_expansions",
                                       default.max_expansions),
                deadline=raw.get("deadline", deadline),
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(f"bad budget: {exc}") from None

    @app.post("/prove")
    async def prove(request: Request):
        data = await _body(request)
        target = _target_sequent(data)
        budget = _budget(data)
        outcome = store.pool.submit(tableau.prove, target, budget).result()
        return _ok(assessment_to_json(outcome, full=True))

    @app.post("/countermodel")
    async def countermodel(request: Request):
        data = await _body(request)
        formula = parse_formula(_field(data, "formula", str))
        max_size = data.get("max_size", 3)
        if not isinstance(max_size, int) or isinstance(max_size, bool) \
                or max_size < 1:
            raise FormatError("field 'max_size' must be a positive integer")
        budget = data.get("budget", 100_000)
        if not isinstance(budget, int) or isinstance(budget, bool) \
                or budget < 1:
            raise FormatError("field 'budget' must be a positive integer")
        result = store.pool.submit(
            countermodel_search, formula, max_size, budget).result()
        if isinstance(result, Countermodel):
            payload = {
                "verdict": "Countermodel",
                "model": model_to_json(result.model),
                "env": env_to_json(result.env),
            }
        elif isinstance(result, Exhausted):
            payload = {"verdict": "Exhausted", "max_size": max_size}
        else:
            payload = {"verdict": "BudgetExceeded"}
        return _ok(payload)

    # -- grading

    @app.post("/assignments")
    async def create_assignment(request: Request):
        data = await _body(request)
        system = _field(data, "system", str)
        goal = _field(data, "goal", str)
        parse_formula(goal)
        due = data.get("due")
        if due is not None and not isinstance(due, str):
            raise FormatError("field 'due' must be str")
        aid = uuid.uuid4().hex
        store.commit({"e": "assignment", "id": aid, "system": system,
                      "goal": goal, "due": due})
        assignment = store.grades.get(aid)
        return _ok({
            "id": assignment.id,
            "system": assignment.system,
            "goal": render_formula(assignment.goal),
            "due": assignment.due,
        }, status=201)

    @app.post("/assignments/{aid}/submit")
    async def submit(aid: str, request: Request):
        data = await _body(request)
        event = {
            "e": "submit",
            "aid": aid,
            "student": _field(data, "student", str),
            "snapshot": _field(data, "snapshot", str),
            "now": datetime.now(timezone.utc).isoformat(),
        }
        store.commit(event)
        rows = store.grades.progress(aid)
        mine = [r for r in rows if r.student_id == event["student"]]
        return _ok(submission_to_json(mine[-1]), status=201)

    @app.get("/assignments/{aid}/progress")
    async def progress(aid: str):
        rows = store.grades.progress(aid)
        return _ok({"assignment": aid,
                    "rows": [submission_to_json(r) for r in rows]})

    if ui_dir is not None:
        # mounted last, so every API route above takes precedence
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")

    return app


__all__ = [
    "ServiceStore",
    "StaleRevision",
    "UnknownSession",
    "assessment_to_json",
    "create_app",
    "env_to_json",
    "model_to_json",
    "session_to_json",
]
