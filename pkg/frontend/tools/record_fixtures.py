#!/usr/bin/env python3
"""Record UI test fixtures from the live proof service.

The browser client is contract-tested against real server responses, not
hand-written ones.  This script drives the service over HTTP exactly the
way the controller does — same endpoints, same bodies, same follow-up
reads — and freezes every exchange into JSON files under test/fixtures/.

Regenerate with:  python3 tools/record_fixtures.py
(needs the backend installed: pip install -e ..[test])
"""
from __future__ import annotations

import json
import sys
import time
from pathlib import Path

from fastapi.testclient import TestClient

from proofkit.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "test" / "fixtures"

NOTE = "generated by tools/record_fixtures.py against the live service; do not edit"


class Recorder:
    """A client wrapper that logs every exchange as the UI would make it."""

    def __init__(self, client: TestClient):
        self.client = client
        self.transcript: list[dict] = []

    def call(self, method: str, path: str, body=None, status=None):
        if method == "GET":
            response = self.client.get(path)
        else:
            response = self.client.post(path, json=body)
        payload = response.json()
        if status is not None and response.status_code != status:
            raise SystemExit(
                f"{method} {path} -> {response.status_code}, wanted {status}: "
                f"{payload}"
            )
        self.transcript.append({
            "method": method,
            "path": path,
            "body": body,
            "status": response.status_code,
            "payload": payload,
        })
        return payload


# ------------------------------------------------------------ applicable

SC_GOALS = [
    "p --> p",
    "p \\/ ~p",
    "(p /\\ q) --> (q /\\ p)",
    "~(p /\\ q) --> (~p \\/ ~q)",
    "(p --> q) --> ((q --> r) --> (p --> r))",
    "(forall x1. q(x1)) --> q(a)",
    "(forall x1. q(x1)) \\/ q(b)",
    "q(a) --> exists x1. q(x1)",
    "exists x1. (q(x1) --> forall x2. q(x2))",
    "False \\/ (p --> p)",
    "(forall x1. ~r(x1) --> r(f(x1))) --> exists x1. r(x1) /\\ r(f(f(x1)))",
]

ND_GOALS = [
    "p --> p",
    "p --> (q --> p)",
    "(p /\\ q) --> (q /\\ p)",
    "p --> ~~p",
    "(p \\/ q) --> (q \\/ p)",
]

TERM_POOL = ["a", "f(a)", "b"]


def pick_move(rules: list[dict]) -> dict | None:
    """A deterministic 'what would a student click' policy."""
    by_name = {r["rule"]: r for r in rules}
    if "Basic" in by_name:
        return {"rule": "Basic"}
    for r in rules:
        if not r["needs"] and r["rule"] not in ("Ext", "Extra", "NegNeg"):
            return {"rule": r["rule"]}
    for r in rules:
        if r["needs"] == ["term"]:
            return {"rule": r["rule"], "term": TERM_POOL[0]}
        if r["needs"] == ["const"]:
            return {"rule": r["rule"], "const": r.get("suggestion", "sk0")}
    return None


def record_applicable(client: TestClient, want: int = 50) -> list[dict]:
    fixtures: list[dict] = []

    def visit(system: str, goal: str, cap: int) -> None:
        taken = 0
        r = Recorder(client)
        session = r.call("POST", "/sessions",
                         {"system": system, "goal": goal}, status=201)["data"]
        sid = session["id"]
        for _ in range(6):  # a few states deep per goal
            if session["closed"] or taken >= cap:
                return
            for index in range(len(session["open_goals"])):
                if taken >= cap:
                    break
                answer = r.call(
                    "GET", f"/sessions/{sid}/applicable?goal={index}",
                    status=200)["data"]
                fixtures.append({
                    "label": f"{system} {goal!r} rev{session['revision']} "
                             f"goal {index}",
                    "system": system,
                    "open_goal": session["open_goals"][index],
                    "request": {"goal": index},
                    "response": answer,
                })
                taken += 1
            rules = r.call(
                "GET", f"/sessions/{sid}/applicable?goal=0",
                status=200)["data"]["rules"]
            move = pick_move(rules)
            if move is None:
                return
            session = r.call("POST", f"/sessions/{sid}/apply", {
                "revision": session["revision"], "goal": 0, "rule": move,
            }, status=200)["data"]

    for goal in SC_GOALS:
        visit("SC", goal, cap=4)
    for goal in ND_GOALS:
        visit("ND", goal, cap=4)
    if len(fixtures) < want:
        raise SystemExit(f"only {len(fixtures)} applicable fixtures recorded")
    kinds = {tuple(r["needs"])
             for f in fixtures for r in f["response"]["rules"]}
    for needed in ((), ("term",), ("const",), ("formula",), ("target",)):
        if needed not in kinds:
            raise SystemExit(f"no fixture offers a rule needing {needed}")
    systems = {f["system"] for f in fixtures}
    if systems != {"SC", "ND"}:
        raise SystemExit(f"fixture systems not diverse: {systems}")
    return fixtures[:want]


# ------------------------------------------------------------ history

def rotate_target(goal: dict) -> str:
    """An Ext target: the sequent rotated one formula to the left."""
    formulas = goal["formulas"]
    return ", ".join(formulas[1:] + formulas[:1])


class UiDriver:
    """Replays the controller's exact traffic pattern.

    After create and after every mutation the controller re-reads
    /applicable for the selected goal (always 0 here) unless the proof is
    closed.  Recording through this driver guarantees the test's mock
    transport sees the same stream the browser would produce.
    """

    def __init__(self, client: TestClient):
        self.r = Recorder(client)
        self.session: dict = {}
        self.applicable: dict | None = None
        self.ui_actions: list[dict] = []

    @property
    def sid(self) -> str:
        return self.session["id"]

    def refresh_applicable(self) -> None:
        if self.session["closed"]:
            self.applicable = None
            return
        self.applicable = self.r.call(
            "GET", f"/sessions/{self.sid}/applicable?goal=0", status=200
        )["data"]

    def create(self, system: str, goal: str) -> None:
        self.session = self.r.call(
            "POST", "/sessions", {"system": system, "goal": goal}, status=201
        )["data"]
        self.ui_actions.append({"ui": "create", "system": system,
                                "goal": goal})
        self.refresh_applicable()

    def apply(self, rule: dict, template: dict) -> None:
        self.session = self.r.call("POST", f"/sessions/{self.sid}/apply", {
            "revision": self.session["revision"], "goal": 0, "rule": rule,
        }, status=200)["data"]
        self.ui_actions.append({"ui": "rule", "template": template,
                                "values": rule_values(template, rule)})
        self.refresh_applicable()

    def goto(self, index: int) -> None:
        self.session = self.r.call("POST", f"/sessions/{self.sid}/goto", {
            "revision": self.session["revision"], "index": index,
        }, status=200)["data"]
        self.ui_actions.append({"ui": "goto", "index": index})
        self.refresh_applicable()


def rule_values(template: dict, rule: dict) -> list[str]:
    """The witness-form values that serialize back into `rule`."""
    values = []
    with_list = list(rule.get("with", []))
    for kind in template["needs"]:
        if kind == "formula":
            values.append(with_list.pop(0))
        elif kind == "term":
            values.append(rule["term"])
        elif kind == "const":
            values.append(rule["const"])
        elif kind == "target":
            values.append(rule["to"])
    return values


def next_move(driver: UiDriver) -> tuple[dict, dict]:
    rules = driver.applicable["rules"]
    move = pick_move(rules)
    if move is not None:
        template = next(r for r in rules if r["rule"] == move["rule"])
        return move, template
    template = next(r for r in rules if r["rule"] == "Ext")
    target = rotate_target(driver.session["open_goals"][0])
    return {"rule": "Ext", "to": target}, template


def record_history(client: TestClient) -> dict:
    driver = UiDriver(client)
    driver.create("SC", "(p --> q) --> ((q --> r) --> (p --> r))")

    # 20 actions with two deliberate jumps back: applying after a jump
    # forks the history tree, which is exactly what the panel must handle.
    plan = ["apply"] * 8 + ["goto:4"] + ["apply"] * 4 + ["goto:2"] \
        + ["apply"] * 6
    assert len(plan) == 20
    for step in plan:
        if step.startswith("goto:"):
            driver.goto(int(step.split(":")[1]))
        elif driver.session["closed"]:
            driver.goto(1)
        else:
            move, template = next_move(driver)
            driver.apply(move, template)

    entries = driver.session["entries"]
    if len(entries) < 10:
        raise SystemExit(f"history session too small: {len(entries)} entries")
    children: dict[int, int] = {}
    for entry in entries:
        if entry["parent"] is not None:
            children[entry["parent"]] = children.get(entry["parent"], 0) + 1
    forks = [parent for parent, n in children.items() if n > 1]
    if len(forks) < 2:
        raise SystemExit(f"history tree has too few forks: {forks}")
    entries = len(entries)

    sweep = []
    for index in range(entries):
        before = len(driver.r.transcript)
        driver.goto(index)
        sweep.append({
            "index": index,
            "exchanges": driver.r.transcript[before:],
        })
        driver.ui_actions.pop()  # sweep clicks are scripted by the test

    return {
        "note": NOTE,
        "goal": "(p --> q) --> ((q --> r) --> (p --> r))",
        "entryCount": entries,
        "uiActions": driver.ui_actions,
        "transcript": driver.r.transcript,
        "sweep": sweep,
    }


# ------------------------------------------------------------ falsity badge

def record_falsity(client: TestClient) -> dict:
    r = Recorder(client)
    started = time.perf_counter()
    session = r.call("POST", "/sessions",
                     {"system": "SC", "goal": "False"}, status=201)["data"]
    sid = session["id"]
    applicable = r.call("GET", f"/sessions/{sid}/applicable?goal=0",
                        status=200)["data"]
    empty_poll = None
    flagged_poll = None
    for _ in range(100):
        payload = r.call("GET", f"/sessions/{sid}/warnings",
                         status=200)["data"]
        if payload["warnings"].get("0", {}).get("verdict") \
                == "LikelyUnprovable":
            flagged_poll = payload
            break
        if empty_poll is None:
            empty_poll = payload
        time.sleep(0.05)
    elapsed_ms = (time.perf_counter() - started) * 1000
    if flagged_poll is None:
        raise SystemExit("falsity goal was never flagged")
    if elapsed_ms > 1000:
        raise SystemExit(f"falsity flag took {elapsed_ms:.0f}ms (>1s)")
    if empty_poll is None:
        empty_poll = {"revision": session["revision"], "warnings": {}}
    return {
        "note": NOTE,
        "serverElapsedMs": round(elapsed_ms, 1),
        "create": session,
        "applicable": applicable,
        "emptyPoll": empty_poll,
        "flaggedPoll": flagged_poll,
    }


# ------------------------------------------------------------ notation

def record_notation(client: TestClient) -> dict:
    """Standard and abstract renderings of one session, before and after an
    apply.  The toggle test asserts the view shows these strings verbatim —
    the client never re-prints a formula on its own."""
    r = Recorder(client)
    session = r.call("POST", "/sessions",
                     {"system": "SC", "goal": "p --> (q --> p)"},
                     status=201)["data"]
    sid = session["id"]
    applicable_root = r.call(
        "GET", f"/sessions/{sid}/applicable?goal=0", status=200)["data"]
    abstract_root = r.call(
        "GET", f"/sessions/{sid}?notation=abstract", status=200)["data"]
    applied = r.call("POST", f"/sessions/{sid}/apply", {
        "revision": session["revision"], "goal": 0,
        "rule": {"rule": "AlphaImp"},
    }, status=200)["data"]
    abstract_applied = r.call(
        "GET", f"/sessions/{sid}?notation=abstract", status=200)["data"]
    applicable_after = r.call(
        "GET", f"/sessions/{sid}/applicable?goal=0", status=200)["data"]
    if abstract_root["goal"] == session["goal"]:
        raise SystemExit("abstract notation did not change the rendering")
    return {
        "note": NOTE,
        "create": session,
        "applicableRoot": applicable_root,
        "abstractRoot": abstract_root,
        "applyResponse": applied,
        "abstractAfterApply": abstract_applied,
        "applicableAfter": applicable_after,
    }


# ------------------------------------------------------------ import

def record_import(client: TestClient) -> dict:
    """Save a session's file, then load it back through POST /sessions.
    The load test replays this to check a saved file round-trips."""
    r = Recorder(client)
    session = r.call("POST", "/sessions",
                     {"system": "SC", "goal": "p --> p"}, status=201)["data"]
    sid = session["id"]
    session = r.call("POST", f"/sessions/{sid}/apply", {
        "revision": 0, "goal": 0, "rule": {"rule": "AlphaImp"},
    }, status=200)["data"]
    imported = r.call("POST", "/sessions", {"file": session["file"]},
                      status=201)["data"]
    if imported["id"] == sid:
        raise SystemExit("import should mint a fresh session id")
    if imported["entries"] != session["entries"]:
        raise SystemExit("import should preserve the entry tree")
    applicable = r.call(
        "GET", f"/sessions/{imported['id']}/applicable?goal=0",
        status=200)["data"]
    return {
        "note": NOTE,
        "savedFile": session["file"],
        "saved": session,
        "imported": imported,
        "applicable": applicable,
    }


# ------------------------------------------------------------ errors

def record_errors(client: TestClient) -> dict:
    out: dict = {"note": NOTE}

    # Stale revision: two tabs, the second applies against an old revision.
    r = Recorder(client)
    session = r.call("POST", "/sessions",
                     {"system": "SC", "goal": "p --> p"}, status=201)["data"]
    sid = session["id"]
    root_rules = r.call(
        "GET", f"/sessions/{sid}/applicable?goal=0", status=200)["data"]
    fresh = r.call("POST", f"/sessions/{sid}/apply", {
        "revision": 0, "goal": 0, "rule": {"rule": "AlphaImp"},
    }, status=200)["data"]
    stale = r.call("POST", f"/sessions/{sid}/apply", {
        "revision": 0, "goal": 0, "rule": {"rule": "AlphaImp"},
    }, status=409)
    refreshed = r.call("GET", f"/sessions/{sid}", status=200)["data"]
    refreshed_rules = r.call(
        "GET", f"/sessions/{sid}/applicable?goal=0", status=200)["data"]
    export = r.call("GET", f"/sessions/{sid}/export", status=200)["data"]
    out["stale"] = {
        "create": session,
        "rootApplicable": root_rules,
        "afterFirstApply": fresh,
        "staleEnvelope": stale,
        "refreshed": refreshed,
        "refreshedApplicable": refreshed_rules,
        "export": export,
    }

    # A server-side witness rejection: the constant is not fresh.
    r = Recorder(client)
    session = r.call("POST", "/sessions", {
        "system": "SC", "goal": "(forall x1. q(x1)) \\/ q(a)",
    }, status=201)["data"]
    sid = session["id"]
    r.call("GET", f"/sessions/{sid}/applicable?goal=0", status=200)
    after_dis = r.call("POST", f"/sessions/{sid}/apply", {
        "revision": session["revision"], "goal": 0,
        "rule": {"rule": "AlphaDis"},
    }, status=200)["data"]
    templates = r.call("GET", f"/sessions/{sid}/applicable?goal=0",
                       status=200)["data"]
    delta = next(t for t in templates["rules"] if t["needs"] == ["const"])
    rejected = r.call("POST", f"/sessions/{sid}/apply", {
        "revision": after_dis["revision"], "goal": 0,
        "rule": {"rule": delta["rule"], "const": "a"},
    }, status=400)
    out["freshness"] = {
        "afterAlphaDis": after_dis,
        "applicable": templates,
        "template": delta,
        "badConst": "a",
        "rejectedEnvelope": rejected,
    }

    # Unknown session id.
    r = Recorder(client)
    missing = r.call("GET", "/sessions/doesnotexist", status=404)
    out["unknownSession"] = missing
    return out


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with TestClient(create_app()) as client:
        files = {
            "applicable.json": {
                "note": NOTE,
                "fixtures": record_applicable(client),
            },
            "history.json": record_history(client),
            "falsity.json": record_falsity(client),
            "notation.json": record_notation(client),
            "import.json": record_import(client),
            "errors.json": record_errors(client),
        }
    for name, data in files.items():
        path = FIXTURES / name
        path.write_text(json.dumps(data, indent=1) + "\n")
        print(f"wrote {path} ({path.stat().st_size:,} bytes)", file=sys.stderr)


if __name__ == "__main__":
    main()
