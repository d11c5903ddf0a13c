"""Interactive proof sessions for both calculi.

A session wraps a partial proof tree and records every state it has ever
been in.  History is a tree exposed as an indexed list: applying a rule
after an undo forks rather than truncating, so any previous state stays
reachable through :meth:`Session.goto`.  Sessions serialize to a versioned
JSON envelope that replays the action history on load and verifies a
content hash per entry.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import uuid
from collections import deque
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterator, Union

from . import natural, sequent
from .errors import BadIndex, FormatError, ParseError, UnknownAssignment
from .natural import NDJudgment, NdProof, check_nd_proof, to_sequent
from .notation import parse_formula, render_formula
from .report import CheckReport
from .scripts import render_script
from .sequent import ScProof
from .syntax import Formula, Sequent
from .tableau import Assessment, assess_subgoal

Proof = Union[ScProof, NdProof]
NdRule = natural.NdRule
ScRule = sequent.ScRule

SYSTEMS = ("SC", "ND")


@dataclass(frozen=True)
class Action:
    """One applied rule: which open goal it hit and the rule itself."""

    goal: int
    rule: ScRule | NdRule


@dataclass(frozen=True)
class HistoryEntry:
    """A state the session has been in; ``parent`` links the history tree."""

    parent: int | None
    action: Action | None
    proof: Proof


def _expand(node: Proof, rule) -> Proof:
    """Kernel-validate one rule on one open node and attach the premises."""
    if isinstance(node, ScProof):
        premises = sequent.apply_rule(node.conclusion, rule)
        return ScProof(node.conclusion, rule, tuple(ScProof(p) for p in premises))
    premises = natural.apply_nd_rule(node.conclusion, rule)
    return NdProof(node.conclusion, rule, tuple(NdProof(j) for j in premises))


def _open_paths(node: Proof, prefix: tuple[int, ...] = ()) -> Iterator[tuple]:
    """Depth-first, leftmost-premise-first paths to the open nodes."""
    if node.rule is None:
        yield prefix, node
    else:
        for k, child in enumerate(node.premises):
            yield from _open_paths(child, prefix + (k,))


def _rebuild(node: Proof, path: tuple[int, ...], replacement: Proof) -> Proof:
    if not path:
        return replacement
    kids = list(node.premises)
    kids[path[0]] = _rebuild(kids[path[0]], path[1:], replacement)
    return dataclasses.replace(node, premises=tuple(kids))


def _state_hash(proof: Proof) -> str:
    return hashlib.sha256(render_script(proof).encode()).hexdigest()[:16]


class Session:
    """One proof under construction, with its full forked history."""

    def __init__(self, system: str, goal: Formula | str, sid: str | None = None):
        if system not in SYSTEMS:
            raise FormatError(f"unknown proof system {system!r}")
        if isinstance(goal, str):
            goal = parse_formula(goal)
        root: Proof
        if system == "SC":
            root = ScProof((goal,))
        else:
            root = NdProof(NDJudgment(goal, ()))
        self.id = sid or uuid.uuid4().hex
        self.system = system
        self.goal = goal
        self.entries: list[HistoryEntry] = [HistoryEntry(None, None, root)]
        self.cursor = 0
        self.revision = 0
        self.warnings: dict[int, Assessment] = {}
        self._redo: list[int] = []
        self._mailbox: deque = deque()

    # ------------------------------------------------------------ reading

    @property
    def proof(self) -> Proof:
        return self.entries[self.cursor].proof

    def open_goals(self) -> list:
        return self.proof.open_goals()

    def report(self) -> CheckReport:
        if isinstance(self.proof, ScProof):
            return sequent.check_proof(self.proof)
        return check_nd_proof(self.proof)

    def applicable(self, goal_index: int) -> list:
        """Rule templates for one open goal; [] everywhere once closed."""
        goals = self.open_goals()
        if not goals:
            return []
        if not 0 <= goal_index < len(goals):
            raise BadIndex(f"no open goal {goal_index}")
        goal = goals[goal_index]
        if isinstance(self.proof, ScProof):
            return sequent.applicable_rules(goal)
        return natural.applicable_nd_rules(goal)

    def export_script(self) -> str:
        return render_script(self.proof)

    # ----------------------------------------------------------- mutation

    def apply(self, goal_index: int, rule) -> None:
        """Apply one fully instantiated rule to the chosen open goal.

        The kernel validates first, so a rejected rule leaves the session
        untouched.  Success appends a forked history entry.
        """
        paths = list(_open_paths(self.proof))
        if not 0 <= goal_index < len(paths):
            raise BadIndex(f"no open goal {goal_index}")
        path, node = paths[goal_index]
        replacement = _expand(node, rule)
        tree = _rebuild(self.proof, path, replacement)
        self.entries.append(
            HistoryEntry(self.cursor, Action(goal_index, rule), tree))
        self.cursor = len(self.entries) - 1
        self._redo.clear()
        self._bump()

    def undo(self) -> None:
        parent = self.entries[self.cursor].parent
        if parent is None:
            raise BadIndex("already at the initial state")
        self._redo.append(self.cursor)
        self.cursor = parent
        self._bump()

    def redo(self) -> None:
        while self._redo:
            target = self._redo.pop()
            if self.entries[target].parent == self.cursor:
                self.cursor = target
                self._bump()
                return
        raise BadIndex("nothing to redo")

    def goto(self, history_index: int) -> None:
        if not 0 <= history_index < len(self.entries):
            raise BadIndex(f"no history entry {history_index}")
        self._redo.clear()
        self.cursor = history_index
        self._bump()

    def _bump(self) -> None:
        self.revision += 1
        self.warnings.clear()

    # -------------------------------------------------------- assessment

    def _subgoal_sequent(self, goal) -> Sequent:
        return goal if self.system == "SC" else to_sequent(goal)

    def refresh_warnings(self, submit: Callable | None = None) -> None:
        """Assess every open goal of the current state.

        With ``submit`` (an executor-style callable taking a zero-argument
        function) the work runs in the background and results arrive
        through :meth:`drain_assessments`; without it the assessments run
        synchronously.  A result computed for a state the session has
        since left is discarded on delivery.
        """
        revision = self.revision
        goals = self.open_goals()
        if submit is None:
            for index, goal in enumerate(goals):
                self.warnings[index] = assess_subgoal(self._subgoal_sequent(goal))
            return
        for index, goal in enumerate(goals):
            target = self._subgoal_sequent(goal)

            def job(index=index, target=target):
                outcome = assess_subgoal(target)
                self._mailbox.append((revision, index, outcome))

            submit(job)

    def drain_assessments(self) -> int:
        """Move finished background assessments into ``warnings``.

        Returns how many results were fresh enough to keep.
        """
        kept = 0
        while self._mailbox:
            revision, index, outcome = self._mailbox.popleft()
            if revision != self.revision:
                continue
            if index >= len(self.open_goals()):
                continue
            self.warnings[index] = outcome
            kept += 1
        return kept

    # ------------------------------------------------------- persistence

    def save(self) -> str:
        rule_to_json = (sequent.rule_to_json if self.system == "SC"
                        else natural.rule_to_json)
        entries = []
        for entry in self.entries:
            action = None
            if entry.action is not None:
                action = {
                    "goal": entry.action.goal,
                    "rule": rule_to_json(entry.action.rule),
                }
            entries.append({
                "parent": entry.parent,
                "action": action,
                "hash": _state_hash(entry.proof),
            })
        return json.dumps({
            "version": 1,
            "system": self.system,
            "goal": render_formula(self.goal),
            "entries": entries,
            "cursor": self.cursor,
        }, indent=2) + "\n"


def load(text: str, expect_system: str | None = None,
         sid: str | None = None) -> Session:
    """Rebuild a session by replaying its saved history.

    Every entry is re-validated through the kernel and its state hash is
    compared, so a tampered or corrupted file cannot load.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not a session file: {exc}") from None
    if not isinstance(data, dict):
        raise FormatError("not a session file: expected an object")
    if "version" not in data:
        raise FormatError("session file has no version field")
    if data["version"] != 1:
        raise FormatError(f"unsupported session version {data['version']!r}")
    system = data.get("system")
    if system not in SYSTEMS:
        raise FormatError(f"unknown proof system {system!r}")
    if expect_system is not None and system != expect_system:
        raise FormatError(
            f"expected a {expect_system} session, found {system}")

    goal = data.get("goal")
    if not isinstance(goal, str):
        raise FormatError("session file has no goal formula")
    try:
        session = Session(system, goal, sid=sid)
    except ParseError as exc:
        raise FormatError(f"bad goal formula: {exc}") from None
    rule_from_json = (sequent.rule_from_json if system == "SC"
                      else natural.rule_from_json)
    entries = data.get("entries")
    if not isinstance(entries, list) or not entries:
        raise FormatError("session file has no history entries")

    for number, raw in enumerate(entries):
        if not isinstance(raw, dict):
            raise FormatError(f"entry {number}: expected an object")
        if number == 0:
            if raw.get("parent") is not None or raw.get("action") is not None:
                raise FormatError("entry 0 must be the initial state")
            proof = session.entries[0].proof
        else:
            parent = raw.get("parent")
            if not isinstance(parent, int) or not 0 <= parent < number:
                raise FormatError(f"entry {number}: bad parent {parent!r}")
            action = raw.get("action")
            if not isinstance(action, dict):
                raise FormatError(f"entry {number}: missing action")
            try:
                rule = rule_from_json(action.get("rule", {}))
            except (ValueError, KeyError, TypeError) as exc:
                raise FormatError(f"entry {number}: {exc}") from None
            goal_index = action.get("goal")
            base = session.entries[parent].proof
            paths = list(_open_paths(base))
            if not isinstance(goal_index, int) \
                    or not 0 <= goal_index < len(paths):
                raise FormatError(
                    f"entry {number}: no open goal {goal_index!r}")
            path, node = paths[goal_index]
            try:
                proof = _rebuild(base, path, _expand(node, rule))
            except Exception as exc:
                raise FormatError(f"entry {number}: {exc}") from None
            session.entries.append(
                HistoryEntry(parent, Action(goal_index, rule), proof))
        if raw.get("hash") != _state_hash(proof):
            raise FormatError(f"entry {number}: state hash mismatch")

    cursor = data.get("cursor")
    if not isinstance(cursor, int) or not 0 <= cursor < len(session.entries):
        raise FormatError(f"bad cursor {cursor!r}")
    session.cursor = cursor
    return session


def new_session(system: str, goal: Formula | str) -> Session:
    return Session(system, goal)


# --------------------------------------------------------------- grading

@dataclass(frozen=True)
class Assignment:
    id: str
    system: str
    goal: Formula
    due: str | None = None


@dataclass(frozen=True)
class Submission:
    assignment_id: str
    student_id: str
    snapshot: str
    steps: int
    open_goals: int
    timestamp: str


class AssignmentStore:
    """Assignments and submissions, with metrics recomputed server-side."""

    def __init__(self):
        self._assignments: dict[str, Assignment] = {}
        self._submissions: list[Submission] = []

    def create(self, system: str, goal: Formula | str,
               due: str | None = None, aid: str | None = None) -> Assignment:
        if system not in SYSTEMS:
            raise FormatError(f"unknown proof system {system!r}")
        if isinstance(goal, str):
            goal = parse_formula(goal)
        assignment = Assignment(aid or uuid.uuid4().hex, system, goal, due)
        self._assignments[assignment.id] = assignment
        return assignment

    def get(self, assignment_id: str) -> Assignment:
        try:
            return self._assignments[assignment_id]
        except KeyError:
            raise UnknownAssignment(assignment_id) from None

    def assignments(self) -> list[Assignment]:
        return list(self._assignments.values())

    def submissions(self) -> list[Submission]:
        return list(self._submissions)

    def submit(self, assignment_id: str, student_id: str, snapshot: str,
               now: str | None = None) -> Submission:
        """Record a submission; steps and open goals come from replaying
        the snapshot, never from the client."""
        assignment = self.get(assignment_id)
        session = load(snapshot, expect_system=assignment.system)
        if session.goal != assignment.goal:
            raise FormatError("snapshot does not address the assignment goal")
        report = session.report()
        submission = Submission(
            assignment_id=assignment_id,
            student_id=student_id,
            snapshot=snapshot,
            steps=report.steps,
            open_goals=len(session.open_goals()),
            timestamp=now or datetime.now(timezone.utc).isoformat(),
        )
        self._submissions.append(submission)
        return submission

    def progress(self, assignment_id: str) -> list[Submission]:
        """All submissions for one assignment, sorted by student then time."""
        self.get(assignment_id)
        rows = [s for s in self._submissions
                if s.assignment_id == assignment_id]
        return sorted(rows, key=lambda s: (s.student_id, s.timestamp))


__all__ = [
    "Action",
    "Assignment",
    "AssignmentStore",
    "HistoryEntry",
    "Session",
    "Submission",
    "load",
    "new_session",
]
