"""Check reports and rule templates shared by all proof checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

from .errors import ProofkitError


@dataclass(frozen=True)
class CheckReport:
    """Outcome of checking one proof object.

    ``verdict`` is "Complete", "Incomplete", or "Invalid".  ``steps`` counts
    rule nodes over the whole tree and ``rules_used`` is their multiset.  For
    an Invalid verdict, ``error_path`` locates the first failing node in
    depth-first pre-order as a tuple of premise indices from the root, and
    ``error_code``/``error_message`` describe the failure.
    """

    verdict: str
    steps: int
    rules_used: dict[str, int] = field(default_factory=dict)
    open_goals: int = 0
    error_path: tuple[int, ...] | None = None
    error_code: str | None = None
    error_message: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "Complete"

    def to_json(self) -> dict:
        data: dict = {
            "verdict": self.verdict,
            "steps": self.steps,
            "rules_used": dict(sorted(self.rules_used.items())),
            "open_goals": self.open_goals,
        }
        if self.verdict == "Invalid":
            data["error"] = {
                "code": self.error_code,
                "message": self.error_message,
                "path": list(self.error_path or ()),
            }
        return data


@dataclass(frozen=True)
class RuleTemplate:
    """An applicable rule, with the parameters a caller still has to supply.

    ``needs`` lists the missing parameter kinds in order ("term", "const",
    "formula", "target"); an empty tuple means the rule can be applied as is.
    ``suggestion`` optionally carries a concrete fresh constant for rules that
    need one.
    """

    rule: str
    needs: tuple[str, ...] = ()
    suggestion: str | None = None

    def to_json(self) -> dict:
        data: dict = {"rule": self.rule, "needs": list(self.needs)}
        if self.suggestion is not None:
            data["suggestion"] = self.suggestion
        return data


class ProofNode(Protocol):
    conclusion: object
    rule: object | None
    premises: Sequence["ProofNode"]


def check_tree(
    root: ProofNode,
    apply_rule: Callable,
    rule_name: Callable,
    rejected: Callable[[object], str | None] = lambda rule: None,
) -> CheckReport:
    """Walk a proof tree and produce its CheckReport.

    A node with ``rule None`` is an open goal.  Otherwise the node's stated
    premises must equal ``apply_rule(conclusion, rule)`` exactly, in order.
    The first failure in depth-first pre-order wins; ``rejected`` may veto a
    rule up front (used for primitive-only checking) by returning a message.
    """
    steps = 0
    rules_used: dict[str, int] = {}
    open_goals = 0
    failure: tuple[tuple[int, ...], str, str] | None = None

    def walk(node: ProofNode, path: tuple[int, ...]) -> None:
        nonlocal steps, open_goals, failure
        if node.rule is None:
            open_goals += 1
            return
        name = rule_name(node.rule)
        steps += 1
        rules_used[name] = rules_used.get(name, 0) + 1
        if failure is None:
            veto = rejected(node.rule)
            if veto is not None:
                failure = (path, "NonPrimitiveRule", f"{name}: {veto}")
            else:
                try:
                    expected = apply_rule(node.conclusion, node.rule)
                except ProofkitError as err:
                    failure = (path, type(err).__name__, str(err))
                else:
                    stated = tuple(child.conclusion for child in node.premises)
                    if stated != tuple(expected):
                        failure = (
                            path,
                            "PremiseMismatch",
                            f"{name}: stated premises do not match the rule",
                        )
        for i, child in enumerate(node.premises):
            walk(child, path + (i,))

    walk(root, ())
    if failure is not None:
        path, code, message = failure
        return CheckReport(
            verdict="Invalid",
            steps=steps,
            rules_used=rules_used,
            open_goals=open_goals,
            error_path=path,
            error_code=code,
            error_message=message,
        )
    if open_goals:
        return CheckReport(
            verdict="Incomplete",
            steps=steps,
            rules_used=rules_used,
            open_goals=open_goals,
        )
    return CheckReport(verdict="Complete", steps=steps, rules_used=rules_used)
