"""Shared exception types for the proof toolkit."""
from __future__ import annotations


class ProofkitError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ProofkitError):
    """Raised on malformed formula, term, or proof-script text.

    Carries the byte offset of the failure and a description of what was
    expected there.
    """

    def __init__(self, message: str, position: int, expected: str | None = None):
        self.position = position
        self.expected = expected
        detail = f"{message} at offset {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class FormatError(ProofkitError):
    """Raised on a structurally broken proof script or session file."""


class RuleError(ProofkitError):
    """A proof rule was applied to a state it does not fit."""

    def __init__(self, rule: str, message: str):
        self.rule = rule
        super().__init__(f"{rule}: {message}")


class HeadMismatch(RuleError):
    """The head of the sequent does not have the shape the rule requires."""


class NotBasic(RuleError):
    """Basic was claimed but the negated head does not occur in the tail."""


class NotAnExtension(RuleError):
    """Ext target contains a formula absent from the source sequent."""


class FreshnessViolation(RuleError):
    """A delta rule or binder introduction reused a constant that occurs free."""

    def __init__(self, rule: str, constant: str):
        self.constant = constant
        super().__init__(rule, f"constant {constant!r} is not fresh")


class GoalMismatch(RuleError):
    """The judgment goal does not have the shape the rule requires."""


class WitnessMismatch(RuleError):
    """A stated witness does not reproduce the goal under instantiation."""


class MissingSymbol(ProofkitError):
    """A model lacks an interpretation for a symbol used in evaluation."""

    def __init__(self, name: str, arity: int, kind: str):
        self.name = name
        self.arity = arity
        self.kind = kind
        super().__init__(f"model has no {kind} {name!r}/{arity}")


class NotPropositional(ProofkitError):
    """Truth-table validity was asked of a formula outside the propositional
    fragment; the caller should use countermodel_search instead."""


class BadIndex(ProofkitError):
    """An index that names no open goal or no history entry."""


class UnknownAssignment(ProofkitError):
    """A submission or progress query for an assignment id never created."""
