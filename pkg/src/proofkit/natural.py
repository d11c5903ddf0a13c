"""Natural deduction over OK judgments: goal plus tracked assumptions.

Backward application again: each rule maps a judgment to the premise
judgments to prove.  Elimination rules carry the witness subformulas a
backward step cannot infer, which is exactly what an interactive caller has
to supply in the witness dialogs.  ``to_sequent`` images a judgment into the
sequent calculus by negating every assumption.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import FreshnessViolation, GoalMismatch, WitnessMismatch
from .notation import parse_formula, parse_term, render_formula, render_term
from .report import CheckReport, RuleTemplate, check_tree
from .syntax import (
    Con,
    Dis,
    Exi,
    FALSITY,
    Formula,
    Fun,
    Imp,
    Neg,
    Sequent,
    Term,
    Uni,
    fresh_constant,
    instantiate,
    member,
)


@dataclass(frozen=True, slots=True)
class NDJudgment:
    """OK goal assumptions: the goal is derivable from the assumption list."""

    goal: Formula
    assumptions: tuple[Formula, ...] = ()


# ------------------------------------------------------------- rules

@dataclass(frozen=True, slots=True)
class Assume:
    """Closes a goal that literally occurs among the assumptions."""


@dataclass(frozen=True, slots=True)
class Boole:
    """Classical proof by contradiction: derive Falsity from the negated goal."""


@dataclass(frozen=True, slots=True)
class ImpE:
    witness: Formula


@dataclass(frozen=True, slots=True)
class ImpI:
    pass


@dataclass(frozen=True, slots=True)
class DisE:
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class DisI1:
    pass


@dataclass(frozen=True, slots=True)
class DisI2:
    pass


@dataclass(frozen=True, slots=True)
class ConE1:
    other: Formula


@dataclass(frozen=True, slots=True)
class ConE2:
    other: Formula


@dataclass(frozen=True, slots=True)
class ConI:
    pass


@dataclass(frozen=True, slots=True)
class ExiE:
    body: Formula
    const: str


@dataclass(frozen=True, slots=True)
class ExiI:
    term: Term


@dataclass(frozen=True, slots=True)
class UniE:
    body: Formula
    term: Term


@dataclass(frozen=True, slots=True)
class UniI:
    const: str


NdRule = Union[
    Assume, Boole, ImpE, ImpI, DisE, DisI1, DisI2,
    ConE1, ConE2, ConI, ExiE, ExiI, UniE, UniI,
]

ND_RULE_NAMES: tuple[str, ...] = (
    "Assume", "Boole", "ImpE", "ImpI", "DisE", "DisI1", "DisI2",
    "ConE1", "ConE2", "ConI", "ExiE", "ExiI", "UniE", "UniI",
)


def rule_name(r: NdRule) -> str:
    return type(r).__name__


# ------------------------------------------------------------- application

def apply_nd_rule(j: NDJudgment, r: NdRule) -> tuple[NDJudgment, ...]:
    """Backward application: the returned judgments are the premises."""
    goal, z = j.goal, j.assumptions
    match r:
        case Assume():
            if member(goal, z):
                return ()
            raise GoalMismatch("Assume", "the goal is not among the assumptions")
        case Boole():
            return (NDJudgment(FALSITY, (Neg(goal),) + z),)
        case ImpE(witness):
            return (NDJudgment(Imp(witness, goal), z), NDJudgment(witness, z))
        case ImpI():
            match goal:
                case Imp(a, b):
                    return (NDJudgment(b, (a,) + z),)
            raise GoalMismatch("ImpI", "the goal is not an implication")
        case DisE(left, right):
            return (
                NDJudgment(Dis(left, right), z),
                NDJudgment(goal, (left,) + z),
                NDJudgment(goal, (right,) + z),
            )
        case DisI1():
            match goal:
                case Dis(a, _):
                    return (NDJudgment(a, z),)
            raise GoalMismatch("DisI1", "the goal is not a disjunction")
        case DisI2():
            match goal:
                case Dis(_, b):
                    return (NDJudgment(b, z),)
            raise GoalMismatch("DisI2", "the goal is not a disjunction")
        case ConE1(other):
            return (NDJudgment(Con(goal, other), z),)
        case ConE2(other):
            return (NDJudgment(Con(other, goal), z),)
        case ConI():
            match goal:
                case Con(a, b):
                    return (NDJudgment(a, z), NDJudgment(b, z))
            raise GoalMismatch("ConI", "the goal is not a conjunction")
        case ExiE(body, const):
            if not fresh_constant(const, (goal, body) + z):
                raise FreshnessViolation("ExiE", const)
            return (
                NDJudgment(Exi(body), z),
                NDJudgment(goal, (instantiate(body, Fun(const)),) + z),
            )
        case ExiI(term):
            match goal:
                case Exi(body):
                    return (NDJudgment(instantiate(body, term), z),)
            raise GoalMismatch("ExiI", "the goal is not an existential")
        case UniE(body, term):
            if goal != instantiate(body, term):
                raise WitnessMismatch(
                    "UniE", "the goal is not the stated instance of the universal"
                )
            return (NDJudgment(Uni(body), z),)
        case UniI(const):
            match goal:
                case Uni(body):
                    if not fresh_constant(const, (body,) + z):
                        raise FreshnessViolation("UniI", const)
                    return (NDJudgment(instantiate(body, Fun(const)), z),)
            raise GoalMismatch("UniI", "the goal is not a universal")
    raise TypeError(r)


def suggest_fresh_nd(j: NDJudgment, prefix: str = "sk") -> str:
    """The first ``sk<n>`` name occurring nowhere in the judgment."""
    n = 0
    pool = (j.goal,) + j.assumptions
    while not fresh_constant(f"{prefix}{n}", pool):
        n += 1
    return f"{prefix}{n}"


def applicable_nd_rules(j: NDJudgment) -> list[RuleTemplate]:
    """Every rule whose goal shape matches, in the fixed rule-table order."""
    templates: list[RuleTemplate] = []
    if member(j.goal, j.assumptions):
        templates.append(RuleTemplate("Assume"))
    templates.append(RuleTemplate("Boole"))
    templates.append(RuleTemplate("ImpE", needs=("formula",)))
    if isinstance(j.goal, Imp):
        templates.append(RuleTemplate("ImpI"))
    templates.append(RuleTemplate("DisE", needs=("formula", "formula")))
    if isinstance(j.goal, Dis):
        templates.append(RuleTemplate("DisI1"))
        templates.append(RuleTemplate("DisI2"))
    templates.append(RuleTemplate("ConE1", needs=("formula",)))
    templates.append(RuleTemplate("ConE2", needs=("formula",)))
    if isinstance(j.goal, Con):
        templates.append(RuleTemplate("ConI"))
    templates.append(
        RuleTemplate("ExiE", needs=("formula", "const"), suggestion=suggest_fresh_nd(j))
    )
    if isinstance(j.goal, Exi):
        templates.append(RuleTemplate("ExiI", needs=("term",)))
    templates.append(RuleTemplate("UniE", needs=("formula", "term")))
    if isinstance(j.goal, Uni):
        templates.append(
            RuleTemplate("UniI", needs=("const",), suggestion=suggest_fresh_nd(j))
        )
    return templates


# ------------------------------------------------------------- proof trees

@dataclass(frozen=True)
class NdProof:
    """Backward proof tree of judgments; ``rule None`` marks an open goal."""

    conclusion: NDJudgment
    rule: NdRule | None = None
    premises: tuple["NdProof", ...] = ()

    def open_goals(self) -> list[NDJudgment]:
        if self.rule is None:
            return [self.conclusion]
        acc: list[NDJudgment] = []
        for child in self.premises:
            acc.extend(child.open_goals())
        return acc


def check_nd_proof(pf: NdProof) -> CheckReport:
    """Validate every node of pf against apply_nd_rule."""
    return check_tree(pf, apply_nd_rule, rule_name)


def to_sequent(j: NDJudgment) -> Sequent:
    """The sequent image of a judgment: goal first, assumptions negated."""
    return (j.goal,) + tuple(Neg(a) for a in j.assumptions)


# ------------------------------------------------------------- JSON codecs

def rule_to_json(r: NdRule) -> dict:
    match r:
        case ImpE(witness):
            return {"rule": "ImpE", "with": [render_formula(witness, "abstract")]}
        case DisE(left, right):
            return {
                "rule": "DisE",
                "with": [
                    render_formula(left, "abstract"),
                    render_formula(right, "abstract"),
                ],
            }
        case ConE1(other) | ConE2(other):
            return {"rule": rule_name(r), "with": [render_formula(other, "abstract")]}
        case ExiE(body, const):
            return {
                "rule": "ExiE",
                "with": [render_formula(body, "abstract")],
                "const": const,
            }
        case ExiI(term):
            return {"rule": "ExiI", "term": render_term(term, "abstract")}
        case UniE(body, term):
            return {
                "rule": "UniE",
                "with": [render_formula(body, "abstract")],
                "term": render_term(term, "abstract"),
            }
        case UniI(const):
            return {"rule": "UniI", "const": const}
        case _:
            return {"rule": rule_name(r)}


def rule_from_json(data: dict) -> NdRule:
    name = str(data.get("rule", ""))
    plain = {
        "Assume": Assume, "Boole": Boole, "ImpI": ImpI, "DisI1": DisI1,
        "DisI2": DisI2, "ConI": ConI,
    }
    if name in plain:
        return plain[name]()
    formulas = [parse_formula(str(text)) for text in data.get("with", [])]
    match name:
        case "ImpE":
            return ImpE(formulas[0])
        case "DisE":
            return DisE(formulas[0], formulas[1])
        case "ConE1":
            return ConE1(formulas[0])
        case "ConE2":
            return ConE2(formulas[0])
        case "ExiE":
            return ExiE(formulas[0], str(data["const"]))
        case "ExiI":
            return ExiI(parse_term(str(data["term"])))
        case "UniE":
            return UniE(formulas[0], parse_term(str(data["term"])))
        case "UniI":
            return UniI(str(data["const"]))
    raise ValueError(f"unknown natural deduction rule {data.get('rule')!r}")
