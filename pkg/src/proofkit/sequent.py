"""One-sided sequent calculus: trusted backward rule application and checking.

A sequent is a formula list read disjunctively; every rule except Ext works
on the head.  ``apply_rule`` maps a goal sequent to the premise sequents a
backward proof must establish, raising a RuleError when the rule does not
fit.  ``check_proof`` validates whole proof trees node by node; nothing else
in the package can certify a proof.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import (
    FreshnessViolation,
    HeadMismatch,
    NotAnExtension,
    NotBasic,
)
from .notation import parse_sequent, parse_term, render_sequent, render_term
from .report import CheckReport, RuleTemplate, check_tree
from .syntax import (
    Con,
    Dis,
    Exi,
    FALSITY,
    Fun,
    Imp,
    Neg,
    Sequent,
    Term,
    Uni,
    ext,
    fresh_constant,
    instantiate,
    is_neg,
    member,
    neg_body,
)


# ------------------------------------------------------------- rules

@dataclass(frozen=True, slots=True)
class Basic:
    """Closes a branch whose head occurs negated in the tail."""


@dataclass(frozen=True, slots=True)
class AlphaDis:
    pass


@dataclass(frozen=True, slots=True)
class AlphaImp:
    pass


@dataclass(frozen=True, slots=True)
class AlphaCon:
    pass


@dataclass(frozen=True, slots=True)
class BetaCon:
    pass


@dataclass(frozen=True, slots=True)
class BetaImp:
    pass


@dataclass(frozen=True, slots=True)
class BetaDis:
    pass


@dataclass(frozen=True, slots=True)
class GammaExi:
    term: Term


@dataclass(frozen=True, slots=True)
class GammaUni:
    term: Term


@dataclass(frozen=True, slots=True)
class DeltaUni:
    const: str


@dataclass(frozen=True, slots=True)
class DeltaExi:
    const: str


@dataclass(frozen=True, slots=True)
class Extra:
    """Drops a head that already occurs in the tail."""


@dataclass(frozen=True, slots=True)
class Ext:
    """Rewrites the sequent to ``target``; sound whenever the conclusion
    extends the target as a formula set (rearrange, contract, add)."""

    target: Sequent


@dataclass(frozen=True, slots=True)
class NegNeg:
    """Derived double-negation rule; see expand_negneg for its expansion."""


ScRule = Union[
    Basic, AlphaDis, AlphaImp, AlphaCon, BetaCon, BetaImp, BetaDis,
    GammaExi, GammaUni, DeltaUni, DeltaExi, Extra, Ext, NegNeg,
]

SC_RULE_NAMES: tuple[str, ...] = (
    "Basic", "AlphaDis", "AlphaImp", "AlphaCon", "BetaCon", "BetaImp",
    "BetaDis", "GammaExi", "GammaUni", "DeltaUni", "DeltaExi", "Extra",
    "Ext", "NegNeg",
)

# Short synonyms acceptable wherever a rule name is read.
SC_RULE_SYNONYMS: dict[str, str] = {
    "AlDis": "AlphaDis",
    "AlImp": "AlphaImp",
    "AlCon": "AlphaCon",
    "BeCon": "BetaCon",
    "BeImp": "BetaImp",
    "BeDis": "BetaDis",
    "GaExi": "GammaExi",
    "GaUni": "GammaUni",
    "DeUni": "DeltaUni",
    "DeExi": "DeltaExi",
}


def rule_name(r: ScRule) -> str:
    return type(r).__name__


def canonical_rule_name(name: str) -> str:
    """Resolve a script rule name, accepting the short synonyms."""
    return SC_RULE_SYNONYMS.get(name, name)


# ------------------------------------------------------------- application

def apply_rule(s: Sequent, r: ScRule) -> tuple[Sequent, ...]:
    """Backward application: the returned sequents are the premises to prove."""
    if isinstance(r, Ext):
        if not ext(s, r.target):
            raise NotAnExtension(
                "Ext", "target contains a formula absent from the sequent"
            )
        return (tuple(r.target),)
    if not s:
        raise HeadMismatch(rule_name(r), "the sequent is empty")
    head, z = s[0], s[1:]
    match r:
        case Basic():
            if member(Neg(head), z):
                return ()
            raise NotBasic("Basic", "the head does not occur negated in the tail")
        case AlphaDis():
            match head:
                case Dis(a, b):
                    return ((a, b) + z,)
            raise HeadMismatch("AlphaDis", "head is not a disjunction")
        case AlphaImp():
            match head:
                case Imp(a, b):
                    return ((Neg(a), b) + z,)
            raise HeadMismatch("AlphaImp", "head is not an implication")
        case AlphaCon():
            if is_neg(head):
                match neg_body(head):
                    case Con(a, b):
                        return ((Neg(a), Neg(b)) + z,)
            raise HeadMismatch("AlphaCon", "head is not a negated conjunction")
        case BetaCon():
            match head:
                case Con(a, b):
                    return ((a,) + z, (b,) + z)
            raise HeadMismatch("BetaCon", "head is not a conjunction")
        case BetaImp():
            if is_neg(head):
                match neg_body(head):
                    case Imp(a, b):
                        return ((a,) + z, (Neg(b),) + z)
            raise HeadMismatch("BetaImp", "head is not a negated implication")
        case BetaDis():
            if is_neg(head):
                match neg_body(head):
                    case Dis(a, b):
                        return ((Neg(a),) + z, (Neg(b),) + z)
            raise HeadMismatch("BetaDis", "head is not a negated disjunction")
        case GammaExi(term):
            match head:
                case Exi(body):
                    return ((instantiate(body, term),) + z,)
            raise HeadMismatch("GammaExi", "head is not an existential")
        case GammaUni(term):
            if is_neg(head):
                match neg_body(head):
                    case Uni(body):
                        return ((Neg(instantiate(body, term)),) + z,)
            raise HeadMismatch("GammaUni", "head is not a negated universal")
        case DeltaUni(const):
            match head:
                case Uni(body):
                    if not fresh_constant(const, s):
                        raise FreshnessViolation("DeltaUni", const)
                    return ((instantiate(body, Fun(const)),) + z,)
            raise HeadMismatch("DeltaUni", "head is not a universal")
        case DeltaExi(const):
            if is_neg(head):
                match neg_body(head):
                    case Exi(body):
                        if not fresh_constant(const, s):
                            raise FreshnessViolation("DeltaExi", const)
                        return ((Neg(instantiate(body, Fun(const))),) + z,)
            raise HeadMismatch("DeltaExi", "head is not a negated existential")
        case Extra():
            if member(head, z):
                return (z,)
            raise HeadMismatch("Extra", "the head does not repeat in the tail")
        case NegNeg():
            if is_neg(head) and is_neg(neg_body(head)):
                return ((neg_body(neg_body(head)),) + z,)
            raise HeadMismatch("NegNeg", "head is not a double negation")
    raise TypeError(r)


def suggest_fresh(s: Sequent, prefix: str = "sk") -> str:
    """The first ``sk<n>`` name not occurring in s as a function symbol."""
    n = 0
    while not fresh_constant(f"{prefix}{n}", s):
        n += 1
    return f"{prefix}{n}"


def applicable_rules(s: Sequent) -> list[RuleTemplate]:
    """Every rule that can fire on s, in the fixed rule-table order.

    Witness-taking rules come back as templates with their parameter kinds in
    ``needs``; delta templates carry one concrete fresh-constant suggestion.
    Ext is always applicable.
    """
    templates: list[RuleTemplate] = []
    if s:
        head, z = s[0], s[1:]
        body = neg_body(head) if is_neg(head) else None
        if member(Neg(head), z):
            templates.append(RuleTemplate("Basic"))
        if isinstance(head, Dis):
            templates.append(RuleTemplate("AlphaDis"))
        if isinstance(head, Imp):
            templates.append(RuleTemplate("AlphaImp"))
        if isinstance(body, Con):
            templates.append(RuleTemplate("AlphaCon"))
        if isinstance(head, Con):
            templates.append(RuleTemplate("BetaCon"))
        if isinstance(body, Imp):
            templates.append(RuleTemplate("BetaImp"))
        if isinstance(body, Dis):
            templates.append(RuleTemplate("BetaDis"))
        if isinstance(head, Exi):
            templates.append(RuleTemplate("GammaExi", needs=("term",)))
        if isinstance(body, Uni):
            templates.append(RuleTemplate("GammaUni", needs=("term",)))
        if isinstance(head, Uni):
            templates.append(
                RuleTemplate("DeltaUni", needs=("const",), suggestion=suggest_fresh(s))
            )
        if isinstance(body, Exi):
            templates.append(
                RuleTemplate("DeltaExi", needs=("const",), suggestion=suggest_fresh(s))
            )
        if member(head, z):
            templates.append(RuleTemplate("Extra"))
    templates.append(RuleTemplate("Ext", needs=("target",)))
    if s:
        head = s[0]
        if is_neg(head) and is_neg(neg_body(head)):
            templates.append(RuleTemplate("NegNeg"))
    return templates


# ------------------------------------------------------------- proof trees

@dataclass(frozen=True)
class ScProof:
    """Backward proof tree; ``rule None`` marks an open goal."""

    conclusion: Sequent
    rule: ScRule | None = None
    premises: tuple["ScProof", ...] = ()

    def open_goals(self) -> list[Sequent]:
        """Open goals in depth-first, leftmost-premise-first order."""
        if self.rule is None:
            return [self.conclusion]
        acc: list[Sequent] = []
        for child in self.premises:
            acc.extend(child.open_goals())
        return acc


def check_proof(pf: ScProof, primitive_only: bool = False) -> CheckReport:
    """Validate every node of pf against apply_rule.

    With ``primitive_only`` the admissible Ext and derived NegNeg rules are
    rejected, restricting proofs to the bare rule table plus Extra.
    """
    def rejected(rule: object) -> str | None:
        if primitive_only and isinstance(rule, (Ext, NegNeg)):
            return "rejected in primitive-only mode"
        return None

    return check_tree(pf, apply_rule, rule_name, rejected)


def expand_negneg(s: Sequent) -> ScProof:
    """The double-negation macro as real steps.

    For s = Neg(Neg p) # z, builds the five-step fragment AlphaImp; BetaImp;
    (Ext; open p # z | Ext; Basic) whose only open goal is p # z — the
    constructive witness that no double-negation rule is needed.
    """
    if not s:
        raise HeadMismatch("NegNeg", "the sequent is empty")
    head, z = s[0], s[1:]
    if not (is_neg(head) and is_neg(neg_body(head))):
        raise HeadMismatch("NegNeg", "head is not a double negation")
    p = neg_body(neg_body(head))
    np = neg_body(head)  # Neg p

    after_alpha = (Neg(np), FALSITY) + z
    branch_one = (p, FALSITY) + z
    branch_two = (Neg(FALSITY), FALSITY) + z
    reordered = (FALSITY, Neg(FALSITY)) + z

    return ScProof(s, AlphaImp(), (
        ScProof(after_alpha, BetaImp(), (
            ScProof(branch_one, Ext((p,) + z), (
                ScProof((p,) + z),
            )),
            ScProof(branch_two, Ext(reordered), (
                ScProof(reordered, Basic()),
            )),
        )),
    ))


# ------------------------------------------------------------- JSON codecs

def rule_to_json(r: ScRule) -> dict:
    """Encode a rule for the wire; terms and sequents travel as text."""
    match r:
        case GammaExi(term) | GammaUni(term):
            return {"rule": rule_name(r), "term": render_term(term, "abstract")}
        case DeltaUni(const) | DeltaExi(const):
            return {"rule": rule_name(r), "const": const}
        case Ext(target):
            return {"rule": "Ext", "to": render_sequent(target, "abstract")}
        case _:
            return {"rule": rule_name(r)}


def rule_from_json(data: dict) -> ScRule:
    """Decode a rule; text arguments accept either notation."""
    name = canonical_rule_name(str(data.get("rule", "")))
    plain = {
        "Basic": Basic, "AlphaDis": AlphaDis, "AlphaImp": AlphaImp,
        "AlphaCon": AlphaCon, "BetaCon": BetaCon, "BetaImp": BetaImp,
        "BetaDis": BetaDis, "Extra": Extra, "NegNeg": NegNeg,
    }
    if name in plain:
        return plain[name]()
    if name in ("GammaExi", "GammaUni"):
        term = parse_term(str(data["term"]))
        return GammaExi(term) if name == "GammaExi" else GammaUni(term)
    if name in ("DeltaUni", "DeltaExi"):
        const = str(data["const"])
        return DeltaUni(const) if name == "DeltaUni" else DeltaExi(const)
    if name == "Ext":
        return Ext(parse_sequent(str(data["to"])))
    raise ValueError(f"unknown sequent rule {data.get('rule')!r}")

