"""Schema-parametric Hilbert-style checker and bounded proof search.

The propositional fragment here is the shared formula type restricted to
Falsity, nullary predicates, and implication — the two primitive symbols.
Axiom schemas are data loaded from text files; metavariables are the
uppercase-initial atom names.  Every schema must be a classical tautology,
which is checked at load time, so modus ponens can never leave the
tautologies.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Union

from .errors import FormatError, NotPropositional
from .notation import parse_formula, render_formula
from .report import CheckReport
from .semantics import prop_valid
from .syntax import FALSITY, Falsity, Formula, Imp, Pre


def ensure_prop(p: Formula) -> None:
    """Reject anything outside the Falsity/atom/implication fragment."""
    match p:
        case Falsity():
            return
        case Pre(_, args):
            if args:
                raise NotPropositional(
                    "atoms of the implication fragment take no arguments"
                )
            return
        case Imp(a, b):
            ensure_prop(a)
            ensure_prop(b)
            return
    raise NotPropositional(
        "only Falsity, nullary atoms, and implication are allowed here"
    )


def is_metavariable(name: str) -> bool:
    return name[:1].isupper()


@dataclass(frozen=True, slots=True)
class Schema:
    """An axiom pattern whose uppercase-initial atoms are metavariables."""

    pattern: Formula

    def metavariables(self) -> set[str]:
        acc: set[str] = set()

        def walk(p: Formula) -> None:
            match p:
                case Pre(name, ()) if is_metavariable(name):
                    acc.add(name)
                case Imp(a, b):
                    walk(a)
                    walk(b)

        walk(self.pattern)
        return acc


def load_axioms(text: str) -> list[Schema]:
    """Parse an axiom file: one schema per line, '#' comments.

    Every schema is validated as a propositional tautology (metavariables
    read as atoms); a non-tautology makes the whole file unusable.
    """
    schemas: list[Schema] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        pattern = parse_formula(line)
        ensure_prop(pattern)
        if not prop_valid(pattern):
            raise FormatError(
                f"axiom schema on line {lineno} is not a tautology: {line}"
            )
        schemas.append(Schema(pattern))
    if not schemas:
        raise FormatError("axiom file contains no schemas")
    return schemas


# ------------------------------------------------------------- matching

def match_schema(p: Formula, s: Schema) -> dict[str, Formula] | None:
    """The unique substitution taking s to p, or None."""
    subst: dict[str, Formula] = {}

    def go(pattern: Formula, target: Formula) -> bool:
        match pattern:
            case Pre(name, ()) if is_metavariable(name):
                if name in subst:
                    return subst[name] == target
                subst[name] = target
                return True
            case Imp(a, b):
                return (
                    isinstance(target, Imp)
                    and go(a, target.left)
                    and go(b, target.right)
                )
            case _:
                return pattern == target

    return subst if go(s.pattern, p) else None


def apply_subst(pattern: Formula, subst: dict[str, Formula]) -> Formula:
    """Replace every metavariable of pattern by its image under subst."""
    match pattern:
        case Pre(name, ()) if is_metavariable(name):
            if name not in subst:
                raise KeyError(name)
            return subst[name]
        case Imp(a, b):
            return Imp(apply_subst(a, subst), apply_subst(b, subst))
        case _:
            return pattern


# ------------------------------------------------------------- proofs

@dataclass(frozen=True, slots=True)
class AxiomStep:
    """Line justified as an instance of axiom ``k`` (1-based)."""

    axiom: int
    subst: tuple[tuple[str, Formula], ...]

    def as_dict(self) -> dict[str, Formula]:
        return dict(self.subst)


@dataclass(frozen=True, slots=True)
class MPStep:
    """Modus ponens: line j must read 'line i implies this line'."""

    i: int
    j: int


Justification = Union[AxiomStep, MPStep]


@dataclass(frozen=True, slots=True)
class WLine:
    number: int
    formula: Formula
    just: Justification


@dataclass(frozen=True, slots=True)
class WProof:
    lines: tuple[WLine, ...]

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula


def check_w_proof(pf: WProof, axioms: list[Schema]) -> CheckReport:
    """Validate each line; the verdict is Complete or Invalid, never open."""
    rules_used: dict[str, int] = {}
    by_number: dict[int, Formula] = {}
    for index, line in enumerate(pf.lines):
        code = message = None
        match line.just:
            case AxiomStep(axiom=k, subst=subst):
                rules_used["Ax"] = rules_used.get("Ax", 0) + 1
                if not 1 <= k <= len(axioms):
                    code, message = "BadAxiomInstance", f"no axiom {k}"
                else:
                    try:
                        image = apply_subst(axioms[k - 1].pattern, dict(subst))
                    except KeyError as missing:
                        code = "BadAxiomInstance"
                        message = f"substitution misses metavariable {missing}"
                    else:
                        if image != line.formula:
                            code = "BadAxiomInstance"
                            message = (
                                f"line {line.number} is not that instance of "
                                f"axiom {k}"
                            )
            case MPStep(i=i, j=j):
                rules_used["MP"] = rules_used.get("MP", 0) + 1
                if i not in by_number or j not in by_number:
                    code = "ForwardReference"
                    message = (
                        f"line {line.number} cites a line at or after itself"
                    )
                elif by_number[j] != Imp(by_number[i], line.formula):
                    code, message = "BadMP", (
                        f"line {j} is not 'line {i} implies line {line.number}'"
                    )
        if code is not None:
            return CheckReport(
                verdict="Invalid",
                steps=len(pf.lines),
                rules_used=rules_used,
                error_path=(index,),
                error_code=code,
                error_message=message,
            )
        by_number[line.number] = line.formula
    return CheckReport(
        verdict="Complete", steps=len(pf.lines), rules_used=rules_used
    )


# ------------------------------------------------------------- search

def _atoms(p: Formula, acc: set[str]) -> None:
    match p:
        case Pre(name, ()):
            acc.add(name)
        case Imp(a, b):
            _atoms(a, acc)
            _atoms(b, acc)


def _formulas_upto(leaves: list[Formula], max_leaves: int) -> list[Formula]:
    """All implication formulas with at most max_leaves leaves, smallest and
    lexicographically earliest first — the deterministic assignment pool."""
    by_size: dict[int, list[Formula]] = {1: list(leaves)}
    for n in range(2, max_leaves + 1):
        layer: list[Formula] = []
        for k in range(1, n):
            for a in by_size[k]:
                for b in by_size[n - k]:
                    layer.append(Imp(a, b))
        by_size[n] = layer
    pool = [p for n in range(1, max_leaves + 1) for p in by_size[n]]
    pool.sort(key=lambda p: (_leaf_count(p), render_formula(p)))
    return pool


def _leaf_count(p: Formula) -> int:
    match p:
        case Imp(a, b):
            return _leaf_count(a) + _leaf_count(b)
        case _:
            return 1


_POOL_CAP = 48  # assignment pool per round; keeps schema instantiation bounded


def search_proof(
    goal: Formula,
    axioms: list[Schema],
    depth: int = 8,
    cancel: Callable[[], bool] | None = None,
) -> WProof | None:
    """Bounded forward search: saturate axiom instances under modus ponens.

    Round b instantiates every schema with assignment formulas of at most b
    leaves over the goal's atoms plus Falsity, then closes under MP (which
    only ever produces subformulas, so each round terminates).  Deterministic;
    None means "not found within the bounds", never unprovability.
    """
    ensure_prop(goal)
    atom_names: set[str] = set()
    _atoms(goal, atom_names)
    leaves: list[Formula] = [FALSITY] + [Pre(name) for name in sorted(atom_names)]

    previous_pool: list[Formula] = []
    for bound in range(1, depth + 1):
        if cancel is not None and cancel():
            return None
        pool = _formulas_upto(leaves, bound)[:_POOL_CAP]
        if pool == previous_pool:
            break  # the cap froze the pool; later rounds would repeat this one
        previous_pool = pool

        derived: dict[Formula, Justification] = {}
        by_antecedent: dict[Formula, list[Imp]] = {}
        work: deque[Formula] = deque()

        def admit(f: Formula, just: Justification) -> None:
            if f not in derived:
                derived[f] = just
                work.append(f)

        for k, schema in enumerate(axioms, start=1):
            names = sorted(schema.metavariables())
            for values in itertools.product(pool, repeat=len(names)):
                subst = dict(zip(names, values))
                admit(
                    apply_subst(schema.pattern, subst),
                    AxiomStep(k, tuple(sorted(subst.items()))),
                )
            if cancel is not None and cancel():
                return None

        # MP closure.  Consequents are always subformulas of what is already
        # derived, so this terminates.  The i/j slots temporarily hold the
        # premise formulas and are renumbered during extraction.
        steps = 0
        while work:
            steps += 1
            if steps % 4096 == 0 and cancel is not None and cancel():
                return None
            f = work.popleft()
            if isinstance(f, Imp):
                by_antecedent.setdefault(f.left, []).append(f)
                if f.left in derived and f.right not in derived:
                    admit(f.right, MPStep(f.left, f))  # type: ignore[arg-type]
            for g in by_antecedent.get(f, ()):
                if g.right not in derived:
                    admit(g.right, MPStep(f, g))  # type: ignore[arg-type]
        if goal in derived:
            return _extract(goal, derived)
    return None


def _extract(goal: Formula, derived: dict[Formula, Justification]) -> WProof:
    """Back-chain from the goal and emit numbered lines in dependency order."""
    numbers: dict[Formula, int] = {}
    lines: list[WLine] = []

    def emit(f: Formula) -> int:
        if f in numbers:
            return numbers[f]
        just = derived[f]
        match just:
            case MPStep(i=antecedent, j=implication):
                i = emit(antecedent)  # type: ignore[arg-type]
                j = emit(implication)  # type: ignore[arg-type]
                resolved: Justification = MPStep(i, j)
            case _:
                resolved = just
        number = len(lines) + 1
        numbers[f] = number
        lines.append(WLine(number, f, resolved))
        return number

    emit(goal)
    return WProof(tuple(lines))
