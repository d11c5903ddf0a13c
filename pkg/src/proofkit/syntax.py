"""Abstract syntax for first-order terms and formulas.

Variables are de Bruijn indices: ``Var(0)`` refers to the nearest enclosing
binder, ``Var(1)`` to the next one out, and so on.  An index that exceeds the
number of enclosing binders is free.  Negation is not a constructor; it is the
abbreviation ``Neg p == Imp(p, Falsity)``, and truth is ``Imp(Falsity,
Falsity)``.  Connective and quantifier nodes are frozen dataclasses, so
formulas hash and compare structurally and can live in sets and dict keys.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union


# ------------------------------------------------------------- terms


@dataclass(frozen=True, slots=True)
class Var:
    """Variable as a de Bruijn index (0 = innermost binder)."""

    index: int


@dataclass(frozen=True, slots=True)
class Fun:
    """Function application; a constant is a function of arity 0."""

    name: str
    args: tuple[Term, ...] = ()


Term = Union[Var, Fun]


# ------------------------------------------------------------- formulas


@dataclass(frozen=True, slots=True)
class Falsity:
    pass


@dataclass(frozen=True, slots=True)
class Pre:
    """Predicate application; a propositional atom is a predicate of arity 0."""

    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Imp:
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Dis:
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Con:
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Exi:
    body: Formula


@dataclass(frozen=True, slots=True)
class Uni:
    body: Formula


Formula = Union[Falsity, Pre, Imp, Dis, Con, Exi, Uni]

FALSITY = Falsity()


def Neg(p: Formula) -> Formula:
    """The negation abbreviation: ``Neg p == Imp(p, Falsity)``."""
    return Imp(p, FALSITY)


TRUTH: Formula = Neg(FALSITY)


def is_neg(p: Formula) -> bool:
    """True iff p has the shape of the negation abbreviation."""
    return isinstance(p, Imp) and p.right == FALSITY


def neg_body(p: Formula) -> Formula:
    """The q of p = Neg q.  Precondition: is_neg(p)."""
    assert isinstance(p, Imp) and p.right == FALSITY
    return p.left


# ------------------------------------------------------------- membership

Sequent = tuple[Formula, ...]


def member(p: Formula, z: Iterable[Formula]) -> bool:
    """Structural membership of p in the formula list z."""
    return any(q == p for q in z)


def ext(y: Iterable[Formula], z: Iterable[Formula]) -> bool:
    """True iff y contains every formula of z (and possibly more).

    Order and multiplicity are ignored: this is the subset relation on the
    underlying formula sets, which is what makes Ext cover rearrangement,
    contraction, and weakening at once.
    """
    ys = set(y)
    return all(p in ys for p in z)


# ------------------------------------------------------------- substitution


def _lift_term(t: Term, by: int) -> Term:
    # Terms contain no binders, so every variable of t is free in t.
    match t:
        case Var(k):
            return Var(k + by)
        case Fun(f, args):
            return Fun(f, tuple(_lift_term(a, by) for a in args))
    raise TypeError(t)


def _sub_term(u: Term, t: Term, depth: int) -> Term:
    match u:
        case Var(k):
            if k == depth:
                return _lift_term(t, depth)
            return Var(k - 1) if k > depth else u
        case Fun(f, args):
            return Fun(f, tuple(_sub_term(a, t, depth) for a in args))
    raise TypeError(u)


def _sub(p: Formula, t: Term, depth: int) -> Formula:
    match p:
        case Falsity():
            return p
        case Pre(name, args):
            return Pre(name, tuple(_sub_term(a, t, depth) for a in args))
        case Imp(a, b):
            return Imp(_sub(a, t, depth), _sub(b, t, depth))
        case Dis(a, b):
            return Dis(_sub(a, t, depth), _sub(b, t, depth))
        case Con(a, b):
            return Con(_sub(a, t, depth), _sub(b, t, depth))
        case Exi(body):
            return Exi(_sub(body, t, depth + 1))
        case Uni(body):
            return Uni(_sub(body, t, depth + 1))
    raise TypeError(p)


def instantiate(p: Formula, t: Term) -> Formula:
    """Capture-avoiding substitution of t for de Bruijn index 0 in p.

    At binder depth d inside p, index d is the one being replaced; it becomes
    t with all of t's indices raised by d.  Indices above the replaced one are
    decremented, since one binder's worth of indirection disappears.
    """
    return _sub(p, t, 0)


# ------------------------------------------------------------- symbol scans


def _term_functions(t: Term, acc: set[tuple[str, int]]) -> None:
    match t:
        case Var(_):
            pass
        case Fun(f, args):
            acc.add((f, len(args)))
            for a in args:
                _term_functions(a, acc)


def function_symbols(p: Formula) -> set[tuple[str, int]]:
    """All function symbols of p as (name, arity) pairs."""
    acc: set[tuple[str, int]] = set()

    def walk(q: Formula) -> None:
        match q:
            case Falsity():
                pass
            case Pre(_, args):
                for a in args:
                    _term_functions(a, acc)
            case Imp(a, b) | Dis(a, b) | Con(a, b):
                walk(a)
                walk(b)
            case Exi(body) | Uni(body):
                walk(body)

    walk(p)
    return acc


def predicate_symbols(p: Formula) -> set[tuple[str, int]]:
    """All predicate symbols of p as (name, arity) pairs."""
    acc: set[tuple[str, int]] = set()

    def walk(q: Formula) -> None:
        match q:
            case Falsity():
                pass
            case Pre(name, args):
                acc.add((name, len(args)))
            case Imp(a, b) | Dis(a, b) | Con(a, b):
                walk(a)
                walk(b)
            case Exi(body) | Uni(body):
                walk(body)

    walk(p)
    return acc


def _term_mentions(t: Term, c: str) -> bool:
    match t:
        case Var(_):
            return False
        case Fun(f, args):
            return f == c or any(_term_mentions(a, c) for a in args)
    raise TypeError(t)


def mentions_function(p: Formula, c: str) -> bool:
    """True iff the function name c occurs in p at any arity."""
    match p:
        case Falsity():
            return False
        case Pre(_, args):
            return any(_term_mentions(a, c) for a in args)
        case Imp(a, b) | Dis(a, b) | Con(a, b):
            return mentions_function(a, c) or mentions_function(b, c)
        case Exi(body) | Uni(body):
            return mentions_function(body, c)
    raise TypeError(p)


def fresh_constant(c: str, ps: Iterable[Formula]) -> bool:
    """True iff the function name c occurs nowhere in ps, at any arity.

    Deliberately conservative: a clash with c used as a 2-ary function symbol
    still counts as stale, which keeps delta-rule checking simple and sound.
    """
    return not any(mentions_function(p, c) for p in ps)


def free_indices(p: Formula) -> set[int]:
    """Free de Bruijn indices of p, as seen from outside the formula."""
    acc: set[int] = set()

    def walk_term(t: Term, depth: int) -> None:
        match t:
            case Var(k):
                if k >= depth:
                    acc.add(k - depth)
            case Fun(_, args):
                for a in args:
                    walk_term(a, depth)

    def walk(q: Formula, depth: int) -> None:
        match q:
            case Falsity():
                pass
            case Pre(_, args):
                for a in args:
                    walk_term(a, depth)
            case Imp(a, b) | Dis(a, b) | Con(a, b):
                walk(a, depth)
                walk(b, depth)
            case Exi(body) | Uni(body):
                walk(body, depth + 1)

    walk(p, 0)
    return acc


def formula_size(p: Formula) -> int:
    """Node count of p, counting every constructor once."""
    match p:
        case Falsity() | Pre(_, _):
            return 1
        case Imp(a, b) | Dis(a, b) | Con(a, b):
            return 1 + formula_size(a) + formula_size(b)
        case Exi(body) | Uni(body):
            return 1 + formula_size(body)
    raise TypeError(p)
