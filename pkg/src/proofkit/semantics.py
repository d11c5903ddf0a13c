"""Finite-model semantics: evaluation, countermodel search, truth tables.

A model interprets every function symbol by a total table over a finite
domain {0, ..., size-1} and every predicate symbol by a set of tuples.  An
environment is a stored prefix of variable values plus an explicit default:
indices beyond the prefix evaluate to element 0, so evaluation is total even
for open formulas.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from .errors import MissingSymbol, NotPropositional
from .syntax import (
    Con,
    Dis,
    Exi,
    Falsity,
    Formula,
    Fun,
    Imp,
    Pre,
    Term,
    Uni,
    Var,
    free_indices,
    function_symbols,
    predicate_symbols,
)


@dataclass(frozen=True)
class Model:
    """Finite first-order structure with total function tables."""

    size: int
    funcs: dict[tuple[str, int], dict[tuple[int, ...], int]] = field(default_factory=dict)
    preds: dict[tuple[str, int], frozenset[tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("model domain must have at least one element")
        for (name, arity), table in self.funcs.items():
            expected = self.size ** arity
            if len(table) != expected:
                raise ValueError(f"function table {name}/{arity} is not total")
            for args, value in table.items():
                if len(args) != arity or not all(0 <= a < self.size for a in args):
                    raise ValueError(f"function table {name}/{arity} has a bad row {args}")
                if not 0 <= value < self.size:
                    raise ValueError(f"function table {name}/{arity} maps outside the domain")
        for (name, arity), rows in self.preds.items():
            for row in rows:
                if len(row) != arity or not all(0 <= a < self.size for a in row):
                    raise ValueError(f"predicate table {name}/{arity} has a bad row {row}")

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "functions": {
                f"{name}/{arity}": [
                    table[args]
                    for args in itertools.product(range(self.size), repeat=arity)
                ]
                for (name, arity), table in sorted(self.funcs.items())
            },
            "predicates": {
                f"{name}/{arity}": sorted(list(row) for row in rows)
                for (name, arity), rows in sorted(self.preds.items())
            },
        }

    @staticmethod
    def from_json(data: dict) -> "Model":
        size = int(data["size"])
        funcs: dict[tuple[str, int], dict[tuple[int, ...], int]] = {}
        for key, values in data.get("functions", {}).items():
            name, arity_s = key.rsplit("/", 1)
            arity = int(arity_s)
            rows = list(itertools.product(range(size), repeat=arity))
            funcs[(name, arity)] = dict(zip(rows, values))
        preds = {
            (key.rsplit("/", 1)[0], int(key.rsplit("/", 1)[1])): frozenset(
                tuple(row) for row in rows
            )
            for key, rows in data.get("predicates", {}).items()
        }
        return Model(size=size, funcs=funcs, preds=preds)


@dataclass(frozen=True)
class Environment:
    """Variable assignment: a stored prefix over the domain plus default 0."""

    values: tuple[int, ...] = ()

    def lookup(self, index: int) -> int:
        return self.values[index] if index < len(self.values) else 0

    def prepend(self, value: int) -> "Environment":
        return Environment((value,) + self.values)

    def to_json(self) -> dict:
        return {"values": list(self.values), "default": 0}


def eval_term(t: Term, model: Model, env: Environment) -> int:
    match t:
        case Var(k):
            return env.lookup(k)
        case Fun(name, args):
            table = model.funcs.get((name, len(args)))
            if table is None:
                raise MissingSymbol(name, len(args), "function")
            return table[tuple(eval_term(a, model, env) for a in args)]
    raise TypeError(t)


def eval_formula(p: Formula, model: Model, env: Environment) -> bool:
    match p:
        case Falsity():
            return False
        case Pre(name, args):
            rows = model.preds.get((name, len(args)))
            if rows is None:
                raise MissingSymbol(name, len(args), "predicate")
            return tuple(eval_term(a, model, env) for a in args) in rows
        case Imp(a, b):
            return (not eval_formula(a, model, env)) or eval_formula(b, model, env)
        case Dis(a, b):
            return eval_formula(a, model, env) or eval_formula(b, model, env)
        case Con(a, b):
            return eval_formula(a, model, env) and eval_formula(b, model, env)
        case Exi(body):
            return any(
                eval_formula(body, model, env.prepend(d)) for d in range(model.size)
            )
        case Uni(body):
            return all(
                eval_formula(body, model, env.prepend(d)) for d in range(model.size)
            )
    raise TypeError(p)


# ------------------------------------------------------------- search

@dataclass(frozen=True)
class Countermodel:
    """A falsifying interpretation: model plus environment for free indices."""

    model: Model
    env: Environment


@dataclass(frozen=True)
class Exhausted:
    """Every interpretation up to the size bound satisfies the formula."""


@dataclass(frozen=True)
class BudgetExceeded:
    """The evaluation budget ran out (or the search was cancelled)."""


SearchResult = Union[Countermodel, Exhausted, BudgetExceeded]


def _lazy_grid(pools: list) -> Iterator[tuple]:
    """Cartesian product over restartable pools, last pool varying fastest.

    Unlike itertools.product this never materializes a pool, so predicate
    spaces of astronomical size stay cheap until the budget cuts them off.
    Each pool is a zero-argument callable returning a fresh iterator.
    """
    if not pools:
        yield ()
        return
    for head in pools[0]():
        for rest in _lazy_grid(pools[1:]):
            yield (head,) + rest


def countermodel_search(
    p: Formula,
    max_size: int,
    budget: int = 100_000,
    cancel: Callable[[], bool] | None = None,
) -> SearchResult:
    """Deterministic search for an interpretation falsifying p.

    Enumeration order: domain size ascending; within a size, function tables
    vary before predicate tables and environments, each lexicographically over
    sorted symbols with the last symbol's table varying fastest.  The budget
    counts whole-interpretation evaluations, so identical inputs always
    inspect the identical prefix of the stream.
    """
    funcs = sorted(function_symbols(p))
    preds = sorted(predicate_symbols(p))
    free = sorted(free_indices(p))
    spent = 0

    for size in range(1, max_size + 1):
        domain = range(size)
        func_rows = [
            list(itertools.product(domain, repeat=arity)) for _, arity in funcs
        ]
        pred_rows = [
            list(itertools.product(domain, repeat=arity)) for _, arity in preds
        ]
        func_pools = [
            (lambda n=len(rows): itertools.product(domain, repeat=n))
            for rows in func_rows
        ]
        pred_pools = [
            (lambda n=len(rows): itertools.product((False, True), repeat=n))
            for rows in pred_rows
        ]
        for func_tables in _lazy_grid(func_pools):
            fdict = {
                sym: dict(zip(rows, values))
                for sym, rows, values in zip(funcs, func_rows, func_tables)
            }
            for pred_tables in _lazy_grid(pred_pools):
                pdict = {
                    sym: frozenset(
                        row for row, present in zip(rows, flags) if present
                    )
                    for sym, rows, flags in zip(preds, pred_rows, pred_tables)
                }
                model = Model(size=size, funcs=fdict, preds=pdict)
                for env_values in itertools.product(domain, repeat=len(free)):
                    if cancel is not None and cancel():
                        return BudgetExceeded()
                    if spent >= budget:
                        return BudgetExceeded()
                    spent += 1
                    prefix_len = (free[-1] + 1) if free else 0
                    values = [0] * prefix_len
                    for index, value in zip(free, env_values):
                        values[index] = value
                    env = Environment(tuple(values))
                    if not eval_formula(p, model, env):
                        return Countermodel(model=model, env=env)
    return Exhausted()


# ------------------------------------------------------------- truth tables

def _prop_atoms(p: Formula, acc: set[str]) -> None:
    match p:
        case Falsity():
            pass
        case Pre(name, args):
            if args:
                raise NotPropositional(
                    f"predicate {name!r} takes arguments; not a propositional atom"
                )
            acc.add(name)
        case Imp(a, b) | Dis(a, b) | Con(a, b):
            _prop_atoms(a, acc)
            _prop_atoms(b, acc)
        case Exi(_) | Uni(_):
            raise NotPropositional("formula contains a quantifier")
        case _:
            raise TypeError(p)


def _eval_prop(p: Formula, valuation: dict[str, bool]) -> bool:
    match p:
        case Falsity():
            return False
        case Pre(name, _):
            return valuation[name]
        case Imp(a, b):
            return (not _eval_prop(a, valuation)) or _eval_prop(b, valuation)
        case Dis(a, b):
            return _eval_prop(a, valuation) or _eval_prop(b, valuation)
        case Con(a, b):
            return _eval_prop(a, valuation) and _eval_prop(b, valuation)
    raise TypeError(p)


def prop_valid(p: Formula) -> bool:
    """Truth-table validity over the propositional fragment.

    Raises NotPropositional if p contains quantifiers, variables, or function
    applications; countermodel_search is the tool for those.
    """
    atoms: set[str] = set()
    _prop_atoms(p, atoms)
    names = sorted(atoms)
    for bits in itertools.product((False, True), repeat=len(names)):
        if not _eval_prop(p, dict(zip(names, bits))):
            return False
    return True
