"""Deterministic generators shared by the test modules.

Identifier pools deliberately avoid the reserved words and the x<n>/y<n>
variable spellings so rendered formulas always re-parse to the same tree.
"""
from __future__ import annotations

import random

from proofkit.syntax import (
    Con,
    Dis,
    Exi,
    FALSITY,
    Formula,
    Fun,
    Imp,
    Pre,
    Term,
    Uni,
    Var,
)

PRED_NAMES = ["p", "q", "r", "big", "rel"]
FUN_NAMES = ["a", "b", "c", "f", "g"]


def random_term(rng: random.Random, depth: int, size: int) -> Term:
    """A term with indices drawn from [0, depth + 2) so some are free."""
    if size <= 1 or rng.random() < 0.4:
        if rng.random() < 0.5:
            return Var(rng.randrange(depth + 2))
        return Fun(rng.choice(FUN_NAMES))
    arity = rng.randint(1, 2)
    return Fun(
        rng.choice(FUN_NAMES),
        tuple(random_term(rng, depth, size // 2) for _ in range(arity)),
    )


def random_formula(rng: random.Random, depth: int = 0, size: int = 12) -> Formula:
    """A random formula; ``depth`` tracks how many binders enclose it."""
    if size <= 1:
        kind = rng.choice(["falsity", "pre", "pre"])
    else:
        kind = rng.choice(["falsity", "pre", "imp", "dis", "con", "exi", "uni"])
    match kind:
        case "falsity":
            return FALSITY
        case "pre":
            arity = rng.randint(0, 2)
            return Pre(
                rng.choice(PRED_NAMES),
                tuple(random_term(rng, depth, 3) for _ in range(arity)),
            )
        case "imp" | "dis" | "con":
            ctor = {"imp": Imp, "dis": Dis, "con": Con}[kind]
            return ctor(
                random_formula(rng, depth, size // 2),
                random_formula(rng, depth, size // 2),
            )
        case "exi":
            return Exi(random_formula(rng, depth + 1, size - 1))
        case "uni":
            return Uni(random_formula(rng, depth + 1, size - 1))
    raise AssertionError(kind)
