"""First-order logic proof toolkit.

Proof kernels for a one-sided sequent calculus and natural deduction, a
Hilbert-style implication system, finite-model semantics with countermodel
search, an automated prover that emits kernel-checkable proofs, an
interactive session engine, an HTTP service, and a command-line interface.
"""
from .syntax import (
    Con,
    Dis,
    Exi,
    FALSITY,
    Falsity,
    Formula,
    Fun,
    Imp,
    Neg,
    Pre,
    Sequent,
    TRUTH,
    Term,
    Uni,
    Var,
    instantiate,
)
from .notation import parse_formula, parse_sequent, render_formula, render_sequent

__version__ = "0.1.0"

__all__ = [
    "Con",
    "Dis",
    "Exi",
    "FALSITY",
    "Falsity",
    "Formula",
    "Fun",
    "Imp",
    "Neg",
    "Pre",
    "Sequent",
    "TRUTH",
    "Term",
    "Uni",
    "Var",
    "instantiate",
    "parse_formula",
    "parse_sequent",
    "render_formula",
    "render_sequent",
    "__version__",
]
