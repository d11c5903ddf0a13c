"""Automated proof search over sequents, emitting kernel-checkable trees.

The searcher reads the sequent as the disjunction of its members and works
on whole formulas: non-branching decompositions first, then fresh-constant
steps, then branching, and only then quantifier instantiation, which
round-robins over the pending formulas and a growing stream of ground
terms.  Instantiated formulas are first duplicated with Ext so they stay
available for further witnesses.

The searcher is untrusted: every proof it finds is re-checked by the rule
kernel before being reported, and a negative answer is only upgraded from
Unknown to LikelyUnprovable by a concrete finite countermodel or a
saturated purely propositional branch.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Union

from .errors import ProofkitError
from .semantics import Countermodel, countermodel_search
from .sequent import (
    AlphaCon,
    AlphaDis,
    AlphaImp,
    Basic,
    BetaCon,
    BetaDis,
    BetaImp,
    DeltaExi,
    DeltaUni,
    Ext,
    GammaExi,
    GammaUni,
    NegNeg,
    ScProof,
    ScRule,
    apply_rule,
    check_proof,
    suggest_fresh,
)
from .syntax import (
    FALSITY,
    Con,
    Dis,
    Exi,
    Falsity,
    Formula,
    Fun,
    Imp,
    Pre,
    Sequent,
    Term,
    Uni,
    function_symbols,
)


@dataclass(frozen=True, slots=True)
class SearchBudget:
    """Bounds on one search: γ-instantiations are counted per branch,
    expansions across the whole attempt, the deadline in seconds."""

    max_gamma: int = 24
    max_expansions: int = 50_000
    deadline: float = 10.0

    def __post_init__(self):
        if self.max_gamma <= 0 or self.max_expansions <= 0 or self.deadline <= 0:
            raise ValueError("all search bounds must be positive")


DEFAULT_BUDGET = SearchBudget()
ASSESS_BUDGET = SearchBudget(max_gamma=6, max_expansions=256, deadline=0.2)


@dataclass(frozen=True, slots=True)
class Proved:
    proof: ScProof

    @property
    def verdict(self) -> str:
        return "Proved"


@dataclass(frozen=True, slots=True)
class LikelyUnprovable:
    counterexample: Countermodel | None = None

    @property
    def verdict(self) -> str:
        return "LikelyUnprovable"


@dataclass(frozen=True, slots=True)
class Unknown:
    @property
    def verdict(self) -> str:
        return "Unknown"


Assessment = Union[Proved, LikelyUnprovable, Unknown]

_ALPHA, _BETA, _GAMMA, _DELTA, _LITERAL = range(5)


def _classify(f: Formula) -> tuple[int, ScRule | None]:
    """Tag a formula by the kind of step that consumes it at the head."""
    match f:
        case Dis(_, _):
            return _ALPHA, AlphaDis()
        case Con(_, _):
            return _BETA, BetaCon()
        case Exi(_):
            return _GAMMA, None
        case Uni(_):
            return _DELTA, None
        case Imp(inner, Falsity()):
            match inner:
                case Imp(_, Falsity()):
                    return _ALPHA, NegNeg()
                case Con(_, _):
                    return _ALPHA, AlphaCon()
                case Dis(_, _):
                    return _BETA, BetaDis()
                case Imp(_, _):
                    return _BETA, BetaImp()
                case Uni(_):
                    return _GAMMA, None
                case Exi(_):
                    return _DELTA, None
                case Falsity():
                    # the negation of falsity; one step exposes the pair
                    return _ALPHA, AlphaImp()
            return _LITERAL, None
        case Imp(_, _):
            return _ALPHA, AlphaImp()
    return _LITERAL, None


def _neg(f: Formula) -> Formula:
    return Imp(f, FALSITY)


def _prop_literal(f: Formula) -> bool:
    match f:
        case Falsity() | Pre(_, ()):
            return True
        case Imp(Pre(_, ()), Falsity()):
            return True
    return False


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive integers with the given sum."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def _herbrand(s: Sequent) -> Iterator[Term]:
    """Ground terms over the sequent's symbols: constants first (one is
    invented if there are none), then applications by increasing size."""
    symbols: set[tuple[str, int]] = set()
    for f in s:
        symbols |= function_symbols(f)
    consts = sorted(name for name, arity in symbols if arity == 0)
    funcs = sorted(item for item in symbols if item[1] > 0)
    if not consts:
        consts = [suggest_fresh(s)]
    layers: list[list[Term]] = [[Fun(name) for name in consts]]
    yield from layers[0]
    if not funcs:
        return
    while True:
        size = len(layers) + 1
        layer: list[Term] = []
        for name, arity in funcs:
            for sizes in _compositions(size - 1, arity):
                pools = [layers[k - 1] for k in sizes]
                for args in itertools.product(*pools):
                    layer.append(Fun(name, args))
        layers.append(layer)
        yield from layer


def _sequent_formula(s: Sequent) -> Formula:
    """The disjunction the sequent claims; Falsity when empty."""
    if not s:
        return FALSITY
    out = s[-1]
    for f in reversed(s[:-1]):
        out = Dis(f, out)
    return out


class _Abort(Exception):
    def __init__(self, reason: str, prop_only: bool = False):
        super().__init__(reason)
        self.reason = reason
        self.prop_only = prop_only


class _Search:
    def __init__(self, budget: SearchBudget, cancel: Callable[[], bool] | None):
        self.budget = budget
        self.cancel = cancel
        self.deadline_at = time.monotonic() + budget.deadline
        self.expansions = 0

    def _tick(self) -> None:
        self.expansions += 1
        if self.expansions > self.budget.max_expansions:
            raise _Abort("budget")
        if self.cancel is not None and self.cancel():
            raise _Abort("budget")
        if time.monotonic() > self.deadline_at:
            raise _Abort("budget")

    def branch(
        self,
        s: Sequent,
        used: frozenset[tuple[Formula, Term]],
        rotation: int,
        spent: int,
    ) -> ScProof:
        self._tick()
        closed = self._try_close(s)
        if closed is not None:
            return closed

        tags = [_classify(f) for f in s]
        for wanted in (_ALPHA, _DELTA, _BETA):
            for idx, (tag, rule) in enumerate(tags):
                if tag != wanted:
                    continue
                if tag == _DELTA:
                    const = suggest_fresh(s)
                    rule = (
                        DeltaUni(const)
                        if isinstance(s[idx], Uni)
                        else DeltaExi(const)
                    )
                assert rule is not None
                return self._expand(s, idx, rule, used, rotation, spent)

        gammas = [f for f, (tag, _) in zip(s, tags) if tag == _GAMMA]
        if gammas:
            if spent >= self.budget.max_gamma:
                raise _Abort("budget")
            for offset in range(len(gammas)):
                f = gammas[(rotation + offset) % len(gammas)]
                term = self._next_term(s, f, used)
                if term is None:
                    continue
                return self._instantiate(
                    s, f, term,
                    used | {(f, term)}, rotation + offset + 1, spent + 1,
                )
            raise _Abort("saturated", prop_only=False)

        raise _Abort("saturated", prop_only=all(_prop_literal(f) for f in s))

    def _try_close(self, s: Sequent) -> ScProof | None:
        present = set(s)
        for idx, f in enumerate(s):
            if _neg(f) not in present:
                continue
            if idx == 0:
                return ScProof(s, Basic())
            target = (f,) + s[:idx] + s[idx + 1 :]
            return ScProof(s, Ext(target), (ScProof(target, Basic()),))
        return None

    def _expand(
        self,
        s: Sequent,
        idx: int,
        rule: ScRule,
        used: frozenset,
        rotation: int,
        spent: int,
    ) -> ScProof:
        if idx > 0:
            target = (s[idx],) + s[:idx] + s[idx + 1 :]
            sub = self._expand(target, 0, rule, used, rotation, spent)
            return ScProof(s, Ext(target), (sub,))
        premises = apply_rule(s, rule)
        children = tuple(
            self.branch(premise, used, rotation, spent) for premise in premises
        )
        return ScProof(s, rule, children)

    def _instantiate(
        self,
        s: Sequent,
        f: Formula,
        term: Term,
        used: frozenset,
        rotation: int,
        spent: int,
    ) -> ScProof:
        # Duplicate the formula to the front so the witness consumes the
        # copy and the original stays available for later instantiations.
        target = (f,) + s
        rule: ScRule = GammaExi(term) if isinstance(f, Exi) else GammaUni(term)
        premise = apply_rule(target, rule)[0]
        child = self.branch(premise, used, rotation, spent)
        return ScProof(s, Ext(target), (ScProof(target, rule, (child,)),))

    def _next_term(
        self, s: Sequent, f: Formula, used: frozenset
    ) -> Term | None:
        for term in _herbrand(s):
            if (f, term) not in used:
                return term
        return None


_CEX_MAX_SIZE = 2
_CEX_BUDGET = 4096


def prove(
    s: Sequent,
    budget: SearchBudget | None = None,
    cancel: Callable[[], bool] | None = None,
) -> Assessment:
    """Search for a proof of the sequent within the budget.

    Proved carries a tree that has already passed the kernel re-check.
    LikelyUnprovable carries a countermodel when one was found; Unknown
    means the budget ran out first and claims nothing.
    """
    s = tuple(s)
    chosen = budget if budget is not None else DEFAULT_BUDGET
    search = _Search(chosen, cancel)
    try:
        proof = search.branch(s, frozenset(), 0, 0)
    except _Abort as abort:
        if abort.reason == "saturated":
            found = countermodel_search(
                _sequent_formula(s), _CEX_MAX_SIZE,
                budget=_CEX_BUDGET, cancel=cancel,
            )
            if isinstance(found, Countermodel):
                return LikelyUnprovable(found)
            if abort.prop_only:
                return LikelyUnprovable(None)
        return Unknown()
    report = check_proof(proof)
    if report.verdict != "Complete":
        raise ProofkitError(
            f"internal: search produced a {report.verdict} proof"
            f" ({report.error_code})"
        )
    return Proved(proof)


def assess_subgoal(
    s: Sequent,
    budget: SearchBudget | None = None,
    cancel: Callable[[], bool] | None = None,
) -> Assessment:
    """The same engine under an interactive-latency default budget."""
    return prove(s, budget if budget is not None else ASSESS_BUDGET, cancel)
