"""End-to-end acceptance sweep.

Each test here is one acceptance line for the toolkit as a whole; the
``pytest -v`` output of this module doubles as the release checklist.  The
tests deliberately re-derive their expectations from independent oracles
(truth tables, naive set containment, semantic evaluation) rather than from
the code under test.

One line is kept deliberately red: the bundled rich-grandfather derivation
is 34 steps, above the 25-step target, and is marked ``xfail(strict=True)``
so it cannot silently rot in either direction.
"""
from __future__ import annotations

import itertools
import random
import time
from pathlib import Path

import pytest

from helpers import random_formula, random_term
from proofkit.hilbert import WProof, check_w_proof, load_axioms, search_proof
from proofkit.natural import NdProof, check_nd_proof, to_sequent
from proofkit.notation import render_formula
from proofkit.scripts import parse_script
from proofkit.semantics import (
    Environment,
    Exhausted,
    Model,
    countermodel_search,
    eval_formula,
    eval_term,
    prop_valid,
)
from proofkit.sequent import (
    Basic,
    Ext,
    NegNeg,
    ScProof,
    apply_rule,
    check_proof,
    expand_negneg,
)
from proofkit.syntax import (
    Con,
    Dis,
    FALSITY,
    Imp,
    Neg,
    Pre,
    TRUTH,
    Uni,
    Exi,
    Var,
    Fun,
    ext,
    instantiate,
)
from proofkit.tableau import Proved, SearchBudget, prove

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

P = Pre("p", ())
Q = Pre("q", ())

CANONICAL_IDENTITY_SCRIPT = """\
goal: p --> p
by: AlphaImp
sequent:
  ~p
  p
by: Ext to: p, ~p
sequent:
  p
  ~p
qed: Basic
"""


def _rich_grandfather():
    def r(t):
        return Pre("r", (t,))

    def f(t):
        return Fun("f", (t,))

    return Imp(
        Uni(Imp(Neg(r(Var(0))), r(f(Var(0))))),
        Exi(Con(r(Var(0)), r(f(f(Var(0)))))),
    )


# --------------------------------------------------------------------- 01

def test_01_identity_needs_exactly_the_three_step_script():
    """p --> p closes via AlphaImp; Ext; Basic and not without the Ext."""
    started = time.perf_counter()

    proof = parse_script(CANONICAL_IDENTITY_SCRIPT)
    report = check_proof(proof)
    assert report.verdict == "Complete"
    assert report.steps == 3
    assert report.rules_used == {"AlphaImp": 1, "Ext": 1, "Basic": 1}

    # The same script with the Ext step elided: AlphaImp leaves (~p, p),
    # whose head is not the formula that repeats negated, so Basic must
    # refuse it.  This is the whole reason Ext exists.
    without_ext = ScProof(
        (Imp(P, P),),
        proof.rule,
        (ScProof((Neg(P), P), Basic()),),
    )
    rejected = check_proof(without_ext)
    assert rejected.verdict == "Invalid"
    assert rejected.error_code == "NotBasic"

    assert time.perf_counter() - started < 1.0


# --------------------------------------------------------------------- 02

def _graft(pf: ScProof, replacement: ScProof) -> ScProof:
    """Replace the leftmost open leaf of pf with replacement."""
    if pf.rule is None:
        assert pf.conclusion == replacement.conclusion
        return replacement
    premises = list(pf.premises)
    for i, sub in enumerate(premises):
        if sub.open_goals():
            premises[i] = _graft(sub, replacement)
            return ScProof(pf.conclusion, pf.rule, tuple(premises))
    raise AssertionError("no open leaf to graft onto")


def test_02_double_negation_expansion_closes_for_200_random_instances():
    """expand_negneg emits a primitive fragment whose only debt is the
    NegNeg premise; padding the tail with ~p lets every instance finish
    Complete."""
    rng = random.Random(20260822)
    for _ in range(200):
        p = random_formula(rng, size=rng.randint(1, 10))
        z = tuple(random_formula(rng, size=rng.randint(1, 6))
                  for _ in range(rng.randint(0, 3)))

        # The fragment itself: valid steps, exactly one open goal, and that
        # goal is precisely the premise the derived NegNeg rule reports.
        s = (Neg(Neg(p)),) + z
        fragment = check_proof(expand_negneg(s))
        assert fragment.verdict == "Incomplete"
        assert expand_negneg(s).open_goals() == [(p,) + z]
        assert apply_rule(s, NegNeg()) == ((p,) + z,)

        # Completion witness: with ~p in the tail the leftover premise is
        # one Ext and one Basic away from closed, for arbitrary p and z.
        padded = (Neg(Neg(p)),) + z + (Neg(p),)
        closer = ScProof(
            (p,) + z + (Neg(p),),
            Ext((p, Neg(p))),
            (ScProof((p, Neg(p)), Basic()),),
        )
        completed = check_proof(_graft(expand_negneg(padded), closer))
        assert completed.verdict == "Complete"


# --------------------------------------------------------------------- 03

def test_03_ext_agrees_with_subset_on_every_short_pair():
    """ext(y, z) must equal naive set containment for all pairs of lists of
    length at most 4 over a 3-formula alphabet (121 x 121 pairs), both as a
    relation and as the checker's Ext acceptance."""
    alphabet = (P, Q, Neg(P))
    lists = [
        tuple(combo)
        for n in range(5)
        for combo in itertools.product(alphabet, repeat=n)
    ]
    assert len(lists) == 1 + 3 + 9 + 27 + 81

    mismatches = 0
    for y in lists:
        for z in lists:
            # Independent oracle: quadratic structural containment.
            oracle = all(any(a == b for b in y) for a in z)
            if ext(y, z) is not oracle:
                mismatches += 1
            # The checker must accept Ext from conclusion y to target z
            # exactly when the relation holds.
            try:
                apply_rule(y, Ext(z))
                accepted = True
            except Exception:
                accepted = False
            if accepted is not oracle:
                mismatches += 1
    assert mismatches == 0


# --------------------------------------------------------------------- 04

def _total_model(rng: random.Random, size: int) -> Model:
    """A model interpreting every name the test generators can emit."""
    from helpers import FUN_NAMES, PRED_NAMES

    funcs = {}
    for name in FUN_NAMES:
        for arity in range(3):
            funcs[(name, arity)] = {
                args: rng.randrange(size)
                for args in itertools.product(range(size), repeat=arity)
            }
    preds = {}
    for name in PRED_NAMES:
        for arity in range(3):
            preds[(name, arity)] = frozenset(
                rows
                for rows in itertools.product(range(size), repeat=arity)
                if rng.random() < 0.5
            )
    return Model(size=size, funcs=funcs, preds=preds)


def test_04_substitution_commutes_with_evaluation_on_1000_random_cases():
    """eval(instantiate(p, t)) must equal eval(p) under the environment
    extended with t's value — checked as exact boolean equality."""
    rng = random.Random(4042026)
    for _ in range(1000):
        p = random_formula(rng, size=rng.randint(1, 12))
        t = random_term(rng, depth=rng.randrange(3), size=rng.randint(1, 6))
        size = rng.randint(1, 3)
        model = _total_model(rng, size)
        env = Environment(tuple(rng.randrange(size) for _ in range(4)))

        lhs = eval_formula(instantiate(p, t), model, env)
        rhs = eval_formula(p, model, env.prepend(eval_term(t, model, env)))
        assert lhs == rhs


# --------------------------------------------------------------------- 05

@pytest.mark.xfail(
    strict=True,
    reason="the bundled hand derivation takes 34 steps under this checker's "
    "step count; no derivation within 25 steps has been found, and the "
    "bound is kept red rather than relaxed",
)
def test_05a_bundled_rich_grandfather_script_within_25_steps():
    proof = parse_script((CORPUS / "rich_grandfather.secav").read_text())
    report = check_proof(proof)
    assert report.verdict == "Complete"
    assert report.steps <= 25


def test_05b_prover_closes_rich_grandfather_within_desk_budget():
    goal = _rich_grandfather()
    started = time.perf_counter()
    outcome = prove((goal,), SearchBudget(deadline=10.0))
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    assert isinstance(outcome, Proved)
    report = check_proof(outcome.proof)
    assert report.verdict == "Complete"


# --------------------------------------------------------------------- 06

_LEAVES = (P, Q, FALSITY)
_OPS = (Imp, Dis, Con)


def _strata(max_connectives: int) -> list[list]:
    """strata[k] = every formula with exactly k binary connectives over
    two atoms and falsity.  Layer sizes follow C(k) * 3^k * 3^(k+1)."""
    strata = [list(_LEAVES)]
    for k in range(1, max_connectives + 1):
        layer = []
        for left_k in range(k):
            for left in strata[left_k]:
                for right in strata[k - 1 - left_k]:
                    for op in _OPS:
                        layer.append(op(left, right))
        strata.append(layer)
    return strata


def _random_stratum_formula(rng: random.Random, k: int):
    if k == 0:
        return rng.choice(_LEAVES)
    left_k = rng.randrange(k)
    return rng.choice(_OPS)(
        _random_stratum_formula(rng, left_k),
        _random_stratum_formula(rng, k - 1 - left_k),
    )


def test_06_propositional_prover_matches_truth_tables():
    """prove() must agree with truth-table validity on quantifier-free
    formulas over two atoms: exhaustively for up to 4 connectives (287,013
    formulas), and on 20,000 seeded samples each at 5, 6, and 7 connectives.
    The full 7-connective universe holds ~6.4e9 formulas, far beyond any
    5-minute budget, so the deeper strata are sampled instead — see the
    stratum counts asserted below for what 'exhaustive' covers.
    """
    started = time.perf_counter()
    budget = SearchBudget(max_gamma=2, max_expansions=200_000, deadline=60.0)

    strata = _strata(4)
    assert [len(layer) for layer in strata] == [3, 27, 486, 10_935, 275_562]

    checked = valid_count = 0
    for layer in strata:
        for formula in layer:
            proved = isinstance(prove((formula,), budget), Proved)
            assert proved == prop_valid(formula), render_formula(formula)
            checked += 1
            valid_count += proved

    rng = random.Random(662026)
    for k in (5, 6, 7):
        for _ in range(20_000):
            formula = _random_stratum_formula(rng, k)
            proved = isinstance(prove((formula,), budget), Proved)
            assert proved == prop_valid(formula), render_formula(formula)
            checked += 1

    elapsed = time.perf_counter() - started
    assert checked == 287_013 + 60_000
    assert 0 < valid_count < checked  # both verdicts genuinely exercised
    assert elapsed < 300.0


# --------------------------------------------------------------------- 07

def _axioms_for(path: Path):
    name = "system-w" if path.name.startswith("system_w") else "fallback"
    return load_axioms((CORPUS / "axioms" / f"{name}.axioms").read_text())


def _corpus_proofs():
    """Every proof script in the corpus with its checked report."""
    for path in sorted(CORPUS.rglob("*")):
        if path.suffix not in (".secav", ".nd", ".wproof"):
            continue
        proof = parse_script(path.read_text())
        if isinstance(proof, WProof):
            report = check_w_proof(proof, _axioms_for(path))
        elif isinstance(proof, ScProof):
            report = check_proof(proof)
        else:
            report = check_nd_proof(proof)
        yield path, proof, report


def _formula_reading(proof):
    """The single formula a proof claims: disjunction reading of a sequent
    root, implication reading of a judgment, goal line of a Hilbert proof."""
    if isinstance(proof, ScProof):
        out = proof.conclusion[-1]
        for q in reversed(proof.conclusion[:-1]):
            out = Dis(q, out)
        return out
    if isinstance(proof, NdProof):
        out = proof.conclusion.goal
        for a in reversed(proof.conclusion.assumptions):
            out = Imp(a, out)
        return out
    return proof.lines[-1].formula


def test_07_no_corpus_theorem_has_a_countermodel_up_to_size_3():
    """Empirical soundness: every Complete bundled proof concludes a formula
    with no finite countermodel through domain size 3."""
    complete = 0
    appendix = 0
    for path, proof, report in _corpus_proofs():
        assert report.verdict == "Complete", path
        complete += 1
        appendix += path.name.startswith("appendix_")
        outcome = countermodel_search(
            _formula_reading(proof), 3, budget=10_000_000
        )
        assert isinstance(outcome, Exhausted), path
    assert complete >= 24
    assert appendix == 3


# --------------------------------------------------------------------- 08

def test_08_judgments_translate_to_provable_sequents_and_valid_images():
    """Every bundled judgment proof yields a sequent the prover closes, and
    the bundled sequent images of propositional judgments are confirmed by
    truth tables.  Zero failures tolerated."""
    natural = sorted(CORPUS.glob("natural/*.nd"))
    assert natural
    for path in natural:
        nd = parse_script(path.read_text())
        assert check_nd_proof(nd).verdict == "Complete", path
        sequent = to_sequent(nd.conclusion)
        outcome = prove(sequent, SearchBudget(deadline=10.0))
        assert isinstance(outcome, Proved), path
        assert check_proof(outcome.proof).verdict == "Complete", path

    images = sorted(CORPUS.glob("sequent/image_*.secav"))
    assert images
    for path in images:
        sc = parse_script(path.read_text())
        assert check_proof(sc).verdict == "Complete", path
        nd = parse_script(
            (CORPUS / "natural" / f"{path.stem.removeprefix('image_')}.nd")
            .read_text()
        )
        # The image file really is the judgment's sequent translation ...
        assert sc.conclusion == to_sequent(nd.conclusion), path
        # ... and the judgment read as an implication is a tautology.
        assert prop_valid(_formula_reading(nd)), path


# --------------------------------------------------------------------- 09

def test_09_axiom_search_reaches_truth_and_identity_under_both_axiom_sets():
    """Forward search from each bundled axiom file must find Truth and
    p --> p within depth 8, and both proofs must re-check Complete."""
    for axiom_file in ("fallback.axioms", "system-w.axioms"):
        axioms = load_axioms((CORPUS / "axioms" / axiom_file).read_text())
        for goal in (TRUTH, Imp(P, P)):
            proof = search_proof(goal, axioms, depth=8)
            assert proof is not None, (axiom_file, goal)
            assert proof.lines[-1].formula == goal
            assert check_w_proof(proof, axioms).verdict == "Complete"


# --------------------------------------------------------------------- 10

def test_10_service_replays_to_byte_identical_state_after_crash(tmp_path):
    """One hundred random API calls, a hard crash at four points, and a
    replayed twin must serve byte-identical session state each time."""
    import test_service

    test_service.TestDurability().test_hundred_calls_crash_and_replay_byte_identical(
        tmp_path
    )
