"""Checker and search for the implication-fragment line proofs.

The five-line derivation of p --> p used throughout was checked by hand:

    1. (p -> ((p->p) -> p)) -> ((p -> (p->p)) -> (p -> p))   axiom 2
    2. p -> ((p->p) -> p)                                    axiom 1
    3. (p -> (p->p)) -> (p -> p)                             MP 2 1
    4. p -> (p->p)                                           axiom 1
    5. p -> p                                                MP 4 3
"""
from __future__ import annotations

import random
from pathlib import Path

import pytest

from proofkit.errors import FormatError, NotPropositional
from proofkit.hilbert import (
    AxiomStep,
    MPStep,
    Schema,
    WLine,
    WProof,
    apply_subst,
    check_w_proof,
    ensure_prop,
    load_axioms,
    match_schema,
    search_proof,
)
from proofkit.syntax import FALSITY, Exi, Imp, Pre, Var

AXIOM_DIR = Path(__file__).resolve().parent.parent / "corpus" / "axioms"

P = Pre("p")
Q = Pre("q")
A = Pre("A")
B = Pre("B")
K_SCHEMA = Schema(Imp(A, Imp(B, A)))


@pytest.fixture(scope="module")
def fallback():
    return load_axioms(AXIOM_DIR.joinpath("fallback.axioms").read_text())


@pytest.fixture(scope="module")
def system_w():
    return load_axioms(AXIOM_DIR.joinpath("system-w.axioms").read_text())


def lines_of(*entries) -> WProof:
    return WProof(
        tuple(WLine(i, f, j) for i, (f, j) in enumerate(entries, start=1))
    )


class TestSchemas:
    def test_match_binds_each_metavariable(self):
        got = match_schema(Imp(P, Imp(Q, P)), K_SCHEMA)
        assert got == {"A": P, "B": Q}

    def test_match_requires_consistent_repeats(self):
        assert match_schema(Imp(P, Imp(Q, Q)), K_SCHEMA) is None
        identity = Schema(Imp(A, A))
        assert match_schema(Imp(P, P), identity) == {"A": P}
        assert match_schema(Imp(P, Q), identity) is None

    def test_match_treats_lowercase_atoms_as_constants(self):
        schema = Schema(Imp(P, A))
        assert match_schema(Imp(P, Q), schema) == {"A": Q}
        assert match_schema(Imp(Q, Q), schema) is None

    def test_match_can_bind_falsity_and_implications(self):
        target = Imp(FALSITY, Imp(Imp(P, Q), FALSITY))
        assert match_schema(target, K_SCHEMA) == {"A": FALSITY, "B": Imp(P, Q)}

    def test_apply_subst_rebuilds_the_instance(self):
        inst = apply_subst(K_SCHEMA.pattern, {"A": Imp(P, Q), "B": FALSITY})
        assert inst == Imp(Imp(P, Q), Imp(FALSITY, Imp(P, Q)))

    def test_apply_subst_rejects_unbound_metavariables(self):
        with pytest.raises(KeyError):
            apply_subst(K_SCHEMA.pattern, {"A": P})

    def test_metavariables_are_uppercase_atoms(self):
        schema = Schema(Imp(Pre("Goal"), Imp(P, Pre("Goal"))))
        assert schema.metavariables() == {"Goal"}


class TestLoadAxioms:
    def test_fallback_file_has_three_schemas(self, fallback):
        assert len(fallback) == 3
        assert fallback[0].pattern == Imp(A, Imp(B, A))

    def test_system_w_file_has_four_schemas(self, system_w):
        assert len(system_w) == 4
        assert system_w[3].pattern == Imp(FALSITY, A)

    def test_comments_and_blanks_are_skipped(self):
        schemas = load_axioms("# leading\n\nA --> A  # not a comment marker\n")
        # '#' only opens a comment; the parser sees the text before it.
        assert schemas == [Schema(Imp(A, A))]

    def test_non_tautology_is_rejected(self):
        with pytest.raises(FormatError, match="not a tautology"):
            load_axioms("A --> B\n")

    def test_quantified_schema_is_rejected(self):
        with pytest.raises(NotPropositional):
            load_axioms("exists x. P(x)\n")

    def test_empty_file_is_rejected(self):
        with pytest.raises(FormatError, match="no schemas"):
            load_axioms("# only a comment\n")


class TestEnsureProp:
    def test_accepts_the_implication_fragment(self):
        ensure_prop(Imp(Imp(P, FALSITY), FALSITY))

    def test_rejects_quantifiers_and_argument_atoms(self):
        with pytest.raises(NotPropositional):
            ensure_prop(Exi(Pre("p", (Var(0),))))
        with pytest.raises(NotPropositional):
            ensure_prop(Pre("p", (Var(0),)))


PP = Imp(P, P)
FIVE_LINES = (
    (Imp(Imp(P, Imp(PP, P)), Imp(Imp(P, PP), PP)),
     AxiomStep(2, (("A", P), ("B", PP), ("C", P)))),
    (Imp(P, Imp(PP, P)), AxiomStep(1, (("A", P), ("B", PP)))),
    (Imp(Imp(P, PP), PP), MPStep(2, 1)),
    (Imp(P, PP), AxiomStep(1, (("A", P), ("B", P)))),
    (PP, MPStep(4, 3)),
)


class TestCheckWProof:
    def test_single_axiom_instance_is_complete(self, fallback):
        pf = lines_of((Imp(P, Imp(Q, P)), AxiomStep(1, (("A", P), ("B", Q)))))
        report = check_w_proof(pf, fallback)
        assert report.verdict == "Complete"
        assert report.steps == 1
        assert report.rules_used == {"Ax": 1}

    def test_five_line_identity_proof(self, fallback):
        report = check_w_proof(lines_of(*FIVE_LINES), fallback)
        assert report.verdict == "Complete"
        assert report.steps == 5
        assert report.rules_used == {"Ax": 3, "MP": 2}

    def test_bare_atom_is_not_an_axiom_instance(self, fallback):
        pf = lines_of((P, AxiomStep(1, (("A", P),))))
        report = check_w_proof(pf, fallback)
        assert report.verdict == "Invalid"
        assert report.error_code == "BadAxiomInstance"
        assert report.error_path == (0,)

    def test_wrong_instance_is_flagged(self, fallback):
        pf = lines_of((Imp(P, Imp(Q, Q)), AxiomStep(1, (("A", Q), ("B", Q)))))
        report = check_w_proof(pf, fallback)
        assert report.verdict == "Invalid"
        assert report.error_code == "BadAxiomInstance"

    def test_axiom_index_out_of_range(self, fallback):
        pf = lines_of((Imp(P, Imp(Q, P)), AxiomStep(9, (("A", P), ("B", Q)))))
        assert check_w_proof(pf, fallback).error_code == "BadAxiomInstance"

    def test_missing_metavariable_binding(self, fallback):
        pf = lines_of((Imp(P, Imp(Q, P)), AxiomStep(1, (("A", P),))))
        assert check_w_proof(pf, fallback).error_code == "BadAxiomInstance"

    def test_bad_mp_cites_the_offending_line(self, fallback):
        pf = lines_of(
            (Imp(P, Imp(Q, P)), AxiomStep(1, (("A", P), ("B", Q)))),
            (Imp(P, Imp(P, P)), AxiomStep(1, (("A", P), ("B", P)))),
            (Q, MPStep(1, 2)),
        )
        report = check_w_proof(pf, fallback)
        assert report.verdict == "Invalid"
        assert report.error_code == "BadMP"
        assert report.error_path == (2,)
        assert report.rules_used == {"Ax": 2, "MP": 1}

    def test_forward_and_self_references_are_rejected(self, fallback):
        pf = lines_of((P, MPStep(1, 2)))
        report = check_w_proof(pf, fallback)
        assert report.error_code == "ForwardReference"
        assert report.error_path == (0,)

    def test_first_failure_wins(self, fallback):
        pf = lines_of(
            (P, AxiomStep(1, ())),
            (Q, MPStep(5, 6)),
        )
        report = check_w_proof(pf, fallback)
        assert report.error_path == (0,)
        assert report.error_code == "BadAxiomInstance"


class TestSearch:
    def test_finds_identity_and_recheck_passes(self, fallback):
        pf = search_proof(PP, fallback)
        assert pf is not None
        assert pf.conclusion == PP
        assert check_w_proof(pf, fallback).verdict == "Complete"

    def test_identity_needs_two_leaf_assignments(self, fallback):
        # The derivation instantiates B with p --> p, a two-leaf formula,
        # so the one-leaf round cannot find it.
        assert search_proof(PP, fallback, depth=1) is None
        assert search_proof(PP, fallback, depth=2) is not None

    def test_finds_falsity_identity(self, fallback):
        pf = search_proof(Imp(FALSITY, FALSITY), fallback)
        assert pf is not None
        assert check_w_proof(pf, fallback).verdict == "Complete"

    def test_direct_axiom_instance_is_a_one_liner(self, fallback):
        goal = Imp(Imp(Imp(P, FALSITY), FALSITY), P)
        pf = search_proof(goal, fallback, depth=1)
        assert pf is not None
        assert len(pf.lines) == 1
        assert pf.lines[0].just == AxiomStep(3, (("A", P),))

    def test_weakened_identity(self, fallback):
        pf = search_proof(Imp(Q, PP), fallback)
        assert pf is not None
        assert check_w_proof(pf, fallback).verdict == "Complete"

    def test_unprovable_atom_returns_none(self, fallback):
        assert search_proof(P, fallback) is None

    def test_search_is_deterministic(self, fallback):
        first = search_proof(PP, fallback)
        second = search_proof(PP, fallback)
        assert first == second

    def test_cancel_stops_immediately(self, fallback):
        assert search_proof(PP, fallback, cancel=lambda: True) is None

    def test_system_w_also_proves_identity(self, system_w):
        pf = search_proof(PP, system_w)
        assert pf is not None
        assert check_w_proof(pf, system_w).verdict == "Complete"

    def test_system_w_ex_falso_is_direct(self, system_w):
        pf = search_proof(Imp(FALSITY, P), system_w, depth=1)
        assert pf is not None
        assert pf.lines[0].just == AxiomStep(4, (("A", P),))

    def test_rejects_quantified_goals(self, fallback):
        with pytest.raises(NotPropositional):
            search_proof(Exi(Pre("p", (Var(0),))), fallback)

    def test_random_axiom_instances_are_found(self, fallback):
        rng = random.Random(20260822)
        atoms = [P, Q, FALSITY]

        def tiny(depth: int):
            if depth == 0 or rng.random() < 0.5:
                return rng.choice(atoms)
            return Imp(tiny(depth - 1), tiny(depth - 1))

        for _ in range(25):
            schema = fallback[rng.randrange(len(fallback))]
            subst = {name: tiny(1) for name in sorted(schema.metavariables())}
            goal = apply_subst(schema.pattern, subst)
            pf = search_proof(goal, fallback, depth=4)
            assert pf is not None, goal
            assert pf.conclusion == goal
            assert check_w_proof(pf, fallback).verdict == "Complete"
