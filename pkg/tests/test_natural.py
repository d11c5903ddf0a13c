"""Natural deduction kernel: rule table, applicability, sequent image."""
from __future__ import annotations

import pytest

from proofkit.errors import FreshnessViolation, GoalMismatch, WitnessMismatch
from proofkit.natural import (
    Assume,
    Boole,
    ConE1,
    ConE2,
    ConI,
    DisE,
    DisI1,
    DisI2,
    ExiE,
    ExiI,
    ImpE,
    ImpI,
    NDJudgment,
    NdProof,
    UniE,
    UniI,
    applicable_nd_rules,
    apply_nd_rule,
    check_nd_proof,
    rule_from_json,
    rule_to_json,
    to_sequent,
)
from proofkit.syntax import (
    Con,
    Dis,
    Exi,
    FALSITY,
    Fun,
    Imp,
    Neg,
    Pre,
    Uni,
    Var,
)

p = Pre("p")
q = Pre("q")
r = Pre("r")
P0 = Pre("P", (Var(0),))
J = NDJudgment


def test_assume_closes_a_listed_goal():
    assert apply_nd_rule(J(p, (q, p)), Assume()) == ()
    with pytest.raises(GoalMismatch):
        apply_nd_rule(J(p, (q,)), Assume())
    with pytest.raises(GoalMismatch):
        apply_nd_rule(J(p, ()), Assume())


def test_golden_rule_table():
    assert apply_nd_rule(J(p, (q,)), Boole()) == (J(FALSITY, (Neg(p), q)),)
    assert apply_nd_rule(J(Imp(p, q), ()), ImpI()) == (J(q, (p,)),)
    assert apply_nd_rule(J(q, (r,)), ImpE(p)) == (J(Imp(p, q), (r,)), J(p, (r,)))
    assert apply_nd_rule(J(Con(p, q), (r,)), ConI()) == (J(p, (r,)), J(q, (r,)))
    assert apply_nd_rule(J(p, ()), ConE1(q)) == (J(Con(p, q), ()),)
    assert apply_nd_rule(J(q, ()), ConE2(p)) == (J(Con(p, q), ()),)
    assert apply_nd_rule(J(Dis(p, q), ()), DisI1()) == (J(p, ()),)
    assert apply_nd_rule(J(Dis(p, q), ()), DisI2()) == (J(q, ()),)
    assert apply_nd_rule(J(r, (q,)), DisE(p, Neg(p))) == (
        J(Dis(p, Neg(p)), (q,)),
        J(r, (p, q)),
        J(r, (Neg(p), q)),
    )
    assert apply_nd_rule(J(Uni(P0), ()), UniI("c")) == (J(Pre("P", (Fun("c"),)), ()),)
    assert apply_nd_rule(J(Pre("P", (Fun("a"),)), (q,)), UniE(P0, Fun("a"))) == (
        J(Uni(P0), (q,)),
    )
    assert apply_nd_rule(J(Exi(P0), ()), ExiI(Fun("a"))) == (
        J(Pre("P", (Fun("a"),)), ()),
    )
    assert apply_nd_rule(J(q, (r,)), ExiE(P0, "c")) == (
        J(Exi(P0), (r,)),
        J(q, (Pre("P", (Fun("c"),)), r)),
    )


def test_goal_shape_mismatches():
    with pytest.raises(GoalMismatch):
        apply_nd_rule(J(p, ()), ImpI())
    with pytest.raises(GoalMismatch):
        apply_nd_rule(J(p, ()), ConI())
    with pytest.raises(GoalMismatch):
        apply_nd_rule(J(Imp(p, q), ()), DisI1())
    with pytest.raises(GoalMismatch):
        apply_nd_rule(J(p, ()), ExiI(Fun("a")))
    with pytest.raises(GoalMismatch):
        apply_nd_rule(J(Exi(P0), ()), UniI("c"))


def test_uni_elimination_verifies_the_stated_instance():
    # Goal must equal instantiate(body, term) exactly.
    with pytest.raises(WitnessMismatch):
        apply_nd_rule(J(Pre("P", (Fun("b"),)), ()), UniE(P0, Fun("a")))
    # Vacuous binders are fine: any goal instantiates a constant body.
    assert apply_nd_rule(J(q, ()), UniE(q, Fun("a"))) == (J(Uni(q), ()),)


def test_freshness_side_conditions():
    with pytest.raises(FreshnessViolation):
        apply_nd_rule(J(Uni(P0), (Pre("Q", (Fun("c"),)),)), UniI("c"))
    with pytest.raises(FreshnessViolation):
        apply_nd_rule(J(Uni(Pre("P", (Var(0), Fun("c")))), ()), UniI("c"))
    # ExiE checks goal, body, and assumptions.
    with pytest.raises(FreshnessViolation):
        apply_nd_rule(J(Pre("Q", (Fun("c"),)), ()), ExiE(P0, "c"))
    with pytest.raises(FreshnessViolation):
        apply_nd_rule(J(q, ()), ExiE(Pre("P", (Var(0), Fun("c"))), "c"))
    with pytest.raises(FreshnessViolation):
        apply_nd_rule(J(q, (Pre("R", (Fun("c"),)),)), ExiE(P0, "c"))


def test_to_sequent_negates_assumptions():
    assert to_sequent(J(p, (Pre("a"), Pre("b")))) == (p, Neg(Pre("a")), Neg(Pre("b")))
    assert to_sequent(J(p, ())) == (p,)
    assert to_sequent(J(FALSITY, (p, Neg(p)))) == (FALSITY, Neg(p), Neg(Neg(p)))


def names(templates) -> list[str]:
    return [t.rule for t in templates]


def test_applicable_for_an_implication_goal():
    got = applicable_nd_rules(J(Imp(p, q), ()))
    assert names(got) == [
        "Boole", "ImpE", "ImpI", "DisE", "ConE1", "ConE2", "ExiE", "UniE",
    ]
    by_name = {t.rule: t for t in got}
    assert by_name["ImpE"].needs == ("formula",)
    assert by_name["DisE"].needs == ("formula", "formula")
    assert by_name["UniE"].needs == ("formula", "term")
    assert by_name["ExiE"].needs == ("formula", "const")
    assert by_name["ExiE"].suggestion == "sk0"


def test_applicable_includes_assume_only_when_listed():
    assert "Assume" in names(applicable_nd_rules(J(p, (p,))))
    assert "Assume" not in names(applicable_nd_rules(J(p, (q,))))
    falsity = applicable_nd_rules(J(FALSITY, ()))
    assert "Assume" not in names(falsity)
    assert "Boole" in names(falsity)


def test_applicable_shape_gated_rules():
    assert "UniI" in names(applicable_nd_rules(J(Uni(P0), ())))
    assert "ExiI" in names(applicable_nd_rules(J(Exi(P0), ())))
    assert "ConI" in names(applicable_nd_rules(J(Con(p, q), ())))
    assert "DisI1" in names(applicable_nd_rules(J(Dis(p, q), ())))
    assert "UniI" not in names(applicable_nd_rules(J(p, ())))


def test_check_the_two_step_identity_proof():
    proof = NdProof(J(Imp(p, p), ()), ImpI(), (
        NdProof(J(p, (p,)), Assume()),
    ))
    report = check_nd_proof(proof)
    assert report.verdict == "Complete"
    assert report.steps == 2
    assert report.rules_used == {"ImpI": 1, "Assume": 1}


def test_check_reports_freshness_violation():
    judgment = J(Uni(P0), (Pre("Q", (Fun("c"),)),))
    proof = NdProof(judgment, UniI("c"), (
        NdProof(J(Pre("P", (Fun("c"),)), (Pre("Q", (Fun("c"),)),))),
    ))
    report = check_nd_proof(proof)
    assert report.verdict == "Invalid"
    assert report.error_code == "FreshnessViolation"
    assert report.error_path == ()


def test_check_empty_tree_is_one_open_goal():
    report = check_nd_proof(NdProof(J(p, ())))
    assert report.verdict == "Incomplete"
    assert report.open_goals == 1
    assert report.steps == 0


def test_check_a_branching_proof():
    goal = J(q, (Dis(q, q),))
    proof = NdProof(goal, DisE(q, q), (
        NdProof(J(Dis(q, q), (Dis(q, q),)), Assume()),
        NdProof(J(q, (q, Dis(q, q))), Assume()),
        NdProof(J(q, (q, Dis(q, q))), Assume()),
    ))
    report = check_nd_proof(proof)
    assert report.verdict == "Complete"
    assert report.steps == 4


def test_classical_double_negation_proof():
    # OK (~~p --> p) []: ImpI, Boole, ImpE on ~p, each side by Assume.
    nnp = Neg(Neg(p))
    proof = NdProof(J(Imp(nnp, p), ()), ImpI(), (
        NdProof(J(p, (nnp,)), Boole(), (
            NdProof(J(FALSITY, (Neg(p), nnp)), ImpE(Neg(p)), (
                NdProof(J(Neg(Neg(p)), (Neg(p), nnp)), Assume()),
                NdProof(J(Neg(p), (Neg(p), nnp)), Assume()),
            )),
        )),
    ))
    report = check_nd_proof(proof)
    assert report.verdict == "Complete"
    assert report.steps == 5


def test_rule_json_round_trip():
    rules = [
        Assume(), Boole(), ImpI(), DisI1(), DisI2(), ConI(),
        ImpE(Imp(p, q)), DisE(p, Neg(p)), ConE1(q), ConE2(Uni(P0)),
        ExiE(P0, "sk1"), ExiI(Fun("f", (Var(0),))), UniE(P0, Fun("a")),
        UniI("c"),
    ]
    for rule in rules:
        assert rule_from_json(rule_to_json(rule)) == rule
    with pytest.raises(ValueError):
        rule_from_json({"rule": "Nope"})
