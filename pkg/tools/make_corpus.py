"""Regenerate the bundled proof corpus.

Run from the repository root:

    python3 tools/make_corpus.py

Every file is checked against the relevant kernel before it is written, so
the corpus can never drift out of sync with the checkers.
"""
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from proofkit import natural, sequent
from proofkit.hilbert import (
    AxiomStep,
    WLine,
    WProof,
    check_w_proof,
    load_axioms,
    search_proof,
)
from proofkit.natural import NDJudgment, NdProof, check_nd_proof, to_sequent
from proofkit.notation import render_formula
from proofkit.scripts import (
    render_nd_script,
    render_sc_script,
    render_w_script,
)
from proofkit.sequent import ScProof, check_proof
from proofkit.syntax import (
    FALSITY,
    Con,
    Dis,
    Exi,
    Formula,
    Fun,
    Imp,
    Neg,
    Pre,
    Sequent,
    Uni,
    Var,
)
from proofkit.tableau import Proved, prove

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

P = Pre("p")
Q = Pre("q")
A = Fun("a")
B = Fun("b")


def r(t):
    return Pre("r", (t,))


def q1(t):
    return Pre("q", (t,))


def f(t):
    return Fun("f", (t,))


def big(s, t):
    return Pre("big", (s, t))


EXERCISES: list[tuple[str, Formula]] = [
    ("identity", Imp(P, P)),
    ("weakening", Imp(P, Imp(Q, P))),
    ("self_distribution", Imp(Imp(P, Imp(Q, Pre("s"))),
                              Imp(Imp(P, Q), Imp(P, Pre("s"))))),
    ("peirce", Imp(Imp(Imp(P, Q), P), P)),
    ("double_negation_elim", Imp(Neg(Neg(P)), P)),
    ("double_negation_intro", Imp(P, Neg(Neg(P)))),
    ("contraposition", Imp(Imp(P, Q), Imp(Neg(Q), Neg(P)))),
    ("contraposition_converse", Imp(Imp(Neg(Q), Neg(P)), Imp(P, Q))),
    ("de_morgan_con", Imp(Neg(Con(P, Q)), Dis(Neg(P), Neg(Q)))),
    ("de_morgan_dis", Imp(Neg(Dis(P, Q)), Con(Neg(P), Neg(Q)))),
    ("excluded_middle", Dis(P, Neg(P))),
    ("con_commute", Imp(Con(P, Q), Con(Q, P))),
    ("dis_commute", Imp(Dis(P, Q), Dis(Q, P))),
    ("ex_falso", Imp(FALSITY, P)),
    ("uni_elim", Imp(Uni(r(Var(0))), r(A))),
    ("exi_intro", Imp(r(A), Exi(r(Var(0))))),
    ("quantifier_dual_uni", Imp(Neg(Uni(r(Var(0)))), Exi(Neg(r(Var(0)))))),
    ("quantifier_dual_exi", Imp(Neg(Exi(r(Var(0)))), Uni(Neg(r(Var(0)))))),
    ("uni_swap", Imp(Uni(Uni(big(Var(1), Var(0)))),
                     Uni(Uni(big(Var(0), Var(1)))))),
    ("exi_uni_swap", Imp(Exi(Uni(big(Var(1), Var(0)))),
                         Uni(Exi(big(Var(0), Var(1)))))),
    ("uni_con_distrib", Imp(Uni(Con(r(Var(0)), q1(Var(0)))),
                            Con(Uni(r(Var(0))), Uni(q1(Var(0)))))),
    ("exi_dis_distrib", Imp(Exi(Dis(r(Var(0)), q1(Var(0)))),
                            Dis(Exi(r(Var(0))), Exi(q1(Var(0)))))),
    ("uni_imp_exi", Imp(Uni(r(Var(0))), Exi(r(Var(0))))),
    ("exi_con_weaken", Imp(Exi(Con(r(Var(0)), q1(Var(0)))), Exi(r(Var(0))))),
]


def leaf(s: Sequent) -> ScProof:
    return ScProof(tuple(s), sequent.Basic())


def node(s: Sequent, rule, *premises: ScProof) -> ScProof:
    return ScProof(tuple(s), rule, tuple(premises))


def close(s: Sequent, positive: Formula) -> ScProof:
    """Rotate so `positive` leads, then close against its negation."""
    target = (positive, Neg(positive))
    return node(tuple(s), sequent.Ext(target), leaf(target))


def drinkerish_proof() -> ScProof:
    """A formula whose existential must be instantiated twice.

    The derivation starts by duplicating the existential with Ext so that a
    second witness is still available after the first instantiation burns
    one copy.
    """
    d = Exi(Imp(r(Var(0)), Uni(r(Var(0)))))
    inst_a = Imp(r(A), Uni(r(Var(0))))
    inst_b = Imp(r(B), Uni(r(Var(0))))
    uni = Uni(r(Var(0)))
    return node(
        (d,),
        sequent.Ext((d, d)),
        node(
            (d, d),
            sequent.GammaExi(A),
            node(
                (inst_a, d),
                sequent.AlphaImp(),
                node(
                    (Neg(r(A)), uni, d),
                    sequent.Ext((uni, d, Neg(r(A)))),
                    node(
                        (uni, d, Neg(r(A))),
                        sequent.DeltaUni("b"),
                        node(
                            (r(B), d, Neg(r(A))),
                            sequent.Ext((d, r(B), Neg(r(A)))),
                            node(
                                (d, r(B), Neg(r(A))),
                                sequent.GammaExi(B),
                                node(
                                    (inst_b, r(B), Neg(r(A))),
                                    sequent.AlphaImp(),
                                    close(
                                        (Neg(r(B)), uni, r(B), Neg(r(A))),
                                        r(B),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )


def modus_ponens_proof() -> ScProof:
    """Detachment, showing how a beta rule branches the derivation."""
    goal = Imp(Con(Imp(P, Q), P), Q)
    return node(
        (goal,),
        sequent.AlphaImp(),
        node(
            (Neg(Con(Imp(P, Q), P)), Q),
            sequent.AlphaCon(),
            node(
                (Neg(Imp(P, Q)), Neg(P), Q),
                sequent.BetaImp(),
                leaf((P, Neg(P), Q)),
                close((Neg(Q), Neg(P), Q), Q),
            ),
        ),
    )


def uni_pair_proof() -> ScProof:
    """Two instances of one universal feed the two branches of a conjunction."""
    uni = Uni(r(Var(0)))
    goal = Imp(uni, Con(r(A), r(B)))
    pair = Con(r(A), r(B))
    return node(
        (goal,),
        sequent.AlphaImp(),
        node(
            (Neg(uni), pair),
            sequent.Ext((Neg(uni), Neg(uni), pair)),
            node(
                (Neg(uni), Neg(uni), pair),
                sequent.GammaUni(A),
                node(
                    (Neg(r(A)), Neg(uni), pair),
                    sequent.Ext((Neg(uni), Neg(r(A)), pair)),
                    node(
                        (Neg(uni), Neg(r(A)), pair),
                        sequent.GammaUni(B),
                        node(
                            (Neg(r(B)), Neg(r(A)), pair),
                            sequent.Ext((pair, Neg(r(A)), Neg(r(B)))),
                            node(
                                (pair, Neg(r(A)), Neg(r(B))),
                                sequent.BetaCon(),
                                leaf((r(A), Neg(r(A)), Neg(r(B)))),
                                leaf((r(B), Neg(r(A)), Neg(r(B)))),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )


def rich_grandfather_proof() -> ScProof:
    """If every non-rich person has a rich father, someone rich has a rich
    grandfather.

    Seven instances are needed (four of the universal, three of the
    existential); the tree below realises them in 34 checked steps, with
    each closure landing next to the literal it needs.
    """
    uni = Uni(Imp(Neg(r(Var(0))), r(f(Var(0)))))
    exi = Exi(Con(r(Var(0)), r(f(f(Var(0))))))
    na = Neg(uni)

    fa = f(A)
    ffa = f(fa)
    f3a = f(ffa)
    f4a = f(f3a)

    def u(t):
        # Instance of the negated universal at t.
        return Neg(Imp(Neg(r(t)), r(f(t))))

    def c(t):
        # Instance of the existential at t.
        return Con(r(t), r(f(f(t))))

    def half(mid, low):
        """One half of the tree: the case split driven by r(mid).

        Requires mid == f(low): the existential witnessed at `low` then
        closes against the universal instances at `low` and `mid`.
        """
        seq0 = (r(mid), na, exi)
        seq1 = (na, na, exi, r(mid))
        # The first branch of u(mid) denies r(mid) itself.
        deny_mid = close((Neg(r(mid)), na, exi, r(mid)), r(mid))
        deny_next = (Neg(r(f(mid))), na, exi, r(mid))
        seq2 = (na, exi, Neg(r(f(mid))), r(mid))
        after_u_low = (u(low), exi, Neg(r(f(mid))), r(mid))
        deny_low = (Neg(r(low)), exi, Neg(r(f(mid))), r(mid))
        seq3 = (exi, Neg(r(low)), Neg(r(f(mid))))
        after_c_low = (c(low), Neg(r(low)), Neg(r(f(mid))))
        return node(
            seq0,
            sequent.Ext(seq1),
            node(
                seq1,
                sequent.GammaUni(mid),
                node(
                    (u(mid), na, exi, r(mid)),
                    sequent.BetaImp(),
                    deny_mid,
                    node(
                        deny_next,
                        sequent.Ext(seq2),
                        node(
                            seq2,
                            sequent.GammaUni(low),
                            node(
                                after_u_low,
                                sequent.BetaImp(),
                                node(
                                    deny_low,
                                    sequent.Ext(seq3),
                                    node(
                                        seq3,
                                        sequent.GammaExi(low),
                                        node(
                                            after_c_low,
                                            sequent.BetaCon(),
                                            leaf((r(low), Neg(r(low)),
                                                  Neg(r(f(mid))))),
                                            leaf((r(f(f(low))), Neg(r(low)),
                                                  Neg(r(f(mid))))),
                                        ),
                                    ),
                                ),
                                close(
                                    (Neg(r(f(low))), exi,
                                     Neg(r(f(mid))), r(mid)),
                                    r(mid),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        )

    goal = Imp(uni, exi)
    return node(
        (goal,),
        sequent.AlphaImp(),
        node(
            (na, exi),
            sequent.Ext((exi, na, exi)),
            node(
                (exi, na, exi),
                sequent.GammaExi(fa),
                node(
                    (c(fa), na, exi),
                    sequent.BetaCon(),
                    half(fa, A),
                    half(f3a, ffa),
                ),
            ),
        ),
    )


def nd_proofs() -> list[tuple[str, NdProof]]:
    def nd(goal, assumptions, rule, *premises):
        return NdProof(NDJudgment(goal, tuple(assumptions)), rule,
                       tuple(premises))

    en = Dis(P, Neg(P))
    out = []

    out.append(("identity", nd(
        Imp(P, P), (), natural.ImpI(),
        nd(P, (P,), natural.Assume()),
    )))

    mp_asms = (Imp(P, Q), P)
    out.append(("modus_ponens", nd(
        Q, mp_asms, natural.ImpE(P),
        nd(Imp(P, Q), mp_asms, natural.Assume()),
        nd(P, mp_asms, natural.Assume()),
    )))

    out.append(("con_swap", nd(
        Con(Q, P), (Con(P, Q),), natural.ConI(),
        nd(Q, (Con(P, Q),), natural.ConE2(P),
           nd(Con(P, Q), (Con(P, Q),), natural.Assume())),
        nd(P, (Con(P, Q),), natural.ConE1(Q),
           nd(Con(P, Q), (Con(P, Q),), natural.Assume())),
    )))

    out.append(("dis_swap", nd(
        Dis(Q, P), (Dis(P, Q),), natural.DisE(P, Q),
        nd(Dis(P, Q), (Dis(P, Q),), natural.Assume()),
        nd(Dis(Q, P), (P, Dis(P, Q)), natural.DisI2(),
           nd(P, (P, Dis(P, Q)), natural.Assume())),
        nd(Dis(Q, P), (Q, Dis(P, Q)), natural.DisI1(),
           nd(Q, (Q, Dis(P, Q)), natural.Assume())),
    )))

    out.append(("uni_elim", nd(
        r(A), (Uni(r(Var(0))),), natural.UniE(r(Var(0)), A),
        nd(Uni(r(Var(0))), (Uni(r(Var(0))),), natural.Assume()),
    )))

    out.append(("exi_intro", nd(
        Exi(r(Var(0))), (r(A),), natural.ExiI(A),
        nd(r(A), (r(A),), natural.Assume()),
    )))

    out.append(("excluded_middle", nd(
        en, (), natural.Boole(),
        nd(FALSITY, (Neg(en),), natural.ImpE(en),
           nd(Neg(en), (Neg(en),), natural.Assume()),
           nd(en, (Neg(en),), natural.DisI2(),
              nd(Neg(P), (Neg(en),), natural.ImpI(),
                 nd(FALSITY, (P, Neg(en)), natural.ImpE(en),
                    nd(Neg(en), (P, Neg(en)), natural.Assume()),
                    nd(en, (P, Neg(en)), natural.DisI1(),
                       nd(P, (P, Neg(en)), natural.Assume())))))),
    )))

    return out


def w_proofs() -> list[tuple[str, WProof, str]]:
    fallback = load_axioms((CORPUS / "axioms" / "fallback.axioms").read_text())
    system_w = load_axioms((CORPUS / "axioms" / "system-w.axioms").read_text())
    out = []

    found = search_proof(Imp(P, P), fallback, depth=4)
    assert found is not None
    out.append(("fallback_identity", found, "fallback.axioms"))

    found = search_proof(TRUTH_GOAL, fallback, depth=4)
    assert found is not None
    out.append(("fallback_truth", found, "fallback.axioms"))

    dne = WProof((WLine(1, Imp(Neg(Neg(P)), P), AxiomStep(3, (("A", P),))),))
    out.append(("fallback_double_negation", dne, "fallback.axioms"))

    found = search_proof(Imp(P, P), system_w, depth=4)
    assert found is not None
    out.append(("system_w_identity", found, "system-w.axioms"))

    efq = WProof((WLine(1, Imp(FALSITY, P), AxiomStep(4, (("A", P),))),))
    out.append(("system_w_ex_falso", efq, "system-w.axioms"))

    return out


TRUTH_GOAL = Imp(FALSITY, FALSITY)


def write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path.relative_to(ROOT)}")


def main() -> None:
    for index, (name, formula) in enumerate(EXERCISES, start=1):
        got = prove((formula,))
        assert isinstance(got, Proved), name
        report = check_proof(got.proof)
        assert report.verdict == "Complete", name
        header = f"# {name}: {render_formula(formula)}\n"
        write(CORPUS / "sequent" / f"ex{index:02d}_{name}.secav",
              header + render_sc_script(got.proof))

    by_hand = [
        ("appendix_drinkerish", drinkerish_proof()),
        ("appendix_modus_ponens", modus_ponens_proof()),
        ("appendix_uni_pair", uni_pair_proof()),
    ]
    for name, pf in by_hand:
        report = check_proof(pf)
        assert report.verdict == "Complete", (name, report)
        header = f"# {name}: {render_formula(pf.conclusion[0])}\n"
        write(CORPUS / "sequent" / f"{name}.secav",
              header + render_sc_script(pf))

    rich = rich_grandfather_proof()
    report = check_proof(rich)
    assert report.verdict == "Complete", report
    print(f"rich grandfather: {report.steps} steps")
    header = (
        "# If every person that is not rich has a rich father,\n"
        "# then some rich person must have a rich grandfather.\n"
        f"# {render_formula(rich.conclusion[0])}\n"
    )
    write(CORPUS / "rich_grandfather.secav", header + render_sc_script(rich))

    nds = nd_proofs()
    for name, pf in nds:
        report = check_nd_proof(pf)
        assert report.verdict == "Complete", (name, report)
        write(CORPUS / "natural" / f"{name}.nd", render_nd_script(pf))

    # Sequent images of the propositional deduction proofs, for the
    # cross-system correspondence checks.
    for name in ("modus_ponens", "con_swap"):
        pf = dict(nds)[name]
        image = to_sequent(pf.conclusion)
        got = prove(image)
        assert isinstance(got, Proved), name
        header = f"# image of {name}.nd under the negated-assumption reading\n"
        write(CORPUS / "sequent" / f"image_{name}.secav",
              header + render_sc_script(got.proof))

    for name, pf, axiom_file in w_proofs():
        axioms = load_axioms((CORPUS / "axioms" / axiom_file).read_text())
        report = check_w_proof(pf, axioms)
        assert report.verdict == "Complete", (name, report)
        write(CORPUS / "hilbert" / f"{name}.wproof", render_w_script(pf))


if __name__ == "__main__":
    main()
