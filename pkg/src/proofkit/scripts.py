"""Line-oriented text formats for proof trees and proof lines.

Three formats share one reader entry point:

* Sequent scripts.  ``goal:`` names the root sequent, then one block per
  goal: either ``open``, ``qed: Basic``, or ``by: <rule>`` with inline
  arguments (``term:``, ``const:``, ``to:``) followed by one ``sequent:``
  premise per subgoal — each restating its full sequent, one formula per
  2-space-indented line — and that premise's own block.

* Natural-deduction scripts.  Same block structure with ``judgment:``
  premises written ``<goal> |- from: <assumption>; <assumption>`` (the
  marker is always present, even with nothing after it), formula
  arguments under ``with:``, and ``qed: Assume`` closing a goal.

* Numbered Hilbert proofs.  ``k. <formula>  [Ax n {A:=..., B:=...}]`` or
  ``k. <formula>  [MP i j]``, numbered consecutively from 1.

Blank lines and full-line ``#`` comments are ignored everywhere, and every
formula or term is read in either notation, detected per line.
"""
from __future__ import annotations

import re
from typing import Union

from . import natural, sequent
from .errors import FormatError, NotPropositional, ParseError
from .hilbert import AxiomStep, MPStep, WLine, WProof, ensure_prop
from .natural import NDJudgment, NdProof
from .notation import (
    parse_formula,
    parse_sequent,
    parse_term,
    render_formula,
    render_sequent,
    render_term,
    split_top_level,
)
from .sequent import ScProof
from .syntax import Formula, Sequent, Term

Proof = Union[ScProof, NdProof, WProof]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_ARG_SPLIT = re.compile(r"\b(with|term|const|to):")


class _Lines:
    """Cursor over the meaningful lines of a script."""

    def __init__(self, text: str):
        self.items: list[tuple[int, str]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.rstrip()
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            self.items.append((number, line))
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self) -> tuple[int, str]:
        return self.items[self.pos]

    def take(self, wanted: str) -> tuple[int, str]:
        if self.done():
            raise FormatError(f"unexpected end of script, expected {wanted}")
        item = self.items[self.pos]
        self.pos += 1
        return item


def _formula(text: str, lineno: int) -> Formula:
    try:
        return parse_formula(text)
    except ParseError as exc:
        raise FormatError(f"line {lineno}: {exc}") from exc


def _term(text: str, lineno: int) -> Term:
    try:
        return parse_term(text)
    except ParseError as exc:
        raise FormatError(f"line {lineno}: {exc}") from exc


def _sequent_text(text: str, lineno: int) -> Sequent:
    if not text.strip():
        return ()
    try:
        return parse_sequent(text)
    except ParseError as exc:
        raise FormatError(f"line {lineno}: {exc}") from exc


def _split_step(rest: str, lineno: int) -> tuple[str, dict[str, str]]:
    """Split 'RuleName key: value key: value' into the name and its args."""
    parts = _ARG_SPLIT.split(rest)
    name = parts[0].strip()
    if not name:
        raise FormatError(f"line {lineno}: missing rule name after 'by:'")
    args: dict[str, str] = {}
    for key, value in zip(parts[1::2], parts[2::2]):
        if key in args:
            raise FormatError(f"line {lineno}: duplicate '{key}:' argument")
        args[key] = value.strip()
    return name, args


def _no_leftover(args: dict[str, str], lineno: int, rule: str) -> None:
    if args:
        extra = ", ".join(sorted(args))
        raise FormatError(f"line {lineno}: {rule} does not take {extra}:")


def _const_arg(args: dict[str, str], lineno: int, rule: str) -> str:
    if "const" not in args:
        raise FormatError(f"line {lineno}: {rule} needs a const: argument")
    name = args.pop("const")
    if not _IDENT.match(name):
        raise FormatError(f"line {lineno}: {name!r} is not a constant name")
    return name


# ---------------------------------------------------------- sequent scripts

_SC_PREMISES = {
    "AlphaDis": 1, "AlphaImp": 1, "AlphaCon": 1,
    "BetaCon": 2, "BetaImp": 2, "BetaDis": 2,
    "GammaExi": 1, "GammaUni": 1, "DeltaUni": 1, "DeltaExi": 1,
    "Extra": 1, "Ext": 1, "NegNeg": 1,
}


def _sc_rule(name: str, args: dict[str, str], lineno: int) -> sequent.ScRule:
    if name in ("GammaExi", "GammaUni"):
        if "term" not in args:
            raise FormatError(f"line {lineno}: {name} needs a term: argument")
        term = _term(args.pop("term"), lineno)
        rule: sequent.ScRule = (
            sequent.GammaExi(term) if name == "GammaExi" else sequent.GammaUni(term)
        )
    elif name in ("DeltaUni", "DeltaExi"):
        const = _const_arg(args, lineno, name)
        rule = sequent.DeltaUni(const) if name == "DeltaUni" else sequent.DeltaExi(const)
    elif name == "Ext":
        if "to" not in args:
            raise FormatError(f"line {lineno}: Ext needs a to: argument")
        rule = sequent.Ext(_sequent_text(args.pop("to"), lineno))
    elif name in _SC_PREMISES:
        rule = {
            "AlphaDis": sequent.AlphaDis, "AlphaImp": sequent.AlphaImp,
            "AlphaCon": sequent.AlphaCon, "BetaCon": sequent.BetaCon,
            "BetaImp": sequent.BetaImp, "BetaDis": sequent.BetaDis,
            "Extra": sequent.Extra, "NegNeg": sequent.NegNeg,
        }[name]()
    elif name == "Basic":
        raise FormatError(f"line {lineno}: Basic closes a goal; write 'qed: Basic'")
    else:
        raise FormatError(f"line {lineno}: unknown sequent rule {name!r}")
    _no_leftover(args, lineno, name)
    return rule


def _indented_formulas(lines: _Lines) -> Sequent:
    formulas: list[Formula] = []
    while not lines.done():
        lineno, line = lines.peek()
        if not line.startswith("  "):
            break
        lines.take("formula")
        formulas.append(_formula(line.strip(), lineno))
    return tuple(formulas)


def _sc_block(lines: _Lines, conclusion: Sequent) -> ScProof:
    lineno, line = lines.take("'by:', 'qed: Basic', or 'open'")
    if line == "open":
        return ScProof(conclusion)
    if line.startswith("qed:"):
        name = sequent.canonical_rule_name(line[len("qed:"):].strip())
        if name != "Basic":
            raise FormatError(f"line {lineno}: only Basic can follow 'qed:'")
        return ScProof(conclusion, sequent.Basic())
    if not line.startswith("by:"):
        raise FormatError(
            f"line {lineno}: expected 'by:', 'qed: Basic', or 'open', "
            f"got {line.strip()!r}"
        )
    name, args = _split_step(line[len("by:"):], lineno)
    name = sequent.canonical_rule_name(name)
    rule = _sc_rule(name, args, lineno)
    premises: list[ScProof] = []
    for _ in range(_SC_PREMISES[name]):
        plineno, pline = lines.take("'sequent:'")
        if pline != "sequent:":
            raise FormatError(
                f"line {plineno}: expected 'sequent:' introducing a premise, "
                f"got {pline.strip()!r}"
            )
        premises.append(_sc_block(lines, _indented_formulas(lines)))
    return ScProof(conclusion, rule, tuple(premises))


def parse_sc_script(text: str) -> ScProof:
    lines = _Lines(text)
    lineno, line = lines.take("'goal:'")
    if not line.startswith("goal:"):
        raise FormatError(f"line {lineno}: a sequent script starts with 'goal:'")
    root = _sequent_text(line[len("goal:"):], lineno)
    proof = _sc_block(lines, root)
    if not lines.done():
        extra, _ = lines.peek()
        raise FormatError(f"line {extra}: unexpected content after the proof")
    return proof


def _sc_step_text(r: sequent.ScRule, notation: str = "standard") -> str:
    match r:
        case sequent.GammaExi(term) | sequent.GammaUni(term):
            return f"{sequent.rule_name(r)} term: {render_term(term, notation)}"
        case sequent.DeltaUni(const) | sequent.DeltaExi(const):
            return f"{sequent.rule_name(r)} const: {const}"
        case sequent.Ext(target):
            return f"Ext to: {render_sequent(target, notation)}"
        case _:
            return sequent.rule_name(r)


def _emit_sc(pf: ScProof, out: list[str], notation: str) -> None:
    if pf.rule is None:
        out.append("open")
        return
    if isinstance(pf.rule, sequent.Basic):
        out.append("qed: Basic")
        return
    out.append(f"by: {_sc_step_text(pf.rule, notation)}")
    for child in pf.premises:
        out.append("sequent:")
        for f in child.conclusion:
            out.append(f"  {render_formula(f, notation)}")
        _emit_sc(child, out, notation)


def render_sc_script(pf: ScProof, notation: str = "standard") -> str:
    out = [f"goal: {render_sequent(pf.conclusion, notation)}"]
    _emit_sc(pf, out, notation)
    return "\n".join(line.rstrip() for line in out) + "\n"


# ------------------------------------------------- natural-deduction scripts

_ND_PREMISES = {
    "Boole": 1, "ImpE": 2, "ImpI": 1, "DisE": 3, "DisI1": 1, "DisI2": 1,
    "ConE1": 1, "ConE2": 1, "ConI": 2, "ExiE": 2, "ExiI": 1,
    "UniE": 1, "UniI": 1,
}


def _judgment_text(text: str, lineno: int) -> NDJudgment:
    goal_text, marker, rest = text.partition(" |- from:")
    if not marker:
        raise FormatError(
            f"line {lineno}: a judgment reads '<goal> |- from: <assumptions>'"
        )
    goal = _formula(goal_text.strip(), lineno)
    assumptions: list[Formula] = []
    if rest.strip():
        for part in rest.split(";"):
            if not part.strip():
                raise FormatError(f"line {lineno}: empty assumption in judgment")
            assumptions.append(_formula(part.strip(), lineno))
    return NDJudgment(goal, tuple(assumptions))


def _with_arg(args: dict[str, str], lineno: int, rule: str, count: int) -> list[Formula]:
    if "with" not in args:
        raise FormatError(f"line {lineno}: {rule} needs a with: argument")
    raw = args.pop("with")
    parts = [part.strip() for part in raw.split(";")]
    if len(parts) != count or not all(parts):
        plural = "formula" if count == 1 else "formulas"
        raise FormatError(f"line {lineno}: {rule} takes {count} with: {plural}")
    return [_formula(part, lineno) for part in parts]


def _nd_rule(name: str, args: dict[str, str], lineno: int) -> natural.NdRule:
    rule: natural.NdRule
    if name == "ImpE":
        (witness,) = _with_arg(args, lineno, name, 1)
        rule = natural.ImpE(witness)
    elif name == "DisE":
        left, right = _with_arg(args, lineno, name, 2)
        rule = natural.DisE(left, right)
    elif name in ("ConE1", "ConE2"):
        (other,) = _with_arg(args, lineno, name, 1)
        rule = natural.ConE1(other) if name == "ConE1" else natural.ConE2(other)
    elif name == "ExiE":
        (body,) = _with_arg(args, lineno, name, 1)
        rule = natural.ExiE(body, _const_arg(args, lineno, name))
    elif name == "UniE":
        (body,) = _with_arg(args, lineno, name, 1)
        if "term" not in args:
            raise FormatError(f"line {lineno}: UniE needs a term: argument")
        rule = natural.UniE(body, _term(args.pop("term"), lineno))
    elif name == "ExiI":
        if "term" not in args:
            raise FormatError(f"line {lineno}: ExiI needs a term: argument")
        rule = natural.ExiI(_term(args.pop("term"), lineno))
    elif name == "UniI":
        rule = natural.UniI(_const_arg(args, lineno, name))
    elif name in ("Boole", "ImpI", "DisI1", "DisI2", "ConI"):
        rule = {
            "Boole": natural.Boole, "ImpI": natural.ImpI,
            "DisI1": natural.DisI1, "DisI2": natural.DisI2,
            "ConI": natural.ConI,
        }[name]()
    elif name == "Assume":
        raise FormatError(f"line {lineno}: Assume closes a goal; write 'qed: Assume'")
    else:
        raise FormatError(f"line {lineno}: unknown deduction rule {name!r}")
    _no_leftover(args, lineno, name)
    return rule


def _nd_block(lines: _Lines, conclusion: NDJudgment) -> NdProof:
    lineno, line = lines.take("'by:', 'qed: Assume', or 'open'")
    if line == "open":
        return NdProof(conclusion)
    if line.startswith("qed:"):
        if line[len("qed:"):].strip() != "Assume":
            raise FormatError(f"line {lineno}: only Assume can follow 'qed:'")
        return NdProof(conclusion, natural.Assume())
    if not line.startswith("by:"):
        raise FormatError(
            f"line {lineno}: expected 'by:', 'qed: Assume', or 'open', "
            f"got {line.strip()!r}"
        )
    name, args = _split_step(line[len("by:"):], lineno)
    rule = _nd_rule(name, args, lineno)
    premises: list[NdProof] = []
    for _ in range(_ND_PREMISES[name]):
        plineno, pline = lines.take("'judgment:'")
        if pline != "judgment:":
            raise FormatError(
                f"line {plineno}: expected 'judgment:' introducing a premise, "
                f"got {pline.strip()!r}"
            )
        jlineno, jline = lines.take("an indented judgment")
        if not jline.startswith("  "):
            raise FormatError(f"line {jlineno}: judgment lines are indented")
        premises.append(_nd_block(lines, _judgment_text(jline.strip(), jlineno)))
    return NdProof(conclusion, rule, tuple(premises))


def parse_nd_script(text: str) -> NdProof:
    lines = _Lines(text)
    lineno, line = lines.take("'goal:'")
    if not line.startswith("goal:"):
        raise FormatError(f"line {lineno}: a deduction script starts with 'goal:'")
    root = _judgment_text(line[len("goal:"):].strip(), lineno)
    proof = _nd_block(lines, root)
    if not lines.done():
        extra, _ = lines.peek()
        raise FormatError(f"line {extra}: unexpected content after the proof")
    return proof


def _render_judgment(j: NDJudgment, notation: str = "standard") -> str:
    goal = render_formula(j.goal, notation)
    if not j.assumptions:
        return f"{goal} |- from:"
    joined = "; ".join(render_formula(a, notation) for a in j.assumptions)
    return f"{goal} |- from: {joined}"


def _nd_step_text(r: natural.NdRule, notation: str = "standard") -> str:
    match r:
        case natural.ImpE(witness):
            return f"ImpE with: {render_formula(witness, notation)}"
        case natural.DisE(left, right):
            return (f"DisE with: {render_formula(left, notation)}; "
                    f"{render_formula(right, notation)}")
        case natural.ConE1(other) | natural.ConE2(other):
            return f"{natural.rule_name(r)} with: {render_formula(other, notation)}"
        case natural.ExiE(body, const):
            return f"ExiE with: {render_formula(body, notation)} const: {const}"
        case natural.UniE(body, term):
            return (f"UniE with: {render_formula(body, notation)} "
                    f"term: {render_term(term, notation)}")
        case natural.ExiI(term):
            return f"ExiI term: {render_term(term, notation)}"
        case natural.UniI(const):
            return f"UniI const: {const}"
        case _:
            return natural.rule_name(r)


def _emit_nd(pf: NdProof, out: list[str], notation: str) -> None:
    if pf.rule is None:
        out.append("open")
        return
    if isinstance(pf.rule, natural.Assume):
        out.append("qed: Assume")
        return
    out.append(f"by: {_nd_step_text(pf.rule, notation)}")
    for child in pf.premises:
        out.append("judgment:")
        out.append(f"  {_render_judgment(child.conclusion, notation)}")
        _emit_nd(child, out, notation)


def render_nd_script(pf: NdProof, notation: str = "standard") -> str:
    out = [f"goal: {_render_judgment(pf.conclusion, notation)}"]
    _emit_nd(pf, out, notation)
    return "\n".join(line.rstrip() for line in out) + "\n"


# ------------------------------------------------------------ hilbert proofs

_W_LINE = re.compile(r"(\d+)\.\s*(.*)\Z", re.DOTALL)
_W_AX = re.compile(r"Ax\s+(\d+)\s*\{(.*)\}\Z", re.DOTALL)
_W_MP = re.compile(r"MP\s+(\d+)\s+(\d+)\Z")


def _split_justification(line: str, lineno: int) -> tuple[str, str]:
    """Split off the trailing [ ... ], tolerating brackets inside it."""
    if not line.endswith("]"):
        raise FormatError(f"line {lineno}: missing [justification] at end of line")
    depth = 0
    for i in range(len(line) - 1, -1, -1):
        if line[i] == "]":
            depth += 1
        elif line[i] == "[":
            depth -= 1
            if depth == 0:
                return line[:i].rstrip(), line[i + 1 : -1].strip()
    raise FormatError(f"line {lineno}: unbalanced justification bracket")


def _parse_subst(raw: str, lineno: int) -> tuple[tuple[str, Formula], ...]:
    if not raw.strip():
        return ()
    pairs: dict[str, Formula] = {}
    for part in split_top_level(raw):
        name, marker, value = part.partition(":=")
        name = name.strip()
        if not marker or not _IDENT.match(name):
            raise FormatError(
                f"line {lineno}: substitution entries read 'Name:=formula'"
            )
        if name in pairs:
            raise FormatError(f"line {lineno}: {name} is substituted twice")
        pairs[name] = _formula(value.strip(), lineno)
    return tuple(sorted(pairs.items()))


def parse_w_script(text: str) -> WProof:
    lines: list[WLine] = []
    for lineno, raw in _Lines(text).items:
        line = raw.strip()
        body, just_text = _split_justification(line, lineno)
        m = _W_LINE.match(body)
        if m is None:
            raise FormatError(
                f"line {lineno}: expected 'k. <formula>  [justification]'"
            )
        number = int(m.group(1))
        if number != len(lines) + 1:
            raise FormatError(
                f"line {lineno}: lines must be numbered consecutively from 1"
            )
        formula = _formula(m.group(2).strip(), lineno)
        try:
            ensure_prop(formula)
        except NotPropositional as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        if ax := _W_AX.match(just_text):
            just: AxiomStep | MPStep = AxiomStep(
                int(ax.group(1)), _parse_subst(ax.group(2), lineno)
            )
        elif mp := _W_MP.match(just_text):
            just = MPStep(int(mp.group(1)), int(mp.group(2)))
        else:
            raise FormatError(
                f"line {lineno}: justification must be 'Ax k {{...}}' or 'MP i j'"
            )
        lines.append(WLine(number, formula, just))
    if not lines:
        raise FormatError("the proof has no lines")
    return WProof(tuple(lines))


def render_w_script(pf: WProof, notation: str = "standard") -> str:
    out: list[str] = []
    for line in pf.lines:
        match line.just:
            case AxiomStep(axiom=k, subst=subst):
                inner = ", ".join(
                    f"{name}:={render_formula(value, notation)}"
                    for name, value in subst
                )
                just = f"Ax {k} {{{inner}}}"
            case MPStep(i=i, j=j):
                just = f"MP {i} {j}"
        out.append(
            f"{line.number}. {render_formula(line.formula, notation)}  [{just}]"
        )
    return "\n".join(out) + "\n"


# -------------------------------------------------------------- dispatching

def detect_format(text: str) -> str:
    """'sequent', 'natural', or 'hilbert', judged from the first real line."""
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if re.match(r"\d+\.", line):
            return "hilbert"
        if line.startswith("goal:"):
            return "natural" if " |- " in line else "sequent"
        break
    raise FormatError("unrecognized proof script format")


def parse_script(text: str, fmt: str = "auto") -> Proof:
    if fmt == "auto":
        fmt = detect_format(text)
    match fmt:
        case "sequent":
            return parse_sc_script(text)
        case "natural":
            return parse_nd_script(text)
        case "hilbert":
            return parse_w_script(text)
    raise FormatError(f"unknown script format {fmt!r}")


def render_script(pf: Proof, notation: str = "standard") -> str:
    match pf:
        case ScProof():
            return render_sc_script(pf, notation)
        case NdProof():
            return render_nd_script(pf, notation)
        case WProof():
            return render_w_script(pf, notation)
    raise TypeError(f"not a proof object: {type(pf).__name__}")
