"""Batch front door: format, check, prove, refute, translate, and serve.

Exit codes form a total function of the outcome: 0 for a complete proof
(or a found countermodel), 1 for an incomplete answer, 2 for an invalid
proof or a refuted goal, 3 for unreadable input, 4 for an exhausted
search budget.  Artifacts go to stdout, diagnostics to stderr; --json
wraps results in the service's ok/data-or-error envelope.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import tableau
from .errors import FormatError, ParseError, ProofkitError
from .hilbert import WProof, check_w_proof, load_axioms, search_proof
from .natural import NdProof, check_nd_proof, to_sequent
from .notation import parse_formula, parse_sequent, render_sequent
from .report import CheckReport
from .scripts import detect_format, parse_script, render_script
from .semantics import (
    BudgetExceeded,
    Countermodel,
    Environment,
    Exhausted,
    Model,
    countermodel_search,
)
from .sequent import ScProof, check_proof
from .service import assessment_to_json, env_to_json, model_to_json
from .tableau import LikelyUnprovable, Proved, SearchBudget, Unknown

EX_COMPLETE = 0
EX_INCOMPLETE = 1
EX_INVALID = 2
EX_PARSE = 3
EX_BUDGET = 4

REPORT_EXITS = {"Complete": EX_COMPLETE, "Incomplete": EX_INCOMPLETE,
                "Invalid": EX_INVALID}
ASSESS_EXITS = {"Proved": EX_COMPLETE, "LikelyUnprovable": EX_INVALID,
                "Unknown": EX_BUDGET}


# -------------------------------------------------------------- plumbing


def _emit(args, data: dict, text: str) -> None:
    """Write the command's artifact: envelope in --json mode, else text."""
    if args.json:
        print(json.dumps({"ok": True, "data": data}))
    elif text:
        print(text, end="" if text.endswith("\n") else "\n")


def _diagnose(args, message: str) -> None:
    if not args.json:
        print(message, file=sys.stderr)


def _fail(args, code: str, message: str) -> None:
    if args.json:
        print(json.dumps({
            "ok": False,
            "error": {"code": code, "message": message, "detail": None},
        }))
    else:
        print(f"error: {message}", file=sys.stderr)


def _report_text(report: CheckReport) -> str:
    if report.verdict == "Complete":
        plural = "" if report.steps == 1 else "s"
        return f"Complete ({report.steps} step{plural})"
    if report.verdict == "Incomplete":
        plural = "" if report.open_goals == 1 else "s"
        return (f"Incomplete ({report.open_goals} open goal{plural} "
                f"after {report.steps} steps)")
    path = ".".join(str(i) for i in report.error_path or ()) or "root"
    return (f"Invalid at {path}: {report.error_code}: "
            f"{report.error_message}")


def _model_text(model: Model, env: Environment) -> str:
    lines = [f"size: {model.size}"]
    for (name, arity), table in sorted(model.funcs.items()):
        cells = ", ".join(
            f"({','.join(map(str, args))}) -> {value}"
            for args, value in sorted(table.items()))
        lines.append(f"fun {name}/{arity}: {cells}")
    for (name, arity), holds in sorted(model.preds.items()):
        cells = ", ".join(
            f"({','.join(map(str, args))})" for args in sorted(holds))
        lines.append(f"pred {name}/{arity}: {cells if cells else 'never'}")
    lines.append(f"env: [{', '.join(map(str, env.values))}]")
    return "\n".join(lines) + "\n"


def _budget_from(args) -> SearchBudget:
    default = SearchBudget()
    deadline = args.deadline
    if deadline is None:
        raw = os.environ.get("SECAV_PROVER_BUDGET")
        deadline = float(raw) if raw else default.deadline
    return SearchBudget(
        max_gamma=args.max_gamma if args.max_gamma is not None
        else default.max_gamma,
        max_expansions=args.budget if args.budget is not None
        else default.max_expansions,
        deadline=deadline,
    )


def _target(text: str) -> tuple:
    """A goal given on the command line: a formula, else a sequent."""
    try:
        return (parse_formula(text),)
    except ParseError:
        return parse_sequent(text)


def _check_any(proof, axioms_path: str | None) -> CheckReport:
    if isinstance(proof, WProof):
        if not axioms_path:
            raise FormatError(
                "an axiomatic proof needs --axioms <file> to check against")
        axioms = load_axioms(Path(axioms_path).read_text(encoding="utf-8"))
        return check_w_proof(proof, axioms)
    if isinstance(proof, ScProof):
        return check_proof(proof)
    return check_nd_proof(proof)


# -------------------------------------------------------------- commands


def cmd_fmt(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    fmt = args.format
    if fmt == "auto":
        try:
            fmt = detect_format(text)
        except FormatError:
            fmt = None
    if fmt is None:
        target = _target(text.strip())
        rendered = render_sequent(target, args.notation) + "\n"
    else:
        rendered = render_script(parse_script(text, fmt), args.notation)
    _emit(args, {"script": rendered}, rendered)
    return EX_COMPLETE


def cmd_check(args) -> int:
    text = Path(args.script).read_text(encoding="utf-8")
    proof = parse_script(text, args.format)
    report = _check_any(proof, args.axioms)
    _emit(args, report.to_json(), _report_text(report))
    return REPORT_EXITS[report.verdict]


def cmd_prove(args) -> int:
    target = _target(args.formula)
    outcome = tableau.prove(target, _budget_from(args))
    _emit(args, assessment_to_json(outcome, full=True), "")
    if isinstance(outcome, Proved):
        if not args.json:
            print(render_script(outcome.proof, args.notation), end="")
        return EX_COMPLETE
    if isinstance(outcome, LikelyUnprovable):
        _diagnose(args, "refuted: a countermodel falsifies the goal")
        if not args.json and outcome.counterexample:
            cex = outcome.counterexample
            print(_model_text(cex.model, cex.env), end="")
        return EX_INVALID
    _diagnose(args, "search budget exhausted before an answer")
    return EX_BUDGET


def cmd_countermodel(args) -> int:
    formula = parse_formula(args.formula)
    result = countermodel_search(formula, args.max_size, args.budget)
    if isinstance(result, Countermodel):
        data = {"verdict": "Countermodel",
                "model": model_to_json(result.model),
                "env": env_to_json(result.env)}
        _emit(args, data, _model_text(result.model, result.env))
        return EX_COMPLETE
    if isinstance(result, Exhausted):
        data = {"verdict": "Exhausted", "max_size": args.max_size}
        _emit(args, data, "")
        _diagnose(args,
                  f"no countermodel up to domain size {args.max_size}")
        return EX_INCOMPLETE
    _emit(args, {"verdict": "BudgetExceeded"}, "")
    _diagnose(args, "evaluation budget exhausted before an answer")
    return EX_BUDGET


def cmd_translate(args) -> int:
    text = Path(args.script).read_text(encoding="utf-8")
    proof = parse_script(text, "natural")
    if not isinstance(proof, NdProof):
        raise FormatError("translate expects a natural-deduction script")
    target = to_sequent(proof.conclusion)
    outcome = tableau.prove(target, _budget_from(args))
    data = {"sequent": render_sequent(target),
            "assessment": assessment_to_json(outcome, full=True)}
    header = f"# sequent: {render_sequent(target)}\n"
    if isinstance(outcome, Proved):
        _emit(args, data,
              header + render_script(outcome.proof, args.notation))
        return EX_COMPLETE
    _emit(args, data, header)
    if isinstance(outcome, LikelyUnprovable):
        _diagnose(args, "refuted: a countermodel falsifies the sequent")
        return EX_INVALID
    _diagnose(args, "search budget exhausted before a proof was found")
    return EX_BUDGET


def cmd_w_check(args) -> int:
    text = Path(args.proof).read_text(encoding="utf-8")
    proof = parse_script(text, "hilbert")
    report = _check_any(proof, args.axioms)
    _emit(args, report.to_json(), _report_text(report))
    return REPORT_EXITS[report.verdict]


def cmd_w_search(args) -> int:
    goal = parse_formula(args.formula)
    axioms = load_axioms(Path(args.axioms).read_text(encoding="utf-8"))
    proof = search_proof(goal, axioms, depth=args.depth)
    if proof is None:
        _emit(args, {"found": False, "depth": args.depth}, "")
        _diagnose(args, f"no proof within depth {args.depth}")
        return EX_BUDGET
    rendered = render_script(proof, args.notation)
    _emit(args, {"found": True, "script": rendered}, rendered)
    return EX_COMPLETE


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    addr = args.addr or os.environ.get("SECAV_ADDR") or "127.0.0.1:8000"
    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise FormatError(f"addr must be host:port, got {addr!r}")
    app = create_app(data_dir=args.data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=host, port=int(port_text))
    return EX_COMPLETE


# ---------------------------------------------------------------- parser


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proofkit",
        description="Check, search, and format first-order proofs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text):
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(fn=fn)
        sub.add_argument("--json", action="store_true",
                         help="emit an ok/data envelope on stdout")
        return sub

    def notation_option(sub):
        sub.add_argument("--notation", choices=("standard", "abstract"),
                         default="standard")

    def budget_options(sub):
        sub.add_argument("--budget", type=int, default=None,
                         help="expansion limit for the search")
        sub.add_argument("--deadline", type=float, default=None,
                         help="wall-clock limit in seconds")
        sub.add_argument("--max-gamma", type=int, default=None,
                         help="per-branch quantifier instantiation limit")

    sub = command("fmt", cmd_fmt, "parse and re-render a proof script")
    sub.add_argument("file")
    sub.add_argument("--format", default="auto",
                     choices=("auto", "sequent", "natural", "hilbert"))
    notation_option(sub)

    sub = command("check", cmd_check, "check a proof script")
    sub.add_argument("script")
    sub.add_argument("--format", default="auto",
                     choices=("auto", "sequent", "natural", "hilbert"))
    sub.add_argument("--axioms", default=None,
                     help="axiom file for axiomatic proofs")

    sub = command("prove", cmd_prove, "search for a sequent proof")
    sub.add_argument("formula")
    budget_options(sub)
    notation_option(sub)

    sub = command("countermodel", cmd_countermodel,
                  "search finite models that falsify a formula")
    sub.add_argument("formula")
    sub.add_argument("--max-size", type=int, default=3)
    sub.add_argument("--budget", type=int, default=100_000)

    sub = command("translate", cmd_translate,
                  "turn a natural-deduction proof into a sequent proof")
    sub.add_argument("script")
    budget_options(sub)
    notation_option(sub)

    sub = command("w-check", cmd_w_check, "check an axiomatic proof")
    sub.add_argument("proof")
    sub.add_argument("--axioms", required=True)

    sub = command("w-search", cmd_w_search,
                  "bounded forward search for an axiomatic proof")
    sub.add_argument("formula")
    sub.add_argument("--axioms", required=True)
    sub.add_argument("--depth", type=int, default=8)
    notation_option(sub)

    sub = command("serve", cmd_serve, "run the HTTP service")
    sub.add_argument("--addr", default=None, help="host:port to bind")
    sub.add_argument("--data-dir", default=None,
                     help="directory for the durable log")
    sub.add_argument("--ui-dir", default=None,
                     help="serve this directory's files at / "
                          "(a browser front end, same-origin)")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except ProofkitError as exc:
        _fail(args, type(exc).__name__, str(exc))
        return EX_PARSE
    except OSError as exc:
        _fail(args, type(exc).__name__, str(exc))
        return EX_PARSE
    except ValueError as exc:
        _fail(args, "ValueError", str(exc))
        return EX_PARSE


if __name__ == "__main__":
    sys.exit(main())
