"""Concrete syntax: parsing and printing in two notations.

Abstract notation spells out constructors prefix-style with quoted symbol
names, e.g. ``Imp (Pre ''p'' []) (Pre ''p'' [])``.  Standard notation uses
infix operators ``-->``, ``\\/``, ``/\\`` (right-associative, ``/\\`` binds
tightest, then ``\\/``, then ``-->``), prefix ``~``, ``forall``/``exists``
binders, and applications ``P(t1, ..., tn)``.

Renderers are canonical: abstract output never uses the ``Neg``/``Truth``
abbreviations; standard output uses ``~p`` for ``Imp(p, Falsity)`` except for
``Imp(Falsity, Falsity)``, which prints as ``False --> False``.  Parsers accept
the abbreviations in both notations.

Standard notation names binders by depth: the outermost bound variable prints
as ``x1``, the next as ``x2``, and so on.  A free de Bruijn slot ``m`` prints
as ``ym``.  Both name families are reserved for variables in term position, as
are the constructor keywords and ``forall``/``exists``/``False``/``True``.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .syntax import (
    FALSITY,
    Con,
    Dis,
    Exi,
    Falsity,
    Formula,
    Fun,
    Imp,
    Neg,
    Pre,
    Term,
    Uni,
    Var,
)

RESERVED = frozenset(
    {
        "Falsity", "Pre", "Imp", "Dis", "Con", "Exi", "Uni", "Neg", "Truth",
        "Var", "Fun", "forall", "exists", "False", "True",
    }
)

ABSTRACT_HEADS = frozenset(
    {"Falsity", "Pre", "Imp", "Dis", "Con", "Exi", "Uni", "Neg", "Truth"}
)

_BOUND_NAME = re.compile(r"^x([0-9]+)$")
_FREE_NAME = re.compile(r"^y([0-9]+)$")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>-->)
  | (?P<or>\\/)
  | (?P<and>/\\)
  | (?P<quoted>''[A-Za-z_][A-Za-z0-9_]*'')
  | (?P<nat>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()\[\],.~])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup or ""
        value = m.group()
        if kind != "ws":
            if kind == "punct":
                kind = value
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], expected=what)
        return self.next()

    def expect_end(self) -> None:
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], expected="end of input")

    def ident(self, what: str) -> tuple[str, int]:
        kind, value, pos = self.peek()
        if kind != "ident":
            raise ParseError(f"unexpected {value!r}", pos, expected=what)
        self.next()
        return value, pos

    def symbol_name(self, what: str) -> str:
        """A quoted ''name'' in abstract notation."""
        kind, value, pos = self.peek()
        if kind != "quoted":
            raise ParseError(f"unexpected {value!r}", pos, expected=what)
        self.next()
        return value[2:-2]


# ------------------------------------------------------------- abstract

def _abs_term(p: _Parser) -> Term:
    kind, value, pos = p.peek()
    if kind == "ident" and value == "Var":
        p.next()
        _, num, _ = p.expect("nat", "a natural number index")
        return Var(int(num))
    if kind == "ident" and value == "Fun":
        p.next()
        name = p.symbol_name("a quoted function name like ''f''")
        return Fun(name, _abs_term_list(p))
    raise ParseError(f"unexpected {value!r}", pos, expected="Var or Fun")


def _abs_term_list(p: _Parser) -> tuple[Term, ...]:
    p.expect("[", "'['")
    if p.peek()[0] == "]":
        p.next()
        return ()
    terms = [_abs_term(p)]
    while p.peek()[0] == ",":
        p.next()
        terms.append(_abs_term(p))
    p.expect("]", "']' or ','")
    return tuple(terms)


def _abs_arg(p: _Parser) -> Formula:
    kind, value, pos = p.peek()
    if kind == "(":
        p.next()
        inner = _abs_formula(p)
        p.expect(")", "')'")
        return inner
    if kind == "ident" and value == "Falsity":
        p.next()
        return FALSITY
    if kind == "ident" and value == "Truth":
        p.next()
        return Imp(FALSITY, FALSITY)
    raise ParseError(
        f"unexpected {value!r}", pos, expected="a parenthesized formula, Falsity, or Truth"
    )


def _abs_formula(p: _Parser) -> Formula:
    kind, value, pos = p.peek()
    if kind != "ident":
        raise ParseError(f"unexpected {value!r}", pos, expected="a formula constructor")
    if value == "Falsity":
        p.next()
        return FALSITY
    if value == "Truth":
        p.next()
        return Imp(FALSITY, FALSITY)
    if value == "Pre":
        p.next()
        name = p.symbol_name("a quoted predicate name like ''p''")
        return Pre(name, _abs_term_list(p))
    if value == "Neg":
        p.next()
        return Neg(_abs_arg(p))
    if value in ("Imp", "Dis", "Con"):
        p.next()
        left = _abs_arg(p)
        right = _abs_arg(p)
        ctor = {"Imp": Imp, "Dis": Dis, "Con": Con}[value]
        return ctor(left, right)
    if value in ("Exi", "Uni"):
        p.next()
        body = _abs_arg(p)
        return Exi(body) if value == "Exi" else Uni(body)
    raise ParseError(f"unexpected {value!r}", pos, expected="a formula constructor")


def _render_abs_term(t: Term) -> str:
    match t:
        case Var(k):
            return f"Var {k}"
        case Fun(f, args):
            return f"Fun ''{f}'' [{', '.join(_render_abs_term(a) for a in args)}]"
    raise TypeError(t)


def _render_abs(p: Formula) -> str:
    match p:
        case Falsity():
            return "Falsity"
        case Pre(name, args):
            return f"Pre ''{name}'' [{', '.join(_render_abs_term(a) for a in args)}]"
        case Imp(a, b):
            return f"Imp {_render_abs_arg(a)} {_render_abs_arg(b)}"
        case Dis(a, b):
            return f"Dis {_render_abs_arg(a)} {_render_abs_arg(b)}"
        case Con(a, b):
            return f"Con {_render_abs_arg(a)} {_render_abs_arg(b)}"
        case Exi(body):
            return f"Exi {_render_abs_arg(body)}"
        case Uni(body):
            return f"Uni {_render_abs_arg(body)}"
    raise TypeError(p)


def _render_abs_arg(p: Formula) -> str:
    if isinstance(p, Falsity):
        return "Falsity"
    return f"({_render_abs(p)})"


# ------------------------------------------------------------- standard

def _resolve_name(name: str, stack: list[str], pos: int) -> Term | None:
    """Map an identifier in term position to a variable, or None for a symbol."""
    for d, bound in enumerate(reversed(stack)):
        if bound == name:
            return Var(d)
    m = _FREE_NAME.match(name)
    if m:
        return Var(len(stack) + int(m.group(1)))
    if _BOUND_NAME.match(name):
        raise ParseError(f"unbound variable {name!r}", pos)
    return None


def _std_term(p: _Parser, stack: list[str]) -> Term:
    name, pos = p.ident("a term")
    if name in RESERVED:
        raise ParseError(f"reserved word {name!r} cannot be a term", pos)
    var = _resolve_name(name, stack, pos)
    if var is not None:
        if p.peek()[0] == "(":
            raise ParseError(f"variable {name!r} cannot take arguments", p.peek()[2])
        return var
    return Fun(name, _std_args(p, stack))


def _std_args(p: _Parser, stack: list[str]) -> tuple[Term, ...]:
    if p.peek()[0] != "(":
        return ()
    p.next()
    args = [_std_term(p, stack)]
    while p.peek()[0] == ",":
        p.next()
        args.append(_std_term(p, stack))
    p.expect(")", "')' or ','")
    return tuple(args)


def _std_atom(p: _Parser, stack: list[str]) -> Formula:
    kind, value, pos = p.peek()
    if kind == "(":
        p.next()
        inner = _std_imp(p, stack)
        p.expect(")", "')'")
        return inner
    if kind == "ident":
        if value == "False":
            p.next()
            return FALSITY
        if value == "True":
            p.next()
            return Imp(FALSITY, FALSITY)
        if value in RESERVED:
            raise ParseError(f"reserved word {value!r} cannot be an atom", pos)
        p.next()
        return Pre(value, _std_args(p, stack))
    raise ParseError(f"unexpected {value!r}", pos, expected="an atom or '('")


def _std_unary(p: _Parser, stack: list[str]) -> Formula:
    kind, value, pos = p.peek()
    if kind == "~":
        p.next()
        return Neg(_std_unary(p, stack))
    if kind == "ident" and value in ("forall", "exists"):
        p.next()
        name, npos = p.ident("a binder name")
        if name in RESERVED:
            raise ParseError(f"reserved word {name!r} cannot bind", npos)
        p.expect(".", "'.'")
        stack.append(name)
        try:
            body = _std_imp(p, stack)
        finally:
            stack.pop()
        return Uni(body) if value == "forall" else Exi(body)
    return _std_atom(p, stack)


def _std_and(p: _Parser, stack: list[str]) -> Formula:
    left = _std_unary(p, stack)
    if p.peek()[0] == "and":
        p.next()
        return Con(left, _std_and(p, stack))
    return left


def _std_or(p: _Parser, stack: list[str]) -> Formula:
    left = _std_and(p, stack)
    if p.peek()[0] == "or":
        p.next()
        return Dis(left, _std_or(p, stack))
    return left


def _std_imp(p: _Parser, stack: list[str]) -> Formula:
    left = _std_or(p, stack)
    if p.peek()[0] == "arrow":
        p.next()
        return Imp(left, _std_imp(p, stack))
    return left


def _render_std_term(t: Term, depth: int) -> str:
    match t:
        case Var(k):
            return f"x{depth - k}" if k < depth else f"y{k - depth}"
        case Fun(f, args):
            if not args:
                return f
            return f"{f}({', '.join(_render_std_term(a, depth) for a in args)})"
    raise TypeError(t)


# Precedence: higher binds tighter.  Parenthesize a node rendered in a
# context that binds tighter than the node itself.
_PREC_IMP, _PREC_DIS, _PREC_CON, _PREC_NEG, _PREC_ATOM = 1, 2, 3, 4, 5


def _render_std(p: Formula, depth: int, ctx: int) -> str:
    def wrap(prec: int, s: str) -> str:
        return f"({s})" if prec < ctx else s

    match p:
        case Falsity():
            return "False"
        case Pre(name, args):
            if not args:
                return name
            return f"{name}({', '.join(_render_std_term(a, depth) for a in args)})"
        case Imp(Falsity(), Falsity()):
            return wrap(_PREC_IMP, "False --> False")
        case Imp(a, Falsity()):
            return wrap(_PREC_NEG, f"~{_render_std(a, depth, _PREC_NEG)}")
        case Imp(a, b):
            s = f"{_render_std(a, depth, _PREC_IMP + 1)} --> {_render_std(b, depth, _PREC_IMP)}"
            return wrap(_PREC_IMP, s)
        case Dis(a, b):
            s = f"{_render_std(a, depth, _PREC_DIS + 1)} \\/ {_render_std(b, depth, _PREC_DIS)}"
            return wrap(_PREC_DIS, s)
        case Con(a, b):
            s = f"{_render_std(a, depth, _PREC_CON + 1)} /\\ {_render_std(b, depth, _PREC_CON)}"
            return wrap(_PREC_CON, s)
        case Exi(body):
            s = f"exists x{depth + 1}. {_render_std(body, depth + 1, _PREC_IMP)}"
            return wrap(_PREC_IMP, s)
        case Uni(body):
            s = f"forall x{depth + 1}. {_render_std(body, depth + 1, _PREC_IMP)}"
            return wrap(_PREC_IMP, s)
    raise TypeError(p)


# ------------------------------------------------------------- entry points

Notation = str  # "abstract" | "standard" | "auto"


def detect_notation(text: str) -> str:
    """Guess the notation of a formula line from its first token."""
    for kind, value, _ in _tokenize(text):
        if kind == "ident" and value in ABSTRACT_HEADS:
            return "abstract"
        return "standard"
    return "standard"


def parse_formula(text: str, notation: Notation = "auto") -> Formula:
    """Parse a formula; raises ParseError with a byte offset on failure."""
    if notation == "auto":
        notation = detect_notation(text)
    p = _Parser(text)
    if notation == "abstract":
        result = _abs_formula(p)
    elif notation == "standard":
        result = _std_imp(p, [])
    else:
        raise ValueError(f"unknown notation {notation!r}")
    p.expect_end()
    return result


def render_formula(p: Formula, notation: Notation = "standard") -> str:
    """Render a formula canonically in the requested notation."""
    if notation == "abstract":
        return _render_abs(p)
    if notation == "standard":
        return _render_std(p, 0, 0)
    raise ValueError(f"unknown notation {notation!r}")


def parse_term(text: str, notation: Notation = "auto") -> Term:
    """Parse a term; free variables are written y0, y1, ... in standard notation."""
    if notation == "auto":
        stripped = text.lstrip()
        notation = "abstract" if stripped.startswith(("Var", "Fun")) else "standard"
    p = _Parser(text)
    if notation == "abstract":
        result = _abs_term(p)
    elif notation == "standard":
        result = _std_term(p, [])
    else:
        raise ValueError(f"unknown notation {notation!r}")
    p.expect_end()
    return result


def render_term(t: Term, notation: Notation = "standard") -> str:
    if notation == "abstract":
        return _render_abs_term(t)
    if notation == "standard":
        return _render_std_term(t, 0)
    raise ValueError(f"unknown notation {notation!r}")


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep occurrences outside any parentheses or brackets."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def parse_sequent(text: str, notation: Notation = "auto") -> tuple[Formula, ...]:
    """Parse a comma-separated formula list (commas at top level only)."""
    stripped = text.strip()
    if not stripped:
        return ()
    return tuple(parse_formula(part.strip(), notation) for part in split_top_level(stripped))


def render_sequent(s: tuple[Formula, ...], notation: Notation = "standard") -> str:
    return ", ".join(render_formula(p, notation) for p in s)
