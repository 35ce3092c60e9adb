"""A small arithmetic expression language over variables ``x1 .. xn``.

Grammar, from loosest to tightest binding::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | VAR | FUNC "(" expr ("," expr)* ")" | "(" expr ")"
    VAR     := "x" [1-9][0-9]*
    FUNC    := exp | abs | sqrt | max | min

``^`` binds tighter than unary minus (``-x1^2`` is ``-(x1^2)``) and is right
associative. Parsed trees are immutable and callable: ``e(point)`` returns a float
and ``e.batch(points)`` evaluates an ``(N, n)`` array of points at once. Evaluation
never returns NaN or infinity; domain problems raise :class:`EvaluationError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import EvaluationError, HHError, UnboundVariableError

FUNCTIONS = {"exp": 1, "abs": 1, "sqrt": 1, "max": 2, "min": 2}


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")


class ExprSyntaxError(HHError, ValueError):
    def __init__(self, message: str, span: SourceSpan, source: str = ""):
        super().__init__(f"{message} at {span.start}..{span.end}")
        self.message = message
        self.span = span
        self.source = source

    def caret(self) -> str:
        """Two-line rendering of the source with the offending range underlined."""
        width = max(1, self.span.end - self.span.start)
        return f"{self.source}\n{' ' * self.span.start}{'^' * width}"


_NOSPAN = SourceSpan(0, 0)


class Expr:
    """Base class of parse-tree nodes."""

    span: SourceSpan

    @cached_property
    def _compiled(self) -> Callable[[np.ndarray], np.ndarray]:
        return _compile(self)

    def batch(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2:
            raise ValueError(f"batch evaluation needs an (N, n) array, got shape {pts.shape}")
        with np.errstate(all="ignore"):
            out = self._compiled(pts)
        return np.broadcast_to(out, (pts.shape[0],)).astype(float, copy=True)

    def __call__(self, point) -> float:
        return evaluate(self, point)

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float
    span: SourceSpan = field(default=_NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Expr):
    index: int
    span: SourceSpan = field(default=_NOSPAN, compare=False, repr=False)

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable indices start at 1")


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr
    span: SourceSpan = field(default=_NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    span: SourceSpan = field(default=_NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]
    span: SourceSpan = field(default=_NOSPAN, compare=False, repr=False)

    def __post_init__(self):
        if FUNCTIONS.get(self.name) != len(self.args):
            raise ValueError(f"{self.name} takes {FUNCTIONS.get(self.name)} arguments")


# --- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)
_VAR_RE = re.compile(r"x([1-9][0-9]*)")


@dataclass(frozen=True)
class _Token:
    kind: str  # number | var | func | op | eof
    text: str
    span: SourceSpan


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", SourceSpan(pos, pos + 1), src)
        kind = m.lastgroup
        span = SourceSpan(m.start(), m.end())
        text = m.group()
        pos = m.end()
        if kind == "ws":
            continue
        if kind == "name":
            if _VAR_RE.fullmatch(text):
                kind = "var"
            elif text in FUNCTIONS:
                kind = "func"
            else:
                raise ExprSyntaxError(f"unknown function or variable {text!r}", span, src)
        tokens.append(_Token(kind, text, span))
    tokens.append(_Token("eof", "", SourceSpan(len(src), len(src))))
    return tokens


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        return ExprSyntaxError(message, tok.span, self.src)

    def expect(self, text: str) -> _Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
        raise self.error(f"expected {text!r}, found {found}")

    def at(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.at("+", "-"):
            op = self.advance().text
            right = self.term()
            left = BinOp(op, left, right, SourceSpan(left.span.start, right.span.end))
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*", "/"):
            op = self.advance().text
            right = self.unary()
            left = BinOp(op, left, right, SourceSpan(left.span.start, right.span.end))
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            start = self.advance().span.start
            operand = self.unary()
            return Neg(operand, SourceSpan(start, operand.span.end))
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.at("^"):
            self.advance()
            exponent = self.unary()
            return BinOp("^", base, exponent, SourceSpan(base.span.start, exponent.span.end))
        return base

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            value = float(tok.text)
            if not np.isfinite(value):
                raise self.error("number out of range", tok)
            return Num(value, tok.span)
        if tok.kind == "var":
            self.advance()
            return Var(int(tok.text[1:]), tok.span)
        if tok.kind == "func":
            self.advance()
            self.expect("(")
            args = [self.expr()]
            while self.at(","):
                self.advance()
                args.append(self.expr())
            close = self.expect(")")
            span = SourceSpan(tok.span.start, close.span.end)
            arity = FUNCTIONS[tok.text]
            if len(args) != arity:
                raise ExprSyntaxError(
                    f"{tok.text} takes {arity} argument{'s' if arity > 1 else ''}, got {len(args)}",
                    span,
                    self.src,
                )
            return Call(tok.text, tuple(args), span)
        if self.at("("):
            open_ = self.advance()
            inner = self.expr()
            close = self.expect(")")
            # keep the structural node, widen its span to include the parentheses
            return _respan(inner, SourceSpan(open_.span.start, close.span.end))
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def _respan(e: Expr, span: SourceSpan) -> Expr:
    object.__setattr__(e, "span", span)
    return e


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree; raises :class:`ExprSyntaxError`."""
    return _Parser(source).parse()


# --- evaluation --------------------------------------------------------------


def _finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise EvaluationError(f"overflow in {what}")
    return values


def _compile(e: Expr) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(e, Num):
        value = e.value
        return lambda pts: np.full(pts.shape[0], value)
    if isinstance(e, Var):
        idx = e.index

        def var(pts):
            if idx > pts.shape[1]:
                raise UnboundVariableError(f"x{idx} is unbound for a point of dimension {pts.shape[1]}")
            return pts[:, idx - 1]

        return var
    if isinstance(e, Neg):
        inner = _compile(e.operand)
        return lambda pts: -inner(pts)
    if isinstance(e, BinOp):
        lf, rf = _compile(e.left), _compile(e.right)
        return _BINARY[e.op](lf, rf)
    if isinstance(e, Call):
        fs = [_compile(a) for a in e.args]
        return _CALLS[e.name](*fs)
    raise TypeError(f"not an expression node: {e!r}")


def _add(lf, rf):
    return lambda pts: _finite(lf(pts) + rf(pts), "addition")


def _sub(lf, rf):
    return lambda pts: _finite(lf(pts) - rf(pts), "subtraction")


def _mul(lf, rf):
    return lambda pts: _finite(lf(pts) * rf(pts), "multiplication")


def _div(lf, rf):
    def div(pts):
        num, den = lf(pts), rf(pts)
        if np.any(den == 0.0):
            raise EvaluationError("division by zero")
        return _finite(num / den, "division")

    return div


def _pow(lf, rf):
    def power(pts):
        base, ex = lf(pts), rf(pts)
        if np.any((base < 0.0) & (ex != np.round(ex))):
            raise EvaluationError("negative base raised to a non-integer power")
        if np.any((base == 0.0) & (ex < 0.0)):
            raise EvaluationError("division by zero (zero raised to a negative power)")
        return _finite(np.power(base, ex), "power")

    return power


def _exp(af):
    return lambda pts: _finite(np.exp(af(pts)), "exp")


def _sqrt(af):
    def sqrt(pts):
        a = af(pts)
        if np.any(a < 0.0):
            raise EvaluationError("sqrt of a negative number")
        return np.sqrt(a)

    return sqrt


_BINARY = {"+": _add, "-": _sub, "*": _mul, "/": _div, "^": _pow}
_CALLS = {
    "exp": _exp,
    "abs": lambda af: lambda pts: np.abs(af(pts)),
    "sqrt": _sqrt,
    "max": lambda af, bf: lambda pts: np.maximum(af(pts), bf(pts)),
    "min": lambda af, bf: lambda pts: np.minimum(af(pts), bf(pts)),
}


def evaluate(e: Expr, point) -> float:
    """Value of ``e`` at a single point."""
    pt = np.asarray(point, dtype=float).reshape(1, -1)
    return float(e.batch(pt)[0])


def max_var_index(e: Expr) -> int:
    """Largest variable index in ``e``; 0 for a constant expression."""
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Num):
        return 0
    if isinstance(e, Neg):
        return max_var_index(e.operand)
    if isinstance(e, BinOp):
        return max(max_var_index(e.left), max_var_index(e.right))
    if isinstance(e, Call):
        return max(max_var_index(a) for a in e.args)
    raise TypeError(f"not an expression node: {e!r}")


def unparse(e: Expr) -> str:
    """Fully parenthesized source text that parses back to an equal tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Neg):
        return f"(-{unparse(e.operand)})"
    if isinstance(e, BinOp):
        return f"({unparse(e.left)} {e.op} {unparse(e.right)})"
    if isinstance(e, Call):
        return f"{e.name}({', '.join(unparse(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")
