"""Expression front-end: parse, pretty-print and evaluate f(x).

Grammar (standard precedence, ^ binds tightest and associates right):

    expr   := term  (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          -- exponent must be x-free
    atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := sin | cos | exp | log | sqrt | abs

There is no implicit multiplication ("2x" is a syntax error) and the
exponent of ^ is folded to a real constant at parse time, so variable
exponents must be written exp(y*log(x)).

Trees are immutable; `eval_value` accepts a float or an ndarray and is
pure, so expressions can be shared freely between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    DomainError,
    ExpressionSyntaxError,
    NonConstantExponentError,
    UnknownIdentifierError,
)

UNARY_FUNCTIONS = ("neg", "abs", "sin", "cos", "exp", "log", "sqrt")
_CALLABLE_FUNCS = ("sin", "cos", "exp", "log", "sqrt", "abs")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The single free variable x."""


@dataclass(frozen=True)
class Unary:
    op: str  # one of UNARY_FUNCTIONS
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # add | sub | mul | div
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: float  # constant real exponent, folded at parse time


Expr = Union[Const, Var, Unary, Binary, Pow]

X = Var()


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_TOKEN_NUMBER = "number"
_TOKEN_IDENT = "ident"
_TOKEN_OP = "op"
_TOKEN_END = "end"


def _tokenize(source: str):
    """Yield (kind, text, offset) tokens; offsets index into `source`."""
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            start = i
            while i < n and (source[i].isdigit() or source[i] == "."):
                i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            text = source[start:i]
            try:
                float(text)
            except ValueError:
                raise ExpressionSyntaxError(f"bad number literal {text!r}", start)
            tokens.append((_TOKEN_NUMBER, text, start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append((_TOKEN_IDENT, source[start:i], start))
            continue
        if ch in "+-*/^()":
            tokens.append((_TOKEN_OP, ch, i))
            i += 1
            continue
        raise ExpressionSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append((_TOKEN_END, "", n))
    return tokens


# ---------------------------------------------------------------------------
# recursive-descent parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, offset = self.peek()
        if kind != _TOKEN_OP or text != op:
            raise ExpressionSyntaxError(f"expected {op!r}", offset)
        return self.advance()

    def parse(self) -> Expr:
        tree = self.expr()
        kind, text, offset = self.peek()
        if kind != _TOKEN_END:
            raise ExpressionSyntaxError(f"unexpected trailing input {text!r}", offset)
        return tree

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == _TOKEN_OP and text in "+-":
                self.advance()
                rhs = self.term()
                node = Binary("add" if text == "+" else "sub", node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == _TOKEN_OP and text in "*/":
                self.advance()
                rhs = self.unary()
                node = Binary("mul" if text == "*" else "div", node, rhs)
            else:
                return node

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == _TOKEN_OP and text == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, offset = self.peek()
        if kind == _TOKEN_OP and text == "^":
            self.advance()
            exp_offset = self.peek()[2]
            exponent = self.unary()  # right-associative
            if _contains_var(exponent):
                raise NonConstantExponentError(
                    "exponent of ^ must be a constant; write exp(y*log(x)) "
                    "for variable exponents",
                    exp_offset,
                )
            return Pow(base, float(eval_value(exponent, 0.0)))
        return base

    def atom(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == _TOKEN_NUMBER:
            return Const(float(text))
        if kind == _TOKEN_IDENT:
            if text == "x":
                return X
            if text in _CALLABLE_FUNCS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Unary(text, arg)
            raise UnknownIdentifierError(text, offset)
        if kind == _TOKEN_OP and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        found = repr(text) if text else "end of input"
        raise ExpressionSyntaxError(
            f"expected a number, x, a function call or '(' but found {found}",
            offset,
        )


def parse(source: str) -> Expr:
    """Parse expression text into an immutable AST."""
    if not source or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return _Parser(source).parse()


def _contains_var(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Unary):
        return _contains_var(e.arg)
    if isinstance(e, Binary):
        return _contains_var(e.left) or _contains_var(e.right)
    if isinstance(e, Pow):
        return _contains_var(e.base)
    return False


# ---------------------------------------------------------------------------
# pretty printer
# ---------------------------------------------------------------------------

# precedence levels used for minimal parenthesisation
_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(e: Expr) -> int:
    if isinstance(e, Binary):
        return _LEVEL_ADD if e.op in ("add", "sub") else _LEVEL_MUL
    if isinstance(e, Unary):
        return _LEVEL_NEG if e.op == "neg" else _LEVEL_ATOM
    if isinstance(e, Pow):
        return _LEVEL_POW
    return _LEVEL_ATOM


def _fmt_number(v: float) -> str:
    if v != v or v in (math.inf, -math.inf):
        raise ValueError(f"cannot print non-finite constant {v!r}")
    if float(v).is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(float(v))


def to_source(e: Expr) -> str:
    """Render the tree back to parseable text.

    For any parser output, parse(to_source(tree)) is structurally identical
    to the tree. Constants produced programmatically with negative values
    re-parse as neg(positive constant).
    """
    if isinstance(e, Const):
        if e.value < 0:
            return "-" + _fmt_number(-e.value)
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Unary):
        if e.op == "neg":
            inner = to_source(e.arg)
            if _level(e.arg) <= _LEVEL_NEG:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{e.op}({to_source(e.arg)})"
    if isinstance(e, Binary):
        symbol = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[e.op]
        lhs = to_source(e.left)
        if _level(e.left) < _level(e):
            lhs = f"({lhs})"
        rhs = to_source(e.right)
        # binary ops are left-associative, so a right child at the same
        # precedence must keep its parens for the tree shape to survive
        if _level(e.right) <= _level(e):
            rhs = f"({rhs})"
        return f"{lhs}{symbol}{rhs}"
    if isinstance(e, Pow):
        base = to_source(e.base)
        if _level(e.base) <= _LEVEL_POW:
            base = f"({base})"
        if e.exponent < 0:
            return f"{base}^-{_fmt_number(-e.exponent)}"
        return f"{base}^{_fmt_number(e.exponent)}"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# plain value evaluation (float or ndarray)
# ---------------------------------------------------------------------------


def _check(cond, exc_msg: str):
    if cond:
        raise DomainError(exc_msg)


def eval_value(e: Expr, x):
    """Evaluate e at x, which may be a float or an ndarray (elementwise)."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Unary):
        v = eval_value(e.arg, x)
        if e.op == "neg":
            return -v
        if e.op == "abs":
            return np.abs(v)
        if e.op == "sin":
            return np.sin(v)
        if e.op == "cos":
            return np.cos(v)
        if e.op == "exp":
            return np.exp(v)
        if e.op == "log":
            _check(np.any(np.asarray(v) <= 0.0), "log of non-positive argument")
            return np.log(v)
        if e.op == "sqrt":
            _check(np.any(np.asarray(v) < 0.0), "sqrt of negative argument")
            return np.sqrt(v)
        raise ValueError(f"unknown unary op {e.op!r}")
    if isinstance(e, Binary):
        lv = eval_value(e.left, x)
        rv = eval_value(e.right, x)
        if e.op == "add":
            return lv + rv
        if e.op == "sub":
            return lv - rv
        if e.op == "mul":
            return lv * rv
        if e.op == "div":
            _check(np.any(np.asarray(rv) == 0.0), "division by zero")
            return lv / rv
        raise ValueError(f"unknown binary op {e.op!r}")
    if isinstance(e, Pow):
        base = eval_value(e.base, x)
        k = e.exponent
        if float(k).is_integer():
            if k < 0:
                _check(np.any(np.asarray(base) == 0.0), "zero raised to negative power")
            return base ** int(k)
        _check(np.any(np.asarray(base) < 0.0), "negative base with non-integer exponent")
        return base**k
    raise TypeError(f"not an expression node: {e!r}")


def as_function(f):
    """Coerce an Expr (or expression text) into a plain callable of x."""
    if isinstance(f, str):
        f = parse(f)
    if isinstance(f, (Const, Var, Unary, Binary, Pow)):
        tree = f
        return lambda x: eval_value(tree, x)
    if callable(f):
        return f
    raise TypeError(f"expected an expression or callable, got {type(f).__name__}")
