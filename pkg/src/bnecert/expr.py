"""Tiny math DSL for utility functions and prior densities.

Grammar (recursive descent, standard precedence):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | 'theta1' | 'theta2'
             | FUNC '(' expr (',' expr)* ')'
             | '(' expr ')'

'^' binds tighter than unary minus, so "-2^2" is -(2^2) = -4.
The only variables are theta1 and theta2; the only functions are
min, max, abs, exp, log, sqrt, sin, cos.  Trees are immutable and
evaluation is pure, so Expr values are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, UnknownIdentifier

VARIABLES = ("theta1", "theta2")

# name -> (min_arity, max_arity); None means unbounded
FUNCTIONS = {
    "min": (2, None),
    "max": (2, None),
    "abs": (1, 1),
    "exp": (1, 1),
    "log": (1, 1),
    "sqrt": (1, 1),
    "sin": (1, 1),
    "cos": (1, 1),
}


class Expr:
    """Base class for AST nodes."""

    __slots__ = ()

    def eval(self, theta1, theta2):
        raise NotImplementedError

    def __str__(self):
        return _render(self, 0)


@dataclass(frozen=True, slots=True)
class Num(Expr):
    value: float

    def eval(self, theta1, theta2):
        return self.value


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str

    def eval(self, theta1, theta2):
        return theta1 if self.name == "theta1" else theta2


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr

    def eval(self, theta1, theta2):
        return -self.arg.eval(theta1, theta2)


@dataclass(frozen=True, slots=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def eval(self, theta1, theta2):
        a = self.left.eval(theta1, theta2)
        b = self.right.eval(theta1, theta2)
        op = self.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0.0:
                raise DomainError("division by zero")
            return a / b
        # op == "^"
        if a < 0.0 and b != math.floor(b):
            raise DomainError(
                f"non-integer power {b!r} of negative base {a!r}"
            )
        if a == 0.0 and b < 0.0:
            raise DomainError("zero raised to a negative power")
        return a ** b


@dataclass(frozen=True, slots=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]

    def eval(self, theta1, theta2):
        vals = [a.eval(theta1, theta2) for a in self.args]
        name = self.name
        if name == "min":
            return min(vals)
        if name == "max":
            return max(vals)
        if name == "abs":
            return abs(vals[0])
        if name == "exp":
            return math.exp(vals[0])
        if name == "log":
            if vals[0] <= 0.0:
                raise DomainError(f"log of non-positive value {vals[0]!r}")
            return math.log(vals[0])
        if name == "sqrt":
            if vals[0] < 0.0:
                raise DomainError(f"sqrt of negative value {vals[0]!r}")
            return math.sqrt(vals[0])
        if name == "sin":
            return math.sin(vals[0])
        return math.cos(vals[0])


# ---------------------------------------------------------------------------
# tokenizer

_OPS = set("+-*/^(),")


def _tokenize(text):
    """Yield (kind, value, offset) triples; kind in {num, ident, op, end}."""
    tokens = []
    i, nchars = 0, len(text)
    while i < nchars:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < nchars and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < nchars and text[j] in "eE":
                k = j + 1
                if k < nchars and text[k] in "+-":
                    k += 1
                if k < nchars and text[k].isdigit():
                    j = k
                    while j < nchars and text[j].isdigit():
                        j += 1
            lit = text[i:j]
            try:
                value = float(lit)
            except ValueError:
                raise ExprSyntaxError(f"bad number literal {lit!r}", i) from None
            tokens.append(("num", value, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < nchars and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(("end", None, nchars))
    return tokens


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, symbol):
        kind, value, offset = self.peek()
        if kind != "op" or value != symbol:
            raise ExprSyntaxError(f"expected {symbol!r}", offset)
        return self.advance()

    def parse(self):
        e = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {value!r}", offset)
        return e

    def expr(self):
        e = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                e = BinOp(value, e, self.term())
            else:
                return e

    def term(self):
        e = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                e = BinOp(value, e, self.unary())
            else:
                return e

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, value, offset = self.advance()
        if kind == "num":
            return Num(value)
        if kind == "ident":
            if value in VARIABLES:
                return Var(value)
            if value in FUNCTIONS:
                return self.call(value, offset)
            raise UnknownIdentifier(value, offset)
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        what = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"expected operand, got {what}", offset)

    def call(self, name, name_offset):
        self.expect_op("(")
        args = [self.expr()]
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == ",":
                self.advance()
                args.append(self.expr())
            else:
                break
        self.expect_op(")")
        lo, hi = FUNCTIONS[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ExprSyntaxError(
                f"{name} takes {lo}{'+' if hi is None else ''} argument(s), "
                f"got {len(args)}",
                name_offset,
            )
        return Call(name, tuple(args))


def parse(text):
    """Parse DSL text into an immutable Expr tree."""
    return _Parser(text).parse()


def evaluate(text_or_expr, theta1, theta2):
    """Convenience: evaluate an Expr (or raw text) at a type pair."""
    e = text_or_expr
    if isinstance(e, str):
        e = parse(e)
    return e.eval(theta1, theta2)


# ---------------------------------------------------------------------------
# pretty-printing (minimal parentheses; reparses to the same evaluation)

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e):
    if isinstance(e, (Num, Var, Call)):
        return _PREC_ATOM
    if isinstance(e, Neg):
        return _PREC_NEG
    return {"+": _PREC_ADD, "-": _PREC_ADD,
            "*": _PREC_MUL, "/": _PREC_MUL,
            "^": _PREC_POW}[e.op]


def _render(e, parent_prec):
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({', '.join(_render(a, 0) for a in e.args)})"
    if isinstance(e, Neg):
        s = "-" + _render(e.arg, _PREC_NEG)
        return f"({s})" if parent_prec > _PREC_NEG else s
    # BinOp; left-associative except '^'
    prec = _prec(e)
    if e.op == "^":
        left = _render(e.left, _PREC_ATOM)     # base must be an atom
        right = _render(e.right, _PREC_NEG)    # exponent may be unary
    else:
        left = _render(e.left, prec)
        right = _render(e.right, prec + 1)
    s = f"{left} {e.op} {right}"
    return f"({s})" if parent_prec > prec else s
