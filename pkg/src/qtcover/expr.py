"""Parser, printer and evaluator for quantum torus expressions.

Grammar (adjoint binds tighter than powers, then products, then sums):

    expr   := ['-'] term {('+' | '-') term}
    term   := factor {'*' factor}
    factor := atom ['^' int] ["'"]
    atom   := 'u' [index] | 'v' | 'U' '(' int {',' int} ')' | 'e' '(' poly ')'
            | rational | '(' expr ')'

``u`` is u1 and ``v`` is u2; ``e(p)`` is the phase exp(2 pi i p(theta)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .phase import Poly, PolySyntaxError, Scalar, as_phase, format_poly, format_rational, parse_poly
from .torus import ThetaMatrix, TorusElement, adjoint, generator, monomial, multiply, one


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ExprEvalError(ValueError):
    pass


@dataclass(frozen=True)
class Gen:
    index: int  # 1-based


@dataclass(frozen=True)
class Mono:
    exps: tuple


@dataclass(frozen=True)
class Phase:
    poly: Poly


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Adj:
    arg: "Expr"


Expr = Union[Gen, Mono, Phase, Num, Neg, Add, Sub, Mul, Pow, Adj]
_ATOMS = (Gen, Mono, Phase, Num)

_TOKEN = re.compile(r"\s*(?:(?P<gen>u\d*|v|U|e)(?![A-Za-z])|(?P<int>\d+)|(?P<op>[-+*^'(),/]))")


def _tokenize(src: str):
    toks, pos = [], 0
    while pos < len(src):
        if not src[pos:].strip():
            break
        m = _TOKEN.match(src, pos)
        if not m:
            while src[pos].isspace():
                pos += 1
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "gen" and m.group(kind) == "e":
            # e(...) is one token holding the polynomial text
            open_at = m.end()
            while open_at < len(src) and src[open_at].isspace():
                open_at += 1
            if open_at >= len(src) or src[open_at] != "(":
                raise ExprSyntaxError("expected '(' after e", open_at)
            depth, j = 1, open_at + 1
            while j < len(src) and depth:
                depth += {"(": 1, ")": -1}.get(src[j], 0)
                j += 1
            if depth:
                raise ExprSyntaxError("unbalanced parentheses in e(...)", open_at)
            toks.append(("phase", src[open_at + 1:j - 1], open_at + 1))
            pos = j
            continue
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ExprSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Expr:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return node

    def expr(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            node = Neg(self.term())
        else:
            node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] == "*":
            self.take()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Expr:
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "int":
                raise ExprSyntaxError("expected an integer exponent", pos)
            node = Pow(node, sign * int(val))
        if self.peek()[1] == "'":
            self.take()
            node = Adj(node)
        return node

    def atom(self) -> Expr:
        kind, val, pos = self.peek()
        if kind == "gen":
            self.take()
            if val == "v":
                return Gen(2)
            if val == "U":
                return self.mono()
            index = int(val[1:]) if len(val) > 1 else 1
            if index < 1:
                raise ExprSyntaxError("generator indices start at 1", pos)
            return Gen(index)
        if kind == "phase":
            self.take()
            try:
                return Phase(parse_poly(val, offset=pos))
            except PolySyntaxError as exc:
                raise ExprSyntaxError(str(exc).rsplit(" at position", 1)[0], exc.position) from None
        if kind == "int":
            self.take()
            num = int(val)
            if self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "int" or int(v2) == 0:
                    raise ExprSyntaxError("expected a nonzero denominator", p2)
                return Num(Fraction(num, int(v2)))
            return Num(Fraction(num))
        if val == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos)

    def mono(self) -> Expr:
        self.take("(")
        exps = []
        while True:
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "int":
                raise ExprSyntaxError("expected an integer exponent", pos)
            exps.append(sign * int(val))
            if self.peek()[1] == ",":
                self.take()
                continue
            self.take(")")
            return Mono(tuple(exps))


def parse(src: str) -> Expr:
    """Parse text into an expression tree."""
    return _Parser(src).parse()


def to_text(node: Expr) -> str:
    """Print a tree so that ``parse(to_text(x)) == x``."""
    if isinstance(node, Gen):
        return {1: "u", 2: "v"}.get(node.index, f"u{node.index}")
    if isinstance(node, Mono):
        return "U(" + ",".join(str(x) for x in node.exps) + ")"
    if isinstance(node, Phase):
        return f"e({format_poly(node.poly.coeffs)})"
    if isinstance(node, Num):
        return format_rational(node.value)
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, (Add, Sub, Neg))
    if isinstance(node, (Add, Sub)):
        op = " + " if isinstance(node, Add) else " - "
        return to_text(node.left) + op + _wrap(node.right, (Add, Sub, Neg))
    if isinstance(node, Mul):
        return _wrap(node.left, (Add, Sub, Neg)) + "*" + _wrap(node.right, (Add, Sub, Neg, Mul))
    if isinstance(node, Pow):
        return _wrap(node.base, (Add, Sub, Neg, Mul, Pow, Adj)) + f"^{node.exp}"
    if isinstance(node, Adj):
        return _wrap(node.arg, (Add, Sub, Neg, Mul, Adj)) + "'"
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node: Expr, kinds: tuple) -> str:
    text = to_text(node)
    return f"({text})" if isinstance(node, kinds) else text


def evaluate(node: Expr, theta: ThetaMatrix) -> TorusElement:
    if isinstance(node, Gen):
        if node.index > theta.n:
            raise ExprEvalError(f"unknown generator u{node.index} (dimension {theta.n})")
        return generator(theta, node.index - 1)
    if isinstance(node, Mono):
        if len(node.exps) != theta.n:
            raise ExprEvalError(f"U{node.exps} does not match dimension {theta.n}")
        return monomial(theta, node.exps)
    if isinstance(node, Phase):
        return one(theta).scale(Scalar.phase(as_phase(node.poly)))
    if isinstance(node, Num):
        return one(theta).scale(node.value)
    if isinstance(node, Neg):
        return -evaluate(node.arg, theta)
    if isinstance(node, Add):
        return evaluate(node.left, theta) + evaluate(node.right, theta)
    if isinstance(node, Sub):
        return evaluate(node.left, theta) - evaluate(node.right, theta)
    if isinstance(node, Mul):
        return multiply(evaluate(node.left, theta), evaluate(node.right, theta))
    if isinstance(node, Pow):
        base = evaluate(node.base, theta)
        if node.exp < 0:
            mono = base.as_monomial()
            if mono is None:
                raise ExprEvalError("negative powers need a unitary monomial")
            base = adjoint(base)
        return base ** abs(node.exp)
    if isinstance(node, Adj):
        return adjoint(evaluate(node.arg, theta))
    raise TypeError(f"not an expression node: {node!r}")


def parse_expr(src: str, theta: ThetaMatrix) -> TorusElement:
    """Parse and evaluate ``src`` over ``theta``."""
    return evaluate(parse(src), theta)
