"""Exact phases e(p(t)) = exp(2 pi i p(theta)) and their rational combinations.

``t`` is a formal transcendental standing in for theta, so a phase is trivial
exactly when its exponent reduces to the zero polynomial modulo integer
constants.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Poly:
    """A polynomial in ``t`` with rational coefficients (no reduction mod 1)."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | Iterable | Rational = ()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = {0: coeffs}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for d, c in items:
            if d < 0:
                raise ValueError("negative degree")
            acc[d] = acc.get(d, Fraction(0)) + _frac(c)
        self._c = tuple(sorted((d, c) for d, c in acc.items() if c))
        self._hash = None

    @classmethod
    def _raw(cls, pairs: tuple) -> "Poly":
        obj = object.__new__(cls)
        obj._c = pairs
        obj._hash = None
        return obj

    @classmethod
    def t(cls, coeff: Rational = 1, degree: int = 1) -> "Poly":
        return cls({degree: coeff})

    @property
    def coeffs(self) -> tuple:
        return self._c

    def coeff(self, degree: int) -> Fraction:
        for d, c in self._c:
            if d == degree:
                return c
        return Fraction(0)

    @property
    def degree(self) -> int:
        return self._c[-1][0] if self._c else -1

    def is_zero(self) -> bool:
        return not self._c

    def is_integer(self) -> bool:
        return all(d == 0 and c.denominator == 1 for d, c in self._c)

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        acc = dict(self._c)
        for d, c in other._c:
            acc[d] = acc.get(d, 0) + c
        return Poly._raw(tuple(sorted((d, c) for d, c in acc.items() if c)))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple((d, -c) for d, c in self._c))

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(())
            return Poly._raw(tuple((d, c * other) for d, c in self._c))
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        acc: dict[int, Fraction] = {}
        for d1, c1 in self._c:
            for d2, c2 in other._c:
                acc[d1 + d2] = acc.get(d1 + d2, 0) + c1 * c2
        return Poly._raw(tuple(sorted((d, c) for d, c in acc.items() if c)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly(other)
        if not isinstance(other, Poly) or isinstance(other, PhaseExponent) != isinstance(self, PhaseExponent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self._c))
        return self._hash

    def __lt__(self, other):
        return self._c < other._c

    def __str__(self):
        return format_poly(self._c)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return cls(parse_poly(text)._c) if cls is not Poly else parse_poly(text)


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly(x)
    return NotImplemented


def format_poly(pairs: tuple) -> str:
    if not pairs:
        return "0"
    out = []
    for i, (d, c) in enumerate(pairs):
        neg = c < 0
        a = -c if neg else c
        if d == 0:
            body = format_rational(a)
        else:
            mono = "t" if d == 1 else f"t^{d}"
            num, den = a.numerator, a.denominator
            body = mono if num == 1 else f"{num}*{mono}"
            if den != 1:
                body += f"/{den}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_POLY_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|([-+*/^()]))")


def _poly_tokens(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        toks.append((m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("", len(text)))
    return toks


def parse_poly(text: str, offset: int = 0) -> Poly:
    """Parse a rational polynomial in ``t`` such as ``"-1/2 + 3*t^2/4"``.

    Division is only allowed by nonzero constants. ``offset`` shifts the
    reported error positions (used when the polynomial is embedded in a
    larger expression).
    """
    toks = _poly_tokens(text)
    i = 0

    def peek():
        return toks[i][0]

    def take(expected=None):
        nonlocal i
        tok, p = toks[i]
        if expected is not None and tok != expected:
            raise PolySyntaxError(f"expected {expected!r}, found {tok or 'end'!r}", p + offset)
        i += 1
        return tok, p

    def expr():
        sign = 1
        if peek() in "+-" and peek():
            sign = -1 if take()[0] == "-" else 1
        acc = term() * sign
        while peek() in ("+", "-"):
            op = take()[0]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = power()
        while peek() in ("*", "/", "t", "("):
            # "2t" and "3(t+1)" read as products
            op, p = take() if peek() in ("*", "/") else ("*", toks[i][1])
            rhs = power()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.degree > 0 or rhs.is_zero():
                    raise PolySyntaxError("division by a non-constant or zero", p + offset)
                acc = acc / rhs.coeff(0)
        return acc

    def power():
        base = atom()
        if peek() == "^":
            take()
            tok, p = take()
            if not tok.isdigit():
                raise PolySyntaxError("expected a nonnegative integer exponent", p + offset)
            base = base ** int(tok)
        return base

    def atom():
        tok, p = toks[i]
        if tok.isdigit():
            take()
            return Poly(int(tok))
        if tok == "t":
            take()
            return Poly.t()
        if tok == "(":
            take()
            inner = expr()
            take(")")
            return inner
        if tok == "-":
            take()
            return -atom()
        raise PolySyntaxError(f"unexpected token {tok or 'end'!r}", p + offset)

    result = expr()
    if peek() != "":
        raise PolySyntaxError(f"trailing input {peek()!r}", toks[i][1] + offset)
    return result


class PhaseExponent(Poly):
    """Exponent of the unit phase e(p(t)); the constant term lives in [0, 1)."""

    __slots__ = ()

    def __init__(self, coeffs=()):
        base = coeffs if isinstance(coeffs, Poly) else Poly(coeffs)
        self._c = _reduce(base._c)
        self._hash = None

    @classmethod
    def _raw(cls, pairs: tuple) -> "PhaseExponent":
        obj = object.__new__(cls)
        obj._c = _reduce(pairs)
        obj._hash = None
        return obj

    @classmethod
    def t(cls, coeff: Rational = 1, degree: int = 1) -> "PhaseExponent":
        return cls({degree: coeff})

    @property
    def poly(self) -> Poly:
        return Poly._raw(self._c)

    def is_trivial(self) -> bool:
        return not self._c

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PhaseExponent(other)
        if not isinstance(other, PhaseExponent):
            return NotImplemented
        return PhaseExponent._raw(Poly.__add__(Poly._raw(self._c), Poly._raw(other._c))._c)

    __radd__ = __add__

    def __neg__(self):
        return PhaseExponent._raw(tuple((d, -c) for d, c in self._c))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PhaseExponent(other)
        if not isinstance(other, PhaseExponent):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k):
        # only integer multiples are well defined on phases
        if isinstance(k, int):
            return PhaseExponent._raw(tuple((d, c * k) for d, c in self._c))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        return NotImplemented

    def __pow__(self, k):
        return NotImplemented


def _reduce(pairs: tuple) -> tuple:
    if pairs and pairs[0][0] == 0:
        c0 = pairs[0][1] % 1
        if c0:
            return ((0, c0),) + tuple(pairs[1:])
        return tuple(pairs[1:])
    return tuple(pairs)


ZERO_PHASE = PhaseExponent()


def phase_combine(p: PhaseExponent, q: PhaseExponent) -> PhaseExponent:
    return as_phase(p) + as_phase(q)


def phase_is_trivial(p: PhaseExponent) -> bool:
    return as_phase(p).is_trivial()


def as_phase(x) -> PhaseExponent:
    if isinstance(x, PhaseExponent):
        return x
    if isinstance(x, Poly):
        return PhaseExponent(x)
    if isinstance(x, str):
        return PhaseExponent(parse_poly(x))
    return PhaseExponent(_frac(x))


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple:
    """Integer coefficients (ascending) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, list(cyclotomic(d)))
    return tuple(num)


def _polydiv_exact(num: list, den: list) -> list:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        q = num[k + len(den) - 1] // den[-1]
        out[k] = q
        for j, c in enumerate(den):
            num[k + j] -= q * c
    assert not any(num), "inexact cyclotomic division"
    return out


def _roots_of_unity_sum_is_zero(terms: list) -> bool:
    """Decide sum(c * e(a)) == 0 for rationals a (the constant phase parts)."""
    if len(terms) == 1:
        return not terms[0][1]
    n = 1
    for a, _ in terms:
        n = n * a.denominator // math.gcd(n, a.denominator)
    poly = [Fraction(0)] * n
    for a, c in terms:
        poly[int(a * n) % n] += c
    phi = cyclotomic(n)
    deg = len(phi) - 1
    # reduce modulo the monic minimal polynomial of e(1/n)
    for k in range(n - 1, deg - 1, -1):
        c = poly[k]
        if c:
            poly[k] = Fraction(0)
            for j in range(deg):
                poly[k - deg + j] -= c * phi[j]
    return not any(poly[:deg])


class Scalar:
    """A finite rational combination of phases, sum r_k e(p_k(t)).

    Equality is decided exactly: phases with the same non-constant part are
    combined as elements of a cyclotomic field, so e(0) + e(1/2) == 0.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[PhaseExponent, Rational] | None = None):
        acc: dict[PhaseExponent, Fraction] = {}
        for p, c in (terms or {}).items():
            p = as_phase(p)
            acc[p] = acc.get(p, Fraction(0)) + _frac(c)
        self.terms = _prune(acc)

    @classmethod
    def _from(cls, acc: dict) -> "Scalar":
        obj = object.__new__(cls)
        obj.terms = _prune(acc)
        return obj

    @classmethod
    def one(cls) -> "Scalar":
        return cls({ZERO_PHASE: 1})

    @classmethod
    def phase(cls, p, coeff: Rational = 1) -> "Scalar":
        return cls({as_phase(p): coeff})

    @classmethod
    def rational(cls, q: Rational) -> "Scalar":
        return cls({ZERO_PHASE: q})

    def is_zero(self) -> bool:
        return not self.terms

    def single_phase(self) -> PhaseExponent | None:
        """The phase p if this scalar is exactly e(p), else None."""
        if len(self.terms) == 1:
            (p, c), = self.terms.items()
            if c == 1:
                return p
        return None

    def __add__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for p, c in other.terms.items():
            acc[p] = acc.get(p, 0) + c
        return Scalar._from(acc)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._from({p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        acc: dict[PhaseExponent, Fraction] = {}
        for p, c in self.terms.items():
            for q, d in other.terms.items():
                r = p + q
                acc[r] = acc.get(r, 0) + c * d
        return Scalar._from(acc)

    __rmul__ = __mul__

    def times_phase(self, p: PhaseExponent) -> "Scalar":
        if p.is_trivial():
            return self
        out = object.__new__(Scalar)
        out.terms = {q + p: c for q, c in self.terms.items()}
        return out

    def conj(self) -> "Scalar":
        return Scalar._from({-p: c for p, c in self.terms.items()})

    def __eq__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for p, c in sorted(self.terms.items(), key=lambda kv: kv[0]._c):
            parts.append(_format_term(c, p))
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self):
        return f"Scalar({str(self)!r})"


def _format_term(c: Fraction, p: PhaseExponent) -> str:
    if p.is_trivial():
        return format_rational(c)
    ph = f"e({p})"
    if c == 1:
        return ph
    if c == -1:
        return "-" + ph
    return f"{format_rational(c)}*{ph}"


def _prune(acc: dict) -> dict:
    acc = {p: c for p, c in acc.items() if c}
    if len(acc) < 2:
        return acc
    groups: dict[tuple, list] = {}
    for p, c in acc.items():
        key = tuple(dc for dc in p._c if dc[0] > 0)
        groups.setdefault(key, []).append((p, c))
    for members in groups.values():
        if len(members) > 1:
            if _roots_of_unity_sum_is_zero([(p.coeff(0), c) for p, c in members]):
                for p, _ in members:
                    del acc[p]
    return acc


def _as_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.rational(x)
    return NotImplemented


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_conj(a: Scalar) -> Scalar:
    return a.conj()


def parse_scalar(text: str) -> Scalar:
    """Inverse of ``str(Scalar)``: terms like ``-2/3*e(1/2 + t)``."""
    text = text.strip()
    if text == "0":
        return Scalar()
    out = Scalar()
    # split at top-level +/- (outside parentheses)
    depth, start, pieces = 0, 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and text[i - 1] == " ":
            pieces.append(text[start:i])
            start = i
    pieces.append(text[start:])
    for piece in pieces:
        piece = piece.replace(" ", "")
        sign = 1
        if piece[0] in "+-":
            sign = -1 if piece[0] == "-" else 1
            piece = piece[1:]
        if piece.startswith("e("):
            coeff, phase = Fraction(1), piece[2:-1]
        elif "*e(" in piece:
            c, rest = piece.split("*e(", 1)
            coeff, phase = Fraction(c), rest[:-1]
        else:
            coeff, phase = Fraction(piece), "0"
        out = out + Scalar.phase(phase, sign * coeff)
    return out
