"""The smooth quantum n-torus as a twisted group algebra over Z^n.

Elements are finitely supported sums of normal-ordered monomials
U(lam) = u_1^lam_1 ... u_n^lam_n with exact ``Scalar`` coefficients. The
product of monomials is U(lam) U(mu) = sigma(lam, mu) U(lam + mu) with

    sigma(lam, mu) = e(sum_{k > l} lam_k theta_kl mu_l),

which is what repeatedly applying u_k u_l = e(theta_kl) u_l u_k gives.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .lattice import Matrix, as_matrix, det
from .phase import (PhaseExponent, Poly, Scalar, ZERO_PHASE, as_phase, parse_poly,
                    parse_scalar)


class ThetaMatrix:
    """A real skew-symmetric matrix with entries in Q[t].

    Entries are kept unreduced: theta and theta + 1 are different matrices
    even though they give the same phases.
    """

    __slots__ = ("entries", "_phase", "_hash")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(e if isinstance(e, Poly) and not isinstance(e, PhaseExponent)
                           else _to_poly(e) for e in row) for row in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("theta must be square")
        for k in range(n):
            if not rows[k][k].is_zero():
                raise ValueError("theta must have zero diagonal")
            for l in range(k):
                if rows[k][l] != -rows[l][k]:
                    raise ValueError("theta must be skew-symmetric")
        self.entries = rows
        self._phase = tuple(tuple(PhaseExponent(e) for e in row) for row in rows)
        self._hash = None

    @classmethod
    def from_entry(cls, theta12) -> "ThetaMatrix":
        """The 2x2 matrix determined by its upper right entry."""
        p = _to_poly(theta12)
        return cls([[Poly(), p], [-p, Poly()]])

    @property
    def n(self) -> int:
        return len(self.entries)

    def phase(self, k: int, l: int) -> PhaseExponent:
        return self._phase[k][l]

    def sigma(self, lam: Sequence[int], mu: Sequence[int]) -> PhaseExponent:
        """Normal-ordering phase of U(lam) U(mu)."""
        out = ZERO_PHASE
        ph = self._phase
        for k in range(1, len(lam)):
            lk = lam[k]
            if lk:
                for l in range(k):
                    if mu[l]:
                        out = out + ph[k][l] * (lk * mu[l])
        return out

    def pairing(self, lam: Sequence[int], mu: Sequence[int]) -> PhaseExponent:
        """The phase e(<lam, theta mu>)."""
        out = ZERO_PHASE
        for k, lk in enumerate(lam):
            if lk:
                for l, ml in enumerate(mu):
                    if ml and k != l:
                        out = out + self._phase[k][l] * (lk * ml)
        return out

    def inner_gauge_parameter(self, mu: Sequence[int]) -> tuple:
        """s with Ad[U(mu)] = gauge(s): s_l = sum_k mu_k theta_kl."""
        n = self.n
        return tuple(sum((self.entries[k][l] * mu[k] for k in range(n)), Poly()) for l in range(n))

    def quite_irrational(self) -> bool:
        """True iff e(<lam, theta mu>) = 1 for all mu forces lam = 0.

        With t transcendental the condition on lam splits by t-degree: every
        positive-degree part must annihilate lam, and on the resulting integer
        kernel the constant part only takes finitely many values mod 1, so a
        nonzero solution exists iff the positive-degree parts have a common
        nonzero rational kernel vector.
        """
        n = self.n
        degrees = sorted({d for row in self.entries for e in row for d, _ in e.coeffs if d > 0})
        stacked = [[self.entries[k][l].coeff(d) for k in range(n)] for d in degrees for l in range(n)]
        return _rank(stacked, n) == n

    def __eq__(self, other):
        return isinstance(other, ThetaMatrix) and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        if self.n == 2:
            return f"ThetaMatrix.from_entry({str(self.entries[0][1])!r})"
        return f"ThetaMatrix({[[str(e) for e in r] for r in self.entries]!r})"

    def to_json(self) -> list:
        return [[str(e) for e in row] for row in self.entries]

    @classmethod
    def from_json(cls, data) -> "ThetaMatrix":
        return cls([[parse_poly(str(e)) for e in row] for row in data])


def _to_poly(x) -> Poly:
    if isinstance(x, PhaseExponent):
        return x.poly
    if isinstance(x, Poly):
        return x
    if isinstance(x, str):
        return parse_poly(x)
    return Poly(x)


def _rank(rows: list, ncols: int) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for c in range(ncols):
        p = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


class TorusElement:
    """A finitely supported element sum_lam c_lam U(lam) of the quantum torus."""

    __slots__ = ("theta", "terms")

    def __init__(self, theta: ThetaMatrix, terms: Mapping[Sequence[int], Scalar] | None = None):
        self.theta = theta
        clean = {}
        for lam, c in (terms or {}).items():
            lam = tuple(int(x) for x in lam)
            if len(lam) != theta.n:
                raise ValueError(f"exponent {lam} does not match dimension {theta.n}")
            if not isinstance(c, Scalar):
                c = Scalar.rational(c)
            if lam in clean:
                c = clean[lam] + c
            clean[lam] = c
        self.terms = {lam: c for lam, c in clean.items() if not c.is_zero()}

    @classmethod
    def _from(cls, theta, terms):
        obj = object.__new__(cls)
        obj.theta = theta
        obj.terms = {lam: c for lam, c in terms.items() if not c.is_zero()}
        return obj

    def _check(self, other: "TorusElement"):
        if self.theta != other.theta:
            raise ValueError("elements live over different theta")

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> frozenset:
        return frozenset(self.terms)

    def as_monomial(self):
        """(lam, phase) when this is exactly e(phase) U(lam), else None."""
        if len(self.terms) != 1:
            return None
        (lam, c), = self.terms.items()
        p = c.single_phase()
        return None if p is None else (lam, p)

    def __add__(self, other):
        other = _coerce(self.theta, other)
        if other is NotImplemented:
            return other
        self._check(other)
        acc = dict(self.terms)
        for lam, c in other.terms.items():
            acc[lam] = acc[lam] + c if lam in acc else c
        return TorusElement._from(self.theta, acc)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement._from(self.theta, {lam: -c for lam, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(self.theta, other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "TorusElement":
        if not isinstance(c, Scalar):
            c = Scalar.rational(c)
        return TorusElement._from(self.theta, {lam: x * c for lam, x in self.terms.items()})

    def __pow__(self, k: int) -> "TorusElement":
        base = self if k >= 0 else adjoint(self)
        out = one(self.theta)
        for _ in range(abs(k)):
            out = multiply(out, base)
        return out

    def adjoint(self) -> "TorusElement":
        return adjoint(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = one(self.theta).scale(other)
        if not isinstance(other, TorusElement) or other.theta != self.theta:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for lam in sorted(self.terms):
            c = self.terms[lam]
            mono = "U(" + ",".join(str(x) for x in lam) + ")"
            s = str(c)
            if len(c.terms) > 1:
                parts.append(f"({s})*{mono}")
            elif s == "1":
                parts.append(mono)
            elif s == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{s}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"TorusElement({str(self)!r})"

    def to_json(self) -> list:
        return [{"lambda": list(lam), "coeff": str(self.terms[lam])} for lam in sorted(self.terms)]

    @classmethod
    def from_json(cls, theta: ThetaMatrix, data) -> "TorusElement":
        return cls(theta, {tuple(d["lambda"]): parse_scalar(d["coeff"]) for d in data})


def _coerce(theta, x):
    if isinstance(x, TorusElement):
        return x
    if isinstance(x, (int, Fraction, Scalar)):
        return one(theta).scale(x)
    return NotImplemented


def monomial(theta: ThetaMatrix, lam: Sequence[int], phase=None) -> TorusElement:
    lam = tuple(lam)
    if len(lam) != theta.n:
        raise ValueError(f"exponent {lam} does not match dimension {theta.n}")
    c = Scalar.one() if phase is None else Scalar.phase(phase)
    return TorusElement._from(theta, {lam: c})


def one(theta: ThetaMatrix) -> TorusElement:
    return monomial(theta, (0,) * theta.n)


def generator(theta: ThetaMatrix, k: int) -> TorusElement:
    """The unitary u_k (0-based index)."""
    return monomial(theta, tuple(int(i == k) for i in range(theta.n)))


def multiply(a: TorusElement, b: TorusElement) -> TorusElement:
    a._check(b)
    theta = a.theta
    acc: dict = {}
    for lam, c in a.terms.items():
        for mu, d in b.terms.items():
            nu = tuple(x + y for x, y in zip(lam, mu))
            term = (c * d).times_phase(theta.sigma(lam, mu))
            acc[nu] = acc[nu] + term if nu in acc else term
    return TorusElement._from(theta, acc)


def monomial_inverse_phase(theta: ThetaMatrix, lam: Sequence[int]) -> PhaseExponent:
    """p with U(lam)^* = e(p) U(-lam)."""
    return -theta.sigma(lam, tuple(-x for x in lam))


def adjoint(a: TorusElement) -> TorusElement:
    theta = a.theta
    out = {}
    for lam, c in a.terms.items():
        out[tuple(-x for x in lam)] = c.conj().times_phase(monomial_inverse_phase(theta, lam))
    return TorusElement._from(theta, out)


def gauge(a: TorusElement, s: Sequence) -> TorusElement:
    """gamma_s: U(lam) -> e(<s, lam>) U(lam)."""
    if len(s) != a.theta.n:
        raise ValueError("gauge parameter has the wrong length")
    s = [as_phase(x) for x in s]
    out = {}
    for lam, c in a.terms.items():
        p = ZERO_PHASE
        for sk, lk in zip(s, lam):
            if lk:
                p = p + sk * lk
        out[lam] = c.times_phase(p)
    return TorusElement._from(a.theta, out)


def gauge_phase(s: Sequence, lam: Sequence[int]) -> PhaseExponent:
    p = ZERO_PHASE
    for sk, lk in zip(s, lam):
        if lk:
            p = p + as_phase(sk) * lk
    return p


def _check_sl2(m) -> Matrix:
    m = as_matrix(m)
    if len(m) != 2 or len(m[0]) != 2:
        raise ValueError("lattice transformations need a 2x2 matrix")
    if det(m) != 1:
        raise ValueError("lattice transformations need det M = 1")
    return m


def _mono_power(theta, r, k):
    """U(r)^k as (phase, exponent)."""
    if k < 0:
        p0 = monomial_inverse_phase(theta, r)
        r = tuple(-x for x in r)
        k = -k
        base_phase = p0
    else:
        base_phase = ZERO_PHASE
    phase, lam = ZERO_PHASE, (0,) * len(r)
    for _ in range(k):
        phase = phase + base_phase + theta.sigma(lam, r)
        lam = tuple(x + y for x, y in zip(lam, r))
    return phase, lam


@lru_cache(maxsize=200_000)
def lattice_image(theta: ThetaMatrix, m: Matrix, lam: tuple):
    """(phase, exponent) of the image of U(lam) under u -> u^a v^b, v -> u^c v^d."""
    (a, b), (c, d) = m
    p1, l1 = _mono_power(theta, (a, b), lam[0])
    p2, l2 = _mono_power(theta, (c, d), lam[1])
    return p1 + p2 + theta.sigma(l1, l2), (l1[0] + l2[0], l1[1] + l2[1])


def lattice_transform(a: TorusElement, m) -> TorusElement:
    """Lattice transformation for n = 2 and M = [[a, b], [c, d]] in SL2(Z).

    Acts on generators by u -> u^a v^b, v -> u^c v^d and is extended
    multiplicatively, so U(lam) lands on the single exponent M^T lam.
    """
    if a.theta.n != 2:
        raise ValueError("lattice transformations are defined for n = 2 only")
    m = _check_sl2(m)
    out = {}
    for lam, c in a.terms.items():
        p, nu = lattice_image(a.theta, m, lam)
        out[nu] = c.times_phase(p)
    return TorusElement._from(a.theta, out)


def inner_ad(mu: Sequence[int], a: TorusElement) -> TorusElement:
    """Ad[U(mu)](a) = U(mu) a U(mu)^*, computed through the product."""
    u = monomial(a.theta, mu)
    return multiply(multiply(u, a), adjoint(u))


def isotypic_project(a: TorusElement, predicate: Callable[[tuple], bool]) -> TorusElement:
    return TorusElement._from(a.theta, {lam: c for lam, c in a.terms.items() if predicate(lam)})


def box(n: int, bound: int) -> Iterable[tuple]:
    """All exponent vectors with sup-norm <= bound."""
    return itertools.product(range(-bound, bound + 1), repeat=n)


def brute_force_product(theta: ThetaMatrix, lam: Sequence[int], mu: Sequence[int]) -> TorusElement:
    """U(lam) U(mu) by spelling out the word and bubble-sorting single letters.

    Each swap of adjacent letters u_k^x u_l^y (k > l, x, y = +-1) into
    u_l^y u_k^x contributes e(x y theta_kl); adjacent inverse letters cancel.
    Independent of ``sigma``; used as an oracle.
    """
    word = []
    for vec in (lam, mu):
        for k, e in enumerate(vec):
            word.extend([(k, 1 if e > 0 else -1)] * abs(e))
    phase = ZERO_PHASE
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(word) - 1:
            (k, x), (l, y) = word[i], word[i + 1]
            if k == l and x == -y:
                del word[i:i + 2]
                changed = True
                continue
            if k > l:
                phase = phase + theta.phase(k, l) * (x * y)
                word[i], word[i + 1] = word[i + 1], word[i]
                changed = True
            i += 1
    out = [0] * theta.n
    for k, x in word:
        out[k] += x
    return monomial(theta, tuple(out), phase)
