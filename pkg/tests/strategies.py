"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from qtcover.phase import PhaseExponent, Poly, Scalar
from qtcover.torus import ThetaMatrix, TorusElement


def rationals(bound: int = 10, max_den: int = 12):
    return st.builds(lambda n, d: Fraction(n, d), st.integers(-bound * max_den, bound * max_den),
                     st.integers(1, max_den)).filter(lambda q: abs(q) <= bound)


def polys(max_degree: int = 3, bound: int = 10):
    return st.dictionaries(st.integers(0, max_degree), rationals(bound), max_size=max_degree + 1).map(Poly)


def phases(max_degree: int = 3, bound: int = 10):
    return polys(max_degree, bound).map(PhaseExponent)


def scalars(max_terms: int = 4):
    return st.dictionaries(phases(2, 3), rationals(3, 6), max_size=max_terms).map(Scalar)


def thetas(n: int, bound: int = 2):
    """Random skew matrices with entries c*t + q."""
    entry = st.tuples(rationals(bound, 6), rationals(bound, 6)).map(lambda cq: Poly({1: cq[0], 0: cq[1]}))

    def build(vals):
        m = [[Poly() for _ in range(n)] for _ in range(n)]
        it = iter(vals)
        for i in range(n):
            for j in range(i + 1, n):
                m[i][j] = next(it)
                m[j][i] = -m[i][j]
        return ThetaMatrix(m)

    return st.lists(entry, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(build)


def exponents(n: int, bound: int = 3):
    return st.tuples(*(st.integers(-bound, bound) for _ in range(n)))


def elements(theta: ThetaMatrix, max_terms: int = 3, bound: int = 2):
    return st.dictionaries(exponents(theta.n, bound), scalars(2), max_size=max_terms).map(
        lambda d: TorusElement(theta, d))
