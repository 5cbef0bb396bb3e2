"""Finite abelian groups given by cyclic factors, and central extensions of them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .lattice import quotient_group


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d1 x ... x Z/dk; elements and characters are exponent tuples.

    The pairing chi(g) = e(sum g_i chi_i / d_i) identifies the dual group with
    tuples over the same factors.
    """

    invariant_factors: tuple

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        if any(d < 1 for d in factors):
            raise ValueError("cyclic factors must be positive")
        object.__setattr__(self, "invariant_factors", tuple(d for d in factors if d > 1))

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def elements(self) -> tuple:
        return tuple(itertools.product(*(range(d) for d in self.invariant_factors)))

    @property
    def characters(self) -> tuple:
        return self.elements

    @property
    def zero(self) -> tuple:
        return (0,) * self.rank

    def generators(self) -> tuple:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    def normalize(self, g: Sequence[int]) -> tuple:
        if len(g) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(g)}")
        return tuple(int(x) % d for x, d in zip(g, self.invariant_factors))

    def add(self, g, h) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(g, h, self.invariant_factors))

    def neg(self, g) -> tuple:
        return tuple(-a % d for a, d in zip(g, self.invariant_factors))

    def pairing(self, g, chi) -> Fraction:
        """Exponent of chi(g) in [0, 1)."""
        return sum((Fraction(a * b, d) for a, b, d in zip(g, chi, self.invariant_factors)), Fraction(0)) % 1

    def element_order(self, g) -> int:
        k, x = 1, self.normalize(g)
        while any(x):
            x = self.add(x, g)
            k += 1
        return k

    def subgroups(self) -> list:
        """All subgroups, as sorted tuples of elements (brute force)."""
        found = set()
        for gens in itertools.chain.from_iterable(
                itertools.combinations(self.elements, r) for r in range(self.rank + 1)):
            found.add(self.generated(gens))
        return sorted(found, key=lambda s: (len(s), s))

    def generated(self, gens) -> tuple:
        span = {self.zero}
        frontier = [self.zero]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.add(x, g)
                if y not in span:
                    span.add(y)
                    frontier.append(y)
        return tuple(sorted(span))

    def annihilator(self, chars) -> tuple:
        return tuple(g for g in self.elements if all(self.pairing(g, c) == 0 for c in chars))


class CocycleError(ValueError):
    pass


def check_symmetric_cocycle(n: FiniteAbelianGroup, h: FiniteAbelianGroup,
                            omega: Callable[[tuple, tuple], tuple]) -> None:
    """Raise unless omega: H x H -> N is a normalized symmetric 2-cocycle."""
    for a in h.elements:
        if n.normalize(omega(h.zero, a)) != n.zero or n.normalize(omega(a, h.zero)) != n.zero:
            raise CocycleError("omega is not normalized")
        for b in h.elements:
            if n.normalize(omega(a, b)) != n.normalize(omega(b, a)):
                raise CocycleError("omega is not symmetric")
            for c in h.elements:
                lhs = n.add(omega(a, b), omega(h.add(a, b), c))
                rhs = n.add(omega(b, c), omega(a, h.add(b, c)))
                if lhs != rhs:
                    raise CocycleError("omega fails the cocycle identity")


class Extension:
    """The central extension G = N x_omega H with (n, h)(n', h') = (n + n' + omega(h, h'), h + h').

    ``coords`` identifies G with a product of cyclic groups: G is presented
    on the generators of N and H, with relations d_i e_i = 0 for N and
    f_j e'_j = c_j (the N-part of the f_j-th power of e'_j).
    """

    def __init__(self, n: FiniteAbelianGroup, h: FiniteAbelianGroup, omega: Callable[[tuple, tuple], tuple]):
        check_symmetric_cocycle(n, h, omega)
        self.N, self.H = n, h
        self._omega = omega
        k, l = n.rank, h.rank
        cols = []
        for i, d in enumerate(n.invariant_factors):
            cols.append([d if r == i else 0 for r in range(k + l)])
        for j, f in enumerate(h.invariant_factors):
            gen = (n.zero, h.generators()[j])
            acc = self.identity
            for _ in range(f):
                acc = self.mul(acc, gen)
            assert not any(acc[1])
            cols.append([-x for x in acc[0]] + [f if r == j else 0 for r in range(l)])
        rel = tuple(tuple(cols[c][r] for c in range(k + l)) for r in range(k + l))
        self.presentation = quotient_group(rel) if rel else None
        self.group = FiniteAbelianGroup(self.presentation.invariant_factors if rel else ())
        self._to_coords = {}
        for g in self.elements():
            self._to_coords[g] = self.presentation.coords(self._word(g)) if rel else ()
        if len(set(self._to_coords.values())) != self.group.order or self.group.order != n.order * h.order:
            raise AssertionError("extension presentation is inconsistent")

    def _word(self, g) -> list:
        # (n, h) = (n - c, 0) * prod_j (0, e'_j)^{h_j}, where c is the N-part of the product
        acc = self.identity
        for j, e in enumerate(g[1]):
            gen = (self.N.zero, self.H.generators()[j])
            for _ in range(e):
                acc = self.mul(acc, gen)
        assert acc[1] == g[1]
        return [a - c for a, c in zip(g[0], acc[0])] + list(g[1])

    def omega(self, a, b) -> tuple:
        return self.N.normalize(self._omega(a, b))

    @property
    def identity(self):
        return (self.N.zero, self.H.zero)

    def mul(self, g, h):
        return (self.N.add(self.N.add(g[0], h[0]), self.omega(g[1], h[1])), self.H.add(g[1], h[1]))

    def elements(self) -> list:
        return [(a, b) for b in self.H.elements for a in self.N.elements]

    def coords(self, g) -> tuple:
        return self._to_coords[g]

    def character_value(self, chi, g) -> Fraction:
        return self.group.pairing(self.coords(g), chi)

    def element_order(self, g) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k
