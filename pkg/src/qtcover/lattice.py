"""Integer lattice arithmetic on Z^n: normal forms, quotients, sublattices.

Matrices are tuples of row tuples. A matrix M stands for the lattice M.Z^n
spanned by its *columns*. The Hermite normal form is column-style: lower
triangular, positive diagonal, 0 <= H[i][j] < H[i][i] for j < i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

Matrix = tuple  # tuple[tuple[int, ...], ...]


class SingularMatrixError(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def diag(*entries: int) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def det(m: Matrix):
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: Matrix) -> tuple:
    """Exact rational inverse (Gauss-Jordan over Fraction)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def xgcd(a: int, b: int):
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(m: Matrix):
    """Column-style HNF: returns (H, U) with H = M U, U unimodular.

    Raises SingularMatrixError when det M == 0.
    """
    n = len(m)
    if det(m) == 0:
        raise SingularMatrixError("HNF requires a nonsingular matrix")
    h = [list(r) for r in m]
    u = [list(r) for r in identity(n)]

    def colop(j, k, a, b, c, d):
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for mat in (h, u):
            for row in mat:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    for i in range(n):
        for k in range(i + 1, n):
            if h[i][k] == 0:
                continue
            g, x, y = xgcd(h[i][i], h[i][k])
            p, q = h[i][i] // g, h[i][k] // g
            colop(i, k, x, y, -q, p)
        if h[i][i] < 0:
            colop(i, i, -1, 0, 0, -1)
        for j in range(i):
            f = h[i][j] // h[i][i]
            if f:
                colop(j, i, 1, -f, 0, 1)
    return as_matrix(h), as_matrix(u)


def smith_normal_form(m: Matrix):
    """Return (D, U, V) with D = U M V diagonal, d1 | d2 | ..., U, V unimodular.

    Works for rectangular and singular integer matrices; diagonal entries are
    nonnegative.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def rowop(i, k, a, b, c, e):
        for mat in (d, u):
            ri, rk = mat[i], mat[k]
            mat[i] = [a * x + b * y for x, y in zip(ri, rk)]
            mat[k] = [c * x + e * y for x, y in zip(ri, rk)]

    def colop(j, k, a, b, c, e):
        for mat in (d, v):
            for row in mat:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + e * y

    t = 0
    while t < min(rows, cols):
        nz = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        if pi != t:
            rowop(t, pi, 0, 1, 1, 0)
        if pj != t:
            colop(t, pj, 0, 1, 1, 0)
        while True:
            # plain subtraction when the pivot divides, so it never grows back
            for i in range(t + 1, rows):
                if d[i][t] % d[t][t] == 0:
                    rowop(t, i, 1, 0, -(d[i][t] // d[t][t]), 1)
                else:
                    g, x, y = xgcd(d[t][t], d[i][t])
                    a, b = d[t][t] // g, d[i][t] // g
                    rowop(t, i, x, y, -b, a)
            for j in range(t + 1, cols):
                if d[t][j] % d[t][t] == 0:
                    colop(t, j, 1, 0, -(d[t][j] // d[t][t]), 1)
                else:
                    g, x, y = xgcd(d[t][t], d[t][j])
                    a, b = d[t][t] // g, d[t][j] // g
                    colop(t, j, x, y, -b, a)
            if any(d[i][t] for i in range(t + 1, rows)):
                continue
            piv = d[t][t]
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if d[i][j] % piv), None)
            if bad is None:
                break
            # pull an offending row into row t so the pivot shrinks
            rowop(t, bad, 1, 1, 0, 1)
        if d[t][t] < 0:
            rowop(t, t, -1, 0, 0, -1)
        t += 1
    return as_matrix(d), as_matrix(u), as_matrix(v)


def hnf_reduce(h: Matrix, x: Sequence[int]) -> tuple:
    """Canonical representative of x modulo H.Z^n in the HNF fundamental box."""
    x = list(x)
    for i in range(len(h)):
        f = x[i] // h[i][i]
        if f:
            for r in range(i, len(h)):
                x[r] -= f * h[r][i]
    return tuple(x)


def lattice_contains(m: Matrix, x: Sequence[int]) -> bool:
    h, _ = hermite_normal_form(m)
    return not any(hnf_reduce(h, x))


def same_lattice(a: Matrix, b: Matrix) -> bool:
    return all(lattice_contains(a, col) for col in transpose(b)) and all(
        lattice_contains(b, col) for col in transpose(a))


@dataclass(frozen=True)
class QuotientGroup:
    """The finite group Z^n / M.Z^n.

    ``coords`` maps a vector to its coordinates in the invariant-factor
    decomposition Z/d1 + ... + Z/dk; ``gens`` are integer vectors mapping to
    the standard generators of those factors.
    """

    matrix: Matrix
    hnf: Matrix
    invariant_factors: tuple
    _coord_rows: tuple = field(repr=False)
    gens: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @cached_property
    def coset_reps(self) -> tuple:
        ranges = [range(self.hnf[i][i]) for i in range(self.n)]
        return tuple(itertools.product(*ranges))

    def reduce(self, x: Sequence[int]) -> tuple:
        return hnf_reduce(self.hnf, x)

    def coords(self, x: Sequence[int]) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, x)) % d
                     for row, d in zip(self._coord_rows, self.invariant_factors))

    def characters(self) -> tuple:
        """Characters as exponent tuples c, chi_c(x) = e(sum c_i coords_i(x) / d_i)."""
        return tuple(itertools.product(*(range(d) for d in self.invariant_factors)))

    def character_value(self, c: Sequence[int], x: Sequence[int]) -> Fraction:
        return sum((Fraction(ci * xi, d) for ci, xi, d in zip(c, self.coords(x), self.invariant_factors)),
                   Fraction(0)) % 1


def quotient_group(m: Matrix) -> QuotientGroup:
    m = as_matrix(m)
    h, _ = hermite_normal_form(m)
    dmat, u, v = smith_normal_form(m)
    n = len(m)
    uinv = inverse(u)
    rows, factors, gens = [], [], []
    for i in range(n):
        d = dmat[i][i]
        if d > 1:
            factors.append(d)
            rows.append(u[i])
            gens.append(tuple(int(uinv[r][i]) for r in range(n)))
    return QuotientGroup(m, h, tuple(factors), tuple(rows), tuple(gens))


def _divisor_tuples(n: int, index: int):
    if n == 1:
        yield (index,)
        return
    for d in range(1, index + 1):
        if index % d == 0:
            for rest in _divisor_tuples(n - 1, index // d):
                yield (d,) + rest


def sublattices_of_index(n: int, index: int) -> list:
    out = []
    for dg in _divisor_tuples(n, index):
        slots = [(i, j) for i in range(n) for j in range(i)]
        for vals in itertools.product(*(range(dg[i]) for i, _ in slots)):
            h = [[0] * n for _ in range(n)]
            for i in range(n):
                h[i][i] = dg[i]
            for (i, j), x in zip(slots, vals):
                h[i][j] = x
            out.append(as_matrix(h))
    out.sort(key=lambda h: tuple(itertools.chain.from_iterable(h)))
    return out


def enumerate_sublattices(n: int, max_index: int) -> list:
    """One HNF per sublattice of Z^n with index <= max_index, sorted by (index, entries)."""
    if n < 1 or max_index < 1:
        raise ValueError("need n >= 1 and max_index >= 1")
    out = []
    for m in range(1, max_index + 1):
        out.extend(sublattices_of_index(n, m))
    return out


def format_matrix(m: Matrix) -> list:
    return [[str(x) for x in row] for row in m]


def parse_matrix(data) -> Matrix:
    return as_matrix([[int(x) for x in row] for row in data])
