"""Connected coverings of quantum n-tori.

A connected covering of A_theta is determined by a full-rank sublattice
Gamma = M Z^n together with a solution theta' of

    M theta' M^T = theta  (mod integer matrices).

The covering algebra is A_theta' with G = Z^n / M Z^n acting by the gauge
transformations gamma'_{M^-1 m}; A_theta sits inside as the fixed points via
u_k -> U(M^T e_k).
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import (Matrix, QuotientGroup, SingularMatrixError, as_matrix, det,
                      enumerate_sublattices, format_matrix, inverse,
                      lattice_contains, matvec, quotient_group, transpose)
from .phase import PhaseExponent, Poly, Scalar, as_phase
from .torus import (ThetaMatrix, TorusElement, box, gauge, gauge_phase, monomial, multiply, one)


class CoveringError(ValueError):
    """Inputs do not describe a connected covering."""


def _poly_matmul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return tuple(tuple(sum((a[i][r] * b[r][j] for r in range(k)), Poly()) for j in range(m))
                 for i in range(n))


def check_skew_integer(k: Matrix, n: int) -> Matrix:
    k = as_matrix(k)
    if len(k) != n or any(len(r) != n for r in k):
        raise CoveringError(f"K must be {n}x{n}")
    if any(k[i][j] != -k[j][i] for i in range(n) for j in range(n)):
        raise CoveringError("K must be skew-symmetric")
    return k


def theta_relation_defect(theta: ThetaMatrix, m: Matrix, theta_prime: ThetaMatrix) -> tuple:
    """M theta' M^T - theta as a matrix of polynomials."""
    mp = tuple(tuple(Poly(x) for x in row) for row in m)
    prod = _poly_matmul(_poly_matmul(mp, theta_prime.entries), transpose(mp))
    return tuple(tuple(prod[i][j] - theta.entries[i][j] for j in range(theta.n)) for i in range(theta.n))


def satisfies_theta_relation(theta: ThetaMatrix, m: Matrix, theta_prime: ThetaMatrix) -> bool:
    if theta.n != theta_prime.n or len(m) != theta.n:
        return False
    return all(e.is_integer() for row in theta_relation_defect(theta, m, theta_prime) for e in row)


def solve_theta_prime(theta: ThetaMatrix, m: Matrix, k: Matrix | None = None) -> ThetaMatrix:
    """theta' = M^-1 (theta + K) M^-T, checked against the defining congruence."""
    m = as_matrix(m)
    n = theta.n
    if len(m) != n or any(len(r) != n for r in m):
        raise CoveringError(f"M must be {n}x{n}")
    if det(m) == 0:
        raise SingularMatrixError("M must be nonsingular")
    k = check_skew_integer(k if k is not None else [[0] * n for _ in range(n)], n)
    minv = tuple(tuple(Poly(x) for x in row) for row in inverse(m))
    shifted = tuple(tuple(theta.entries[i][j] + k[i][j] for j in range(n)) for i in range(n))
    tp = ThetaMatrix(_poly_matmul(_poly_matmul(minv, shifted), transpose(minv)))
    defect = theta_relation_defect(theta, m, tp)
    if any(defect[i][j] != Poly(k[i][j]) for i in range(n) for j in range(n)):
        raise AssertionError("theta' does not reproduce theta + K")
    return tp


def _skew_matrices(n: int, bound: int):
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for vals in itertools.product(range(-bound, bound + 1), repeat=len(slots)):
        k = [[0] * n for _ in range(n)]
        for (i, j), x in zip(slots, vals):
            k[i][j], k[j][i] = x, -x
        yield as_matrix(k)


def theta_corrections(theta: ThetaMatrix, m: Matrix, bound: int) -> list:
    """(K, theta') for every skew integer K with entries bounded by ``bound``."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    out, seen = [], set()
    for k in _skew_matrices(theta.n, bound):
        tp = solve_theta_prime(theta, m, k)
        if tp not in seen:
            seen.add(tp)
            out.append((k, tp))
    return out


def enumerate_theta_corrections(theta: ThetaMatrix, m: Matrix, bound: int) -> list:
    return [tp for _, tp in theta_corrections(theta, m, bound)]


@dataclass(frozen=True)
class CoveringSpec:
    theta: ThetaMatrix
    M: Matrix
    K: Matrix
    theta_prime: ThetaMatrix


@dataclass
class CoveringSystem:
    """A_theta' with the action of Z^n / M Z^n and the embedding of A_theta.

    Constructing this directly skips every consistency check; use
    ``build_connected_covering`` for validated systems.
    """

    spec: CoveringSpec
    group: QuotientGroup
    gauge_params: dict = field(repr=False)
    embedding: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return self.spec.theta.n

    def act(self, m: Sequence[int], a: TorusElement) -> TorusElement:
        """The action of the class of m in Z^n / M Z^n."""
        return gauge(a, self.gauge_parameter(m))

    def gauge_parameter(self, m: Sequence[int]) -> tuple:
        minv = inverse(self.spec.M)
        return tuple(Poly(x) for x in matvec(minv, m))

    def lift(self, s: Sequence) -> tuple:
        """Parameter on A_theta' of the lifted gauge transformation beta_s."""
        minv = inverse(self.spec.M)
        s = [x if isinstance(x, Poly) else Poly(Fraction(x)) for x in s]
        return tuple(sum((s[j] * minv[i][j] for j in range(self.n)), Poly()) for i in range(self.n))

    def embed(self, a: TorusElement) -> TorusElement:
        """Image of an element of A_theta, via u_k -> U(M^T e_k)."""
        if a.theta != self.spec.theta:
            raise ValueError("element is not over the base theta")
        tp = self.spec.theta_prime
        gens = [monomial(tp, lam) for lam in self.embedding]
        out = TorusElement(tp)
        for lam, c in a.terms.items():
            term = one(tp)
            for g, e in zip(gens, lam):
                term = multiply(term, g ** e)
            out = out + term.scale(c)
        return out


def build_connected_covering(theta: ThetaMatrix, m: Matrix, theta_prime: ThetaMatrix) -> CoveringSystem:
    m = as_matrix(m)
    if theta_prime.n != theta.n or len(m) != theta.n:
        raise CoveringError("dimension mismatch")
    if det(m) == 0:
        raise SingularMatrixError("M must be nonsingular")
    defect = theta_relation_defect(theta, m, theta_prime)
    if not all(e.is_integer() for row in defect for e in row):
        raise CoveringError("M theta' M^T - theta is not an integer matrix")
    k = as_matrix([[e.coeff(0) for e in row] for row in defect])
    group = quotient_group(m)
    minv = inverse(m)
    params = {rep: matvec(minv, rep) for rep in group.coset_reps}
    embedding = tuple(tuple(row) for row in m)  # row k of M is M^T e_k
    return CoveringSystem(CoveringSpec(theta, m, k, theta_prime), group, params, embedding)


def _rat_phase(s: Sequence[Fraction], lam: Sequence[int]) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(s, lam)), Fraction(0)) % 1


def check_connected_covering(sys: CoveringSystem, support_bound: int = 4) -> dict:
    """Finite verification of a connected covering; returns named booleans."""
    n = sys.n
    m = sys.spec.M
    theta, tp = sys.spec.theta, sys.spec.theta_prime
    grp = sys.group
    lams = list(box(n, support_bound))
    reps = grp.coset_reps
    lattice_cols = transpose(m)
    minv = inverse(m)

    phase_cache: dict = {}

    def phases(x):
        # phases of gamma'_{M^-1 x} on every monomial of the box
        x = tuple(x)
        if x not in phase_cache:
            s = matvec(minv, x)
            phase_cache[x] = tuple(_rat_phase(s, lam) for lam in lams)
        return phase_cache[x]

    # (a) the action only depends on cosets and is a homomorphism
    well_defined = True
    for rep in reps:
        base = phases(rep)
        for col in lattice_cols:
            well_defined &= phases([a + b for a, b in zip(rep, col)]) == base
        if sys.gauge_params.get(rep) is not None:
            well_defined &= tuple(_rat_phase(sys.gauge_params[rep], lam) for lam in lams) == base
    for r1, r2 in itertools.product(reps, repeat=2):
        r12 = grp.reduce([a + b for a, b in zip(r1, r2)])
        summed = tuple((a + b) % 1 for a, b in zip(phases(r1), phases(r2)))
        well_defined &= summed == phases(r12)
    well_defined &= len(reps) == abs(det(m)) and len(sys.gauge_params) == len(reps)

    # (b) fixed points are exactly the embedded copy of A_theta
    mt = transpose(m)
    support_ok, generated_ok = True, True
    gens = [monomial(tp, lam) for lam in sys.embedding]
    for lam in lams:
        fixed = all(_rat_phase(sys.gauge_params[rep], lam) == 0 for rep in reps)
        if fixed != lattice_contains(mt, lam):
            support_ok = False
        if fixed:
            c = matvec(inverse(mt), lam)
            if any(x.denominator != 1 for x in c):
                generated_ok = False
                continue
            word = one(tp)
            for g, e in zip(gens, c):
                word = multiply(word, g ** int(e))
            mono = word.as_monomial()
            generated_ok &= mono is not None and mono[0] == tuple(lam)
    embedded = tuple(tuple(r) for r in m) == tuple(sys.embedding)
    relations_ok = True
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            want = theta.phase(k, l)
            # e(<M^T e_k, theta' M^T e_l>) = e(theta_kl) on the phase matrix ...
            relations_ok &= tp.pairing(sys.embedding[k], sys.embedding[l]) == want
            # ... and through the product u_k u_l = e(theta_kl) u_l u_k
            lhs = multiply(gens[k], gens[l])
            rhs = multiply(gens[l], gens[k]).scale(_phase_scalar(want))
            relations_ok &= lhs == rhs
    defect = theta_relation_defect(theta, m, tp)
    relations_ok &= all(e.is_integer() for row in defect for e in row)
    fixed_algebra = support_ok and generated_ok and relations_ok and embedded

    # (c) every isotypic component contains a unitary monomial
    freeness = True
    for c in grp.characters():
        target = [grp.character_value(c, g) for g in grp.gens]
        found = any(all(phases(g)[i] == want for g, want in zip(grp.gens, target))
                    for i in range(len(lams)))
        freeness &= found

    # (d) lifted gauge action: restricts to gamma, kernel M Z^n, commutes, ergodic
    lift_ok = True
    unit_lifts = [sys.lift([Poly.t() if i == j else Poly() for i in range(n)]) for j in range(n)]
    for j in range(n):
        s = [Poly.t() if i == j else Poly() for i in range(n)]
        lifted = unit_lifts[j]
        for k in range(n):
            lift_ok &= gauge_phase(lifted, sys.embedding[k]) == as_phase(s[k])
    for col in lattice_cols:
        lifted = sys.lift(col)
        lift_ok &= all(gauge_phase(lifted, lam).is_trivial() for lam in lams)
    for rep in reps:
        if any(rep):
            lift_ok &= any(phases(rep))
        # beta restricted to Z^n is the G-action
        lifted = sys.lift(rep)
        lift_ok &= all(gauge_phase(lifted, lam) == as_phase(Poly(ph)) for lam, ph in zip(lams, phases(rep)))
    sample = TorusElement(tp, {lam: 1 for lam in lams[:: max(1, len(lams) // 7)]})
    for rep in reps:
        for s in unit_lifts:
            lift_ok &= gauge(sys.act(rep, sample), s) == sys.act(rep, gauge(sample, s))
    ergodic = True
    for lam in lams:
        if any(lam):
            ergodic &= any(not gauge_phase(s, lam).is_trivial() for s in unit_lifts)
    lift_ok &= ergodic

    report = {
        "well_defined_action": well_defined,
        "fixed_algebra": fixed_algebra,
        "freeness": freeness,
        "ergodic_lift": lift_ok,
    }
    report["all"] = all(report.values())
    return report


def _phase_scalar(p: PhaseExponent) -> Scalar:
    return Scalar.phase(p)


def _classify_one(args):
    theta, h, bound, support_bound = args
    rows = []
    grp = quotient_group(h)
    for k, tp in theta_corrections(theta, h, bound):
        sys = build_connected_covering(theta, h, tp)
        rows.append({
            "M_hnf": format_matrix(h),
            "index": grp.order,
            "invariant_factors": [str(d) for d in grp.invariant_factors],
            "coset_reps": [[str(x) for x in r] for r in grp.coset_reps],
            "K": format_matrix(k),
            "theta_prime": tp.to_json(),
            "checks": check_connected_covering(sys, support_bound),
        })
    return rows


def _thread_count(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("QTC_THREADS", "1") or 1)
    return max(1, threads)


def classify_coverings(theta: ThetaMatrix, max_index: int, correction_bound: int = 0,
                       support_bound: int = 4, threads: int | None = None) -> list:
    """One row per (sublattice of index <= max_index, theta') pair.

    Rows come out in sublattice enumeration order whatever the thread count.
    """
    if max_index < 1 or correction_bound < 0:
        raise ValueError("need max_index >= 1 and correction_bound >= 0")
    jobs = [(theta, h, correction_bound, support_bound)
            for h in enumerate_sublattices(theta.n, max_index)]
    workers = _thread_count(threads)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_classify_one, jobs))
    else:
        chunks = [_classify_one(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


def quotient_map(src: QuotientGroup, dst: QuotientGroup) -> tuple:
    """Matrix of Z^n/Gamma -> Z^n/Gamma' (Gamma inside Gamma') on invariant coordinates.

    Column i holds the coordinates of the image of the i-th generator.
    """
    cols = [dst.coords(g) for g in src.gens]
    return tuple(tuple(col[r] for col in cols) for r in range(len(dst.invariant_factors)))


def _apply_map(mat, src_factors, dst_factors, x):
    return tuple(sum(mat[r][i] * x[i] for i in range(len(src_factors))) % d
                 for r, d in enumerate(dst_factors))


def profinite_tower(n: int, max_index: int) -> dict:
    """The finite quotients Z^n/Gamma, index <= max_index, ordered by inclusion.

    ``edges`` lists every pair Gamma <= Gamma' (Gamma != Gamma') with the map on
    invariant coordinates; ``covers`` keeps only the Hasse diagram.
    """
    lattices = enumerate_sublattices(n, max_index)
    groups = [quotient_group(h) for h in lattices]
    contains = {}
    for i, j in itertools.product(range(len(lattices)), repeat=2):
        contains[i, j] = i != j and all(lattice_contains(lattices[j], col) for col in transpose(lattices[i]))
    edges = {}
    for (i, j), inside in contains.items():
        if inside:
            edges[i, j] = quotient_map(groups[i], groups[j])
    covers = [(i, j) for (i, j) in edges
              if not any((i, k) in edges and (k, j) in edges for k in range(len(lattices)))]
    consistent = True
    for (i, k), m_ik in edges.items():
        for j in range(len(lattices)):
            if (k, j) in edges:
                direct = edges[i, j]
                for x in groups[i].characters():
                    via = _apply_map(edges[k, j], groups[k].invariant_factors, groups[j].invariant_factors,
                                     _apply_map(m_ik, groups[i].invariant_factors,
                                                groups[k].invariant_factors, x))
                    consistent &= via == _apply_map(direct, groups[i].invariant_factors,
                                                    groups[j].invariant_factors, x)
    # surjectivity of every connecting map
    for (i, j), mat in edges.items():
        image = {_apply_map(mat, groups[i].invariant_factors, groups[j].invariant_factors, x)
                 for x in groups[i].characters()}
        consistent &= len(image) == groups[j].order
    nodes = [{"id": i, "M_hnf": format_matrix(h), "index": g.order,
              "invariant_factors": [str(d) for d in g.invariant_factors]}
             for i, (h, g) in enumerate(zip(lattices, groups))]
    fmt = lambda mat: [[str(x) for x in row] for row in mat]  # noqa: E731
    return {
        "nodes": nodes,
        "edges": [{"from": i, "to": j, "map": fmt(edges[i, j])} for (i, j) in sorted(edges)],
        "covers": [{"from": i, "to": j, "map": fmt(edges[i, j])} for (i, j) in sorted(covers)],
        "consistent": consistent,
    }


def check_freeness_ergodic(character_support: Iterable[Sequence[int]], group) -> dict:
    """Freeness of an ergodic action from the set N of characters it realises.

    ``group`` is anything with ``invariant_factors``; characters and group
    elements are exponent tuples over those factors. The kernel of the action
    is the annihilator of N, and the action is free iff N is all of the dual.
    """
    factors = tuple(group.invariant_factors)
    norm = lambda c: tuple(int(x) % d for x, d in zip(c, factors))  # noqa: E731
    chars = {norm(c) for c in character_support}
    if any(len(c) != len(factors) for c in character_support):
        raise ValueError("character has the wrong length")
    zero = tuple(0 for _ in factors)
    if zero not in chars:
        raise ValueError("N is not a subgroup: missing the trivial character")
    for a, b in itertools.product(list(chars), repeat=2):
        if norm([x - y for x, y in zip(a, b)]) not in chars:
            raise ValueError("N is not a subgroup: not closed")
    elements = list(itertools.product(*(range(d) for d in factors)))

    def pairing(g, c):
        return sum((Fraction(x * y, d) for x, y, d in zip(g, c, factors)), Fraction(0)) % 1

    kernel = [g for g in elements if all(pairing(g, c) == 0 for c in chars)]
    free = len(kernel) == 1
    if free != (len(chars) == len(elements)):
        raise AssertionError("duality violated")
    return {"free": free, "kernel": kernel, "N": sorted(chars)}
