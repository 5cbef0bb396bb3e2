from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from qtcover.groups import FiniteAbelianGroup
from qtcover.phase import Poly, as_phase
from qtcover.smooth import (H3ObstructionError, MonomialAutomorphism, OutSmoothElement, SmoothCoveringError,
                            apply_cochain, associator, build_smooth_covering, check_homomorphism,
                            coboundary_of, compute_cocycle, derive_rho, homomorphism_report,
                            lift_automorphisms, morita_module_of, out_eq, out_inv, out_mul, picard_of,
                            rho, solve_associativity, verify_smooth_covering)
from qtcover.torus import (ThetaMatrix, box, gauge, generator, lattice_transform, monomial, multiply, one)
from samples import I, N, ZERO, all_samples, h, out

T = ThetaMatrix.from_entry("t")
S = ((0, 1), (-1, 0))
TT = ((1, 1), (0, 1))
C2 = FiniteAbelianGroup((2,))
u, v = generator(T, 0), generator(T, 1)


def transpose(m):
    return tuple(zip(*m))


def random_sl2(rng, length=4):
    m = I
    for _ in range(length):
        g = rng.choice([S, TT, ((1, -1), (0, 1)), ((0, -1), (1, 0))])
        m = tuple(tuple(sum(m[i][k] * g[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return m


def random_out(rng):
    pt = lambda: (Fraction(rng.randint(-20, 20), rng.randint(1, 12)),  # noqa: E731
                  Fraction(rng.randint(-20, 20), rng.randint(1, 12)))
    return OutSmoothElement((pt(), pt()), random_sl2(rng))


class TestOutGroup:
    def test_examples(self):
        a = out(((h, 0), (0, Fraction(1, 3))))
        b = out(((Fraction(1, 4), h), (0, 0)))
        assert out_mul(a, b) == out(((Fraction(3, 4), h), (0, Fraction(1, 3))))
        assert out_mul(out(ZERO, S), out(ZERO, S)) == out(ZERO, N)

    def test_group_axioms(self):
        rng = random.Random(7)
        xs = [random_out(rng) for _ in range(200)]
        e = OutSmoothElement.identity()
        for x, y, z in zip(xs, xs[1:], xs[2:]):
            assert out_mul(out_mul(x, y), z) == out_mul(x, out_mul(y, z))
            assert out_mul(x, e) == x == out_mul(e, x)
            assert out_eq(out_mul(x, out_inv(x)), e)
            assert out_eq(out_mul(out_inv(x), x), e)

    def test_inner_classes_vanish(self):
        for a, b, c, d in itertools.product(range(-2, 3), repeat=4):
            assert out(((a, b), (c, d))).is_identity()
        assert out(((Fraction(5, 2), -3), (0, 1))) == out(((h, 0), (0, 0)))

    def test_json_round_trip(self):
        rng = random.Random(1)
        for _ in range(20):
            x = random_out(rng)
            assert OutSmoothElement.from_json(x.to_json()) == x


class TestConjugation:
    """lattice o gauge o lattice^-1 = gauge(rho(M) s), written as lattice o gauge = gauge(rho s) o lattice."""

    PARAMS = [("1/2", "0"), ("t/3", "1/5"), ("0", "t"), ("1/7 - t", "2t/3")]

    @pytest.mark.parametrize("m", [S, TT])
    def test_generator_convention(self, m):
        # u -> u^a v^b: the twist is M^-1
        for s in self.PARAMS:
            mi = ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))
            twisted = tuple(as_phase(Poly()) + sum((as_phase(s[j]) * mi[i][j] for j in range(2)), as_phase(0))
                            for i in range(2))
            for lam in box(2, 3):
                x = monomial(T, lam)
                assert lattice_transform(gauge(x, s), m) == gauge(lattice_transform(x, m), twisted)

    @pytest.mark.parametrize("m", [S, TT])
    def test_bogoliubov_convention(self, m):
        # beta_M = lattice_transform(M^T), twist rho(M) = M^-T
        r = rho(m)
        for s in self.PARAMS:
            twisted = tuple(sum((as_phase(s[j]) * r[i][j] for j in range(2)), as_phase(0)) for i in range(2))
            beta = MonomialAutomorphism.lattice(T, m)
            for lam in box(2, 3):
                x = monomial(T, lam)
                assert lattice_transform(x, transpose(m)) == beta(x)
                assert beta(gauge(x, s)) == gauge(beta(x), twisted)

    @pytest.mark.parametrize("m", [S, TT, ((2, 1), (1, 1))])
    def test_derived_rho(self, m):
        assert derive_rho(T, m) == rho(m)

    def test_lattice_composition_at_out_level(self):
        for a, b in itertools.product([S, TT, N], repeat=2):
            ab = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))
            comp = MonomialAutomorphism.lattice(T, a).compose(MonomialAutomorphism.lattice(T, b))
            assert comp.out_class() == out(ZERO, ab)


class TestHomomorphism:
    def test_examples(self):
        assert check_homomorphism(C2, [out(((0, h), (0, 0)))])
        assert not check_homomorphism(C2, [out(((Fraction(1, 3), 0), (0, 0)))])
        assert check_homomorphism(FiniteAbelianGroup(()), [])

    def test_report(self):
        rep = homomorphism_report(C2, [out(ZERO)])
        assert rep["homomorphism"] and not rep["injective"]
        # -I negates the gauge class (1/3, 0), so the images do not commute
        rep = homomorphism_report(FiniteAbelianGroup((2, 2)), [out(ZERO, N), out(((Fraction(1, 3), 0), (0, 0)))])
        assert not rep["commute"]

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            homomorphism_report(C2, [])


class TestCocycle:
    def test_rational_point(self):
        sigma = compute_cocycle(T, C2, [out(((h, 0), (0, 0)))], {(1,): ((h, 0), (0, 0))})
        assert sigma[(1,), (1,)] == ((0, 0), as_phase(0))

    def test_theta_point(self):
        sigma = compute_cocycle(T, C2, [out(((0, h), (0, 0)))])
        assert sigma[(1,), (1,)][0] == (0, -1)

    def test_trivial(self):
        sigma = compute_cocycle(T, C2, [out(ZERO)])
        assert all(lam == (0, 0) and p.is_trivial() for lam, p in sigma.values())

    def test_inconsistent_lift(self):
        with pytest.raises(SmoothCoveringError):
            compute_cocycle(T, C2, [out(((h, 0), (0, 0)))], {(1,): ((Fraction(1, 3), 0), (0, 0))})

    def test_non_canonical_lift_gives_other_monomial(self):
        # x = (1/2 + theta, 0) represents the same class; the cocycle shifts by an inner monomial
        sigma = compute_cocycle(T, C2, [out(((h, 0), (0, 0)))], {(1,): ((h, 1), (0, 0))})
        assert sigma[(1,), (1,)][0] == (0, -2)


class TestAssociativity:
    @pytest.mark.parametrize("w", [((h, 0), (0, 0)), ((0, h), (0, 0))])
    def test_c2_examples_already_associative(self, w):
        images = [out(w)]
        alphas = lift_automorphisms(T, C2, images)
        sigma = compute_cocycle(T, C2, images)
        assert all(p.is_trivial() for p in associator(T, C2, alphas, sigma).values())
        new, beta = solve_associativity(T, C2, alphas, sigma)
        assert new == sigma and beta == {}

    @pytest.mark.parametrize("name,group,images", [s for s in all_samples() if s[1].order > 2][::3])
    def test_injected_cochain_round_trip(self, name, group, images):
        rng = random.Random(name)
        alphas = lift_automorphisms(T, group, images)
        sigma = compute_cocycle(T, group, images)
        sigma, _ = solve_associativity(T, group, alphas, sigma)
        nontrivial = [c for c in group.characters if any(c)]
        injected = {}
        for a, b in itertools.product(nontrivial, repeat=2):
            injected[a, b] = Poly({0: Fraction(rng.randint(-9, 9), rng.randint(1, 12)),
                                   1: Fraction(rng.randint(-3, 3), rng.randint(1, 5))})
        perturbed = apply_cochain(sigma, injected)
        assert not all(p.is_trivial() for p in associator(T, group, alphas, perturbed).values())
        fixed, beta = solve_associativity(T, group, alphas, perturbed)
        assert all(p.is_trivial() for p in associator(T, group, alphas, fixed).values())
        d_in, d_out = coboundary_of(group, injected), coboundary_of(group, beta)
        assert all((d_in[k] + d_out[k]).is_trivial() for k in d_in)

    def test_genuine_obstruction(self):
        images = [out(((h, 0), (0, h)))]
        with pytest.raises(H3ObstructionError):
            build_smooth_covering(T, C2, images)


class TestBuild:
    def test_rational_c2(self):
        sys = build_smooth_covering(T, C2, [out(((h, 0), (0, 0)))])
        e = sys.unit((1,))
        assert sys.multiply(e, e) == sys.unit((0,))
        conj = sys.multiply(sys.multiply(e, sys.embed(u)), sys.adjoint(e))
        assert conj == sys.embed(gauge(u, ("1/2", "0")))
        assert picard_of(sys, (1,)) == out(((h, 0), (0, 0)))
        assert picard_of(sys, (0,)).is_identity()

    def test_theta_c2(self):
        sys = build_smooth_covering(T, C2, [out(((0, h), (0, 0)))])
        e = sys.unit((1,))
        assert sys.multiply(e, e) == sys.embed(monomial(T, (0, -1)))
        assert picard_of(sys, (1,)) == out(((0, h), (0, 0)))

    def test_trivial_group(self):
        g = FiniteAbelianGroup(())
        sys = build_smooth_covering(T, g, [])
        x = sys.embed(u + v)
        assert sys.multiply(x, x) == sys.embed(multiply(u + v, u + v))
        assert all(verify_smooth_covering(sys).values())

    def test_rejects_non_homomorphism(self):
        with pytest.raises(SmoothCoveringError):
            build_smooth_covering(T, C2, [out(((Fraction(1, 3), 0), (0, 0)))])

    def test_rejects_rational_theta(self):
        with pytest.raises(SmoothCoveringError):
            build_smooth_covering(ThetaMatrix.from_entry("1/2"), C2, [out(ZERO)])

    @pytest.mark.parametrize("name,group,images", list(all_samples()))
    def test_samples(self, name, group, images):
        sys = build_smooth_covering(T, group, images)
        report = verify_smooth_covering(sys)
        assert all(report.values()), report
        for c in group.characters:
            assert picard_of(sys, c) == sys.phi(c)


class TestGraded:
    def test_graded_products(self):
        group, images = FiniteAbelianGroup((3,)), [out(((0, Fraction(1, 5)), (Fraction(2, 3), 0)),
                                                      ((0, -1), (1, -1)))]
        sys = build_smooth_covering(T, group, images)
        for a, b in itertools.product(group.characters, repeat=2):
            x = sys.embed(u + monomial(T, (1, -2)), a)
            y = sys.embed(v, b)
            assert set(sys.multiply(x, y).parts) == {group.add(a, b)}
            assert set(sys.adjoint(x).parts) == {group.neg(a)}

    def test_fixed_algebra(self):
        sys = build_smooth_covering(T, C2, [out(((0, h), (0, 0)), N)])
        x = sys.embed(u, (0,)) + sys.embed(v, (1,))
        assert sys.average(x) == sys.embed(u, (0,))
        fixed = [g for g in C2.elements if sys.act(g, x) == x]
        assert fixed == [(0,)]


class TestMorita:
    SAMPLES = [one(T), u, v, multiply(u, v), u + monomial(T, (-1, 2), "t/3")]

    def test_identity(self):
        mod = morita_module_of(MonomialAutomorphism.identity(T))
        assert mod.right(u, v) == multiply(u, v)
        assert mod.check(self.SAMPLES)["all"]

    def test_inner_v(self):
        ad_v = MonomialAutomorphism.inner(T, (0, 1))
        mod = morita_module_of(ad_v)
        x, y = u, multiply(u, v)
        # Ad[v]^-1(x^* y) computed by hand: v^* (u^* u v) v = v
        direct = multiply(multiply(v.adjoint(), multiply(x.adjoint(), y)), v)
        assert mod.inner_right(x, y) == direct == v
        assert mod.check(self.SAMPLES)["all"]

    def test_gauge_half(self):
        mod = morita_module_of(MonomialAutomorphism.gauge(T, ("1/2", "0")))
        assert mod.right(v, u) == multiply(v, -u)
        assert mod.check(self.SAMPLES)["all"]

    def test_generic(self):
        alpha = MonomialAutomorphism(T, ("1/3", "t/5"), TT)
        assert morita_module_of(alpha).check(self.SAMPLES[:4])["all"]
