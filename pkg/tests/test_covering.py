from __future__ import annotations

import itertools

import pytest

from qtcover.covering import (CoveringError, CoveringSpec, CoveringSystem, build_connected_covering,
                              check_connected_covering, check_freeness_ergodic, classify_coverings,
                              enumerate_theta_corrections, profinite_tower, satisfies_theta_relation,
                              solve_theta_prime, theta_corrections)
from qtcover.groups import FiniteAbelianGroup
from qtcover.lattice import (SingularMatrixError, diag, enumerate_sublattices, identity, inverse,
                             lattice_contains, matvec, quotient_group, transpose)
from qtcover.phase import Scalar
from qtcover.torus import ThetaMatrix, box, gauge_phase, generator, monomial, multiply

T = ThetaMatrix.from_entry("t")


def tp12(text):
    return ThetaMatrix.from_entry(text)


class TestSolveTheta:
    def test_examples(self):
        assert solve_theta_prime(T, diag(2, 1)) == tp12("t/2")
        assert solve_theta_prime(T, identity(2)) == T
        assert solve_theta_prime(T, diag(2, 1), ((0, 1), (-1, 0))) == tp12("(t+1)/2")

    def test_bad_inputs(self):
        with pytest.raises(SingularMatrixError):
            solve_theta_prime(T, ((1, 2), (2, 4)))
        with pytest.raises(CoveringError):
            solve_theta_prime(T, diag(2, 1), ((0, 1), (1, 0)))

    def test_corrections(self):
        assert enumerate_theta_corrections(T, diag(2, 1), 0) == [tp12("t/2")]
        got = enumerate_theta_corrections(T, diag(2, 1), 1)
        assert sorted(map(str, got)) == sorted(map(str, [tp12("(t-1)/2"), tp12("t/2"), tp12("(t+1)/2")]))
        # theta +- 1 give isomorphic algebras but are recorded separately
        assert len(enumerate_theta_corrections(T, identity(2), 1)) == 3

    def test_three_dimensional(self):
        th = ThetaMatrix([[0, "t", "t^2"], ["-t", 0, "1/3"], ["-t^2", "-1/3", 0]])
        m = ((2, 0, 0), (1, 3, 0), (0, 0, 1))
        for k, tp in theta_corrections(th, m, 1):
            assert satisfies_theta_relation(th, m, tp)


class TestBuild:
    def test_diag21(self):
        sys = build_connected_covering(T, diag(2, 1), tp12("t/2"))
        assert sys.embedding == ((2, 0), (0, 1))
        tp = sys.spec.theta_prime
        u1, u2 = (monomial(tp, lam) for lam in sys.embedding)
        assert multiply(u1, u2) == multiply(u2, u1).scale(Scalar.phase("t"))
        assert check_connected_covering(sys)["all"]

    def test_trivial(self):
        sys = build_connected_covering(T, identity(2), T)
        assert sys.group.order == 1
        assert check_connected_covering(sys)["all"]

    def test_diag22(self):
        sys = build_connected_covering(T, diag(2, 2), tp12("t/4"))
        assert sys.group.invariant_factors == (2, 2)
        params = {tuple(str(x) for x in s) for s in sys.gauge_params.values()}
        assert params == {("0", "0"), ("1/2", "0"), ("0", "1/2"), ("1/2", "1/2")}

    def test_rejects_bad_theta_prime(self):
        with pytest.raises(CoveringError):
            build_connected_covering(T, diag(2, 1), tp12("t/3"))

    def test_hand_built_inconsistent_system(self):
        m = diag(2, 1)
        bad = tp12("t/3")
        grp = quotient_group(m)
        params = {rep: matvec(inverse(m), rep) for rep in grp.coset_reps}
        sys = CoveringSystem(CoveringSpec(T, m, diag(0, 0), bad), grp, params, ((2, 0), (0, 1)))
        report = check_connected_covering(sys)
        assert report["fixed_algebra"] is False
        assert report["all"] is False

    def test_embedding_is_a_homomorphism(self):
        m = ((2, 0), (1, 3))
        sys = build_connected_covering(T, m, solve_theta_prime(T, m))
        u, v = generator(T, 0), generator(T, 1)
        for x, y in itertools.product([u, v, multiply(u, v), multiply(v, v)], repeat=2):
            assert sys.embed(multiply(x, y)) == multiply(sys.embed(x), sys.embed(y))


@pytest.mark.parametrize("m", enumerate_sublattices(2, 4))
class TestInvariantsBound6:
    BOUND = 6

    def system(self, m):
        return build_connected_covering(T, m, solve_theta_prime(T, m))

    def test_embedded_relations(self, m):
        sys = self.system(m)
        tp = sys.spec.theta_prime
        mt = transpose(m)
        cols = [tuple(mt[i][k] for i in range(2)) for k in range(2)]
        for k, l in itertools.permutations(range(2), 2):
            assert tp.pairing(cols[k], cols[l]) == T.phase(k, l)

    def test_coset_independence(self, m):
        sys = self.system(m)
        mt = transpose(m)
        for rep in sys.group.coset_reps:
            for col in mt:
                other = tuple(a + b for a, b in zip(rep, col))
                s, s2 = sys.gauge_parameter(rep), sys.gauge_parameter(other)
                for lam in box(2, self.BOUND):
                    assert gauge_phase(s, lam) == gauge_phase(s2, lam)

    def test_fixed_point_support(self, m):
        sys = self.system(m)
        mt = transpose(m)
        tp = sys.spec.theta_prime
        for lam in box(2, self.BOUND):
            x = monomial(tp, lam)
            fixed = all(sys.act(rep, x) == x for rep in sys.group.coset_reps)
            assert fixed == lattice_contains(mt, lam)


class TestClassify:
    def test_counts(self):
        assert len(classify_coverings(T, 1)) == 1
        assert len(classify_coverings(T, 2)) == 4

    def test_rows(self):
        rows = classify_coverings(T, 2, correction_bound=1)
        assert len(rows) == 12
        assert all(r["checks"]["all"] for r in rows)
        assert {"M_hnf", "index", "invariant_factors", "coset_reps", "K", "theta_prime", "checks"} <= set(rows[0])

    def test_threads_do_not_change_output(self):
        assert classify_coverings(T, 3, threads=2) == classify_coverings(T, 3, threads=1)

    def test_three_dimensional(self):
        th = ThetaMatrix([[0, "t", "t^2"], ["-t", 0, "t^3"], ["-t^2", "-t^3", 0]])
        rows = classify_coverings(th, 2, support_bound=2)
        assert len(rows) == 1 + 7
        assert all(r["checks"]["all"] for r in rows)


class TestTower:
    def test_n1(self):
        tower = profinite_tower(1, 4)
        index = {node["id"]: node["index"] for node in tower["nodes"]}
        covers = {(index[e["from"]], index[e["to"]]) for e in tower["covers"]}
        assert covers == {(4, 2), (2, 1), (3, 1)}
        assert tower["consistent"]

    def test_single_node(self):
        tower = profinite_tower(2, 1)
        assert len(tower["nodes"]) == 1 and not tower["edges"]

    def test_n2_index2(self):
        tower = profinite_tower(2, 2)
        index = {node["id"]: node["index"] for node in tower["nodes"]}
        assert sorted(index.values()) == [1, 2, 2, 2]
        assert all(index[e["to"]] == 1 for e in tower["edges"])
        assert len(tower["edges"]) == 3

    def test_n2_consistent(self):
        assert profinite_tower(2, 4)["consistent"]


class TestFreeness:
    def test_examples(self):
        g = FiniteAbelianGroup((2, 2))
        full = check_freeness_ergodic(g.characters, g)
        assert full["free"] and full["kernel"] == [(0, 0)]
        part = check_freeness_ergodic([(0, 0), (1, 0)], g)
        assert not part["free"] and len(part["kernel"]) == 2
        trivial = check_freeness_ergodic([()], FiniteAbelianGroup(()))
        assert trivial["free"]

    def test_not_a_subgroup(self):
        g = FiniteAbelianGroup((4,))
        with pytest.raises(ValueError):
            check_freeness_ergodic([(0,), (1,)], g)

    def test_covering_support(self):
        # every connected covering realises all characters, hence acts freely
        for m in enumerate_sublattices(2, 4):
            sys = build_connected_covering(T, m, solve_theta_prime(T, m))
            grp = sys.group
            seen = set()
            for lam in box(2, 4):
                vals = []
                for g in grp.gens:
                    ph = gauge_phase(sys.gauge_parameter(g), lam).coeff(0)
                    vals.append(ph)
                seen.add(tuple(int(val * d) % d for val, d in zip(vals, grp.invariant_factors)))
            result = check_freeness_ergodic(seen, grp)
            assert result["free"]
