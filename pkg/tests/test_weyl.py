"""Tests for Weyl chambers, orbit polytopes, and the shrink condition."""

import itertools

import numpy as np
import pytest

from hypergeo import weyl
from oracles import hull_contains_lp


def spec_b(rank):
    return weyl.RootSystemSpec("b", rank)


def spec_a(rank):
    return weyl.RootSystemSpec("a", rank)


class TestSpec:
    def test_families_normalized(self):
        assert weyl.RootSystemSpec("B", 2).family == "b"
        assert weyl.RootSystemSpec("A", 2).dim == 3
        assert spec_b(3).dim == 3

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            weyl.RootSystemSpec("d", 3)


class TestChamberProject:
    def test_witness_reproduces_projection(self):
        gen = np.random.default_rng(30)
        for spec in (spec_b(3), spec_a(2)):
            for _ in range(20):
                x = gen.standard_normal(spec.dim)
                if spec.family == "a":
                    x = x - x.mean()
                proj, elem = weyl.chamber_project(spec, x)
                assert weyl._in_chamber(spec, proj)
                np.testing.assert_array_equal(
                    weyl.apply_weyl(elem, x), proj)

    def test_type_a_keeps_signs(self):
        x = np.array([-2.0, 1.0, 1.0])
        proj, (perm, signs) = weyl.chamber_project(spec_a(2), x)
        assert signs == (1.0, 1.0, 1.0)
        np.testing.assert_array_equal(proj, np.array([1.0, 1.0, -2.0]))

    def test_type_b_flips_signs(self):
        proj, _ = weyl.chamber_project(spec_b(2), np.array([-3.0, 1.0]))
        np.testing.assert_array_equal(proj, np.array([3.0, 1.0]))


class TestOrbit:
    def test_sizes(self):
        assert len(weyl.orbit(spec_b(2), np.array([2.0, 1.0]))) == 8
        assert len(weyl.orbit(spec_a(2), np.array([1.0, 0.0, -1.0]))) == 6

    def test_degenerate_orbit_deduplicates(self):
        assert len(weyl.orbit(spec_b(2), np.array([1.0, 1.0]))) == 4
        assert len(weyl.orbit(spec_a(2), np.array([0.0, 0.0, 0.0]))) == 1

    def test_rank_cap(self):
        with pytest.raises(ValueError):
            weyl.orbit(spec_b(9), np.arange(9, 0, -1.0))


class TestHullMembership:
    """Closed-form membership against a linear-programming oracle."""

    def test_agrees_with_lp(self):
        gen = np.random.default_rng(31)
        for spec in (spec_b(2), spec_b(3), spec_a(2), spec_a(3)):
            rho = np.sort(gen.uniform(0.1, 2.0, spec.dim))[::-1]
            if spec.family == "a":
                rho = rho - rho.mean()
            poly = weyl.OrbitPolytope(spec, rho)
            pts = np.array(weyl.orbit(spec, rho))
            for _ in range(60):
                wts = gen.random(len(pts))
                x = (wts / wts.sum()) @ pts
                x = x * gen.uniform(0.3, 1.6)
                if spec.family == "a":
                    x = x - x.mean()
                got = weyl.hull_membership(poly, x)
                want = hull_contains_lp(pts, x)
                assert got == want, (spec.family, spec.rank, x)

    def test_rho_and_origin_inside(self):
        rho = np.array([2.0, 1.0])
        poly = weyl.OrbitPolytope(spec_b(2), rho)
        assert weyl.hull_membership(poly, rho)
        assert weyl.hull_membership(poly, np.zeros(2))

    def test_scaled_rho_outside(self):
        rho = np.array([2.0, 1.0])
        poly = weyl.OrbitPolytope(spec_b(2), rho)
        assert not weyl.hull_membership(poly, 1.001 * rho)

    def test_polytope_contains_needs_chamber(self):
        poly = weyl.OrbitPolytope(spec_b(2), np.array([2.0, 1.0]))
        assert weyl.polytope_contains(poly, np.array([1.0, 0.5]))
        assert not weyl.polytope_contains(poly, np.array([0.5, 1.0]))


class TestPolytopeValidation:
    def test_requires_chamber_order(self):
        with pytest.raises(AssertionError):
            weyl.OrbitPolytope(spec_b(2), np.array([1.0, 2.0]))

    def test_type_a_requires_zero_sum(self):
        with pytest.raises(AssertionError):
            weyl.OrbitPolytope(spec_a(2), np.array([1.0, 0.0, -0.5]))


class TestVertices:
    def test_b2_vertex_set(self):
        poly = weyl.OrbitPolytope(spec_b(2), np.array([2.0, 1.0]))
        verts = {tuple(v) for v in weyl.polytope_vertices_K(poly)}
        assert verts == {(0.0, 0.0), (1.5, 1.5), (2.0, 0.0), (2.0, 1.0)}

    def test_a2_vertex_set(self):
        poly = weyl.OrbitPolytope(spec_a(2), np.array([1.0, 0.0, -1.0]))
        verts = {tuple(v) for v in weyl.polytope_vertices_K(poly)}
        assert verts == {(0.0, 0.0, 0.0), (0.5, 0.5, -1.0),
                         (1.0, -0.5, -0.5), (1.0, 0.0, -1.0)}

    def test_vertices_lie_in_polytope(self):
        gen = np.random.default_rng(32)
        rho = np.sort(gen.uniform(0.2, 2.0, 3))[::-1]
        poly = weyl.OrbitPolytope(spec_b(3), rho)
        for v in weyl.polytope_vertices_K(poly):
            assert weyl.polytope_contains(poly, v)


class TestProp65:
    """The shrink-and-shift membership predicate."""

    def test_b2_holds_at_eps_one(self):
        gen = np.random.default_rng(33)
        for _ in range(10):
            rho = np.sort(gen.uniform(0.1, 3.0, 2))[::-1]
            poly = weyl.OrbitPolytope(spec_b(2), rho)
            for v in weyl.polytope_vertices_K(poly):
                assert weyl.prop65_check(poly, 1.0, v)

    def test_a2_fails_at_point_six_passes_at_point_45(self):
        """Vertex scan: violated at eps = 0.6, satisfied at eps = 0.45.

        The infimum 1/2 is approached as rho pinches against a chamber
        wall, so the scan uses rho_1 = rho_2; the origin is the vertex
        that breaks first.
        """
        poly = weyl.OrbitPolytope(spec_a(2), np.array([1.0, 1.0, -2.0]))
        verts = weyl.polytope_vertices_K(poly)
        assert any(not weyl.prop65_check(poly, 0.6, v) for v in verts)
        assert all(weyl.prop65_check(poly, 0.45, v) for v in verts)

    def test_b3_violation_at_eps_one(self):
        """An acute chamber point close to two walls breaks eps = 1."""
        poly = weyl.OrbitPolytope(spec_b(3), np.array([2.0, 1.9, 0.1]))
        verts = weyl.polytope_vertices_K(poly)
        assert any(not weyl.prop65_check(poly, 1.0, v) for v in verts)

    def test_monotone_in_eps(self):
        poly = weyl.OrbitPolytope(spec_b(3), np.array([2.0, 1.9, 0.1]))
        y = np.array([4.0, 4.0, 4.0]) / 3.0
        ok = [weyl.prop65_check(poly, e, y)
              for e in (0.1, 0.3, 0.5, 0.7, 0.9, 1.0)]
        assert ok == sorted(ok, reverse=True)

    def test_zero_eps_trivial(self):
        poly = weyl.OrbitPolytope(spec_b(2), np.array([2.0, 1.0]))
        assert weyl.prop65_check(poly, 0.0, np.array([1.0, 0.5]))

    def test_precondition_y_in_k(self):
        poly = weyl.OrbitPolytope(spec_b(2), np.array([2.0, 1.0]))
        with pytest.raises(ValueError):
            weyl.prop65_check(poly, 0.5, np.array([3.0, 0.5]))
        with pytest.raises(ValueError):
            weyl.prop65_check(poly, 0.5, np.array([0.5, 1.0]))


class TestLemma44:
    """The mirrored condition for antidominant points."""

    def test_b_family_mirrors_prop65(self):
        poly = weyl.OrbitPolytope(spec_b(2), np.array([2.0, 1.0]))
        y = np.array([-1.0, -0.5])
        assert weyl.lemma44_check(poly, 0.5, y) == \
            weyl.prop65_check(poly, 0.5, -y)

    def test_a_family_direct(self):
        rho = np.array([1.0, 0.0, -1.0])
        poly = weyl.OrbitPolytope(spec_a(2), rho)
        assert weyl.lemma44_check(poly, 0.2, -rho)

    def test_precondition(self):
        poly = weyl.OrbitPolytope(spec_b(2), np.array([2.0, 1.0]))
        with pytest.raises(ValueError):
            weyl.lemma44_check(poly, 0.5, np.array([1.0, 0.5]))


class TestProductMembership:
    def test_conjunction(self):
        p1 = weyl.OrbitPolytope(spec_b(2), np.array([2.0, 1.0]))
        p2 = weyl.OrbitPolytope(spec_b(2), np.array([1.0, 0.5]))
        inside = np.array([1.0, 0.5])
        outside = np.array([2.0, 1.0])
        assert weyl.product_membership(p1, p2, inside, 0.5 * inside)
        assert not weyl.product_membership(p1, p2, inside, outside)


class TestEps0:
    """The estimated largest shrink factor."""

    def test_b2_is_one(self):
        assert weyl.eps0_estimate(spec_b(2), rho_samples=8) == 1.0

    def test_a2_near_half(self):
        got = weyl.eps0_estimate(spec_a(2), rho_samples=8)
        assert abs(got - 0.5) < 0.02

    def test_b3_below_one(self):
        got = weyl.eps0_estimate(spec_b(3), rho_samples=8)
        assert got < 1.0

    def test_rank_cap(self):
        with pytest.raises(AssertionError):
            weyl.eps0_estimate(spec_b(5), rho_samples=2)
