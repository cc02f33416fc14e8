"""Metric axioms, membership predicates, and the equivalence sandwich."""

import math
import random

import pytest

from simplexfp import (
    Face,
    MembershipError,
    MetricParams,
    OpenHull,
    Point,
    SimplexClosure,
    ZERO,
    basis,
    check_equivalence_bounds,
    embed_face,
    from_dense,
    is_member,
    product_metric,
    sup_distance,
    truncated_metric,
)
from conftest import random_simplex_point


class TestPointInvariants:
    def test_zero_values_dropped(self):
        p = Point([(1, 0.5), (3, 0.0), (7, 1e-16)])
        assert p.pairs == ((1, 0.5),)

    def test_rejects_negative(self):
        with pytest.raises(MembershipError):
            Point([(1, -0.2)])

    def test_rejects_mass_above_one(self):
        with pytest.raises(MembershipError):
            Point([(1, 0.7), (2, 0.7)])

    def test_rejects_unsorted_indices(self):
        with pytest.raises(MembershipError):
            Point([(2, 0.1), (1, 0.1)])

    def test_rejects_duplicate_indices(self):
        with pytest.raises(MembershipError):
            Point([(2, 0.1), (2, 0.1)])

    def test_value_and_dense(self):
        p = Point([(2, 0.25), (5, 0.5)])
        assert p.value(2) == 0.25
        assert p.value(3) == 0.0
        assert p.dense(5) == [0.0, 0.25, 0.0, 0.0, 0.5]

    def test_immutable(self):
        p = basis(1)
        with pytest.raises(AttributeError):
            p.pairs = ()


class TestProductMetric:
    def test_identity_case(self):
        assert product_metric(ZERO, ZERO) == 0.0

    def test_two_basis_vectors(self):
        # |1-0|/(2*2) + |0-1|/(4*2)
        assert product_metric(basis(1), basis(2)) == pytest.approx(0.375, abs=0)

    def test_zero_to_e1(self):
        assert product_metric(ZERO, basis(1)) == 0.25

    def test_basis_sequence_converges_to_zero(self):
        # d(e_k, 0) = 2^-(k+1), monotone to 0
        previous = 1.0
        for k in range(1, 12):
            d = product_metric(basis(k), ZERO)
            assert d == pytest.approx(2.0 ** -(k + 1), abs=0)
            assert d < previous
            previous = d

    def test_metric_axioms_random(self, rng):
        for _ in range(300):
            x = random_simplex_point(rng)
            y = random_simplex_point(rng)
            z = random_simplex_point(rng)
            dxy = product_metric(x, y)
            assert dxy >= 0.0
            assert dxy == product_metric(y, x)
            assert product_metric(x, x) == 0.0
            assert dxy <= product_metric(x, z) + product_metric(z, y) + 1e-15

    def test_zero_iff_equal(self, rng):
        for _ in range(100):
            x = random_simplex_point(rng)
            y = random_simplex_point(rng)
            if product_metric(x, y) == 0.0:
                assert x == y

    def test_bounded_below_one(self, rng):
        for _ in range(200):
            x = random_simplex_point(rng)
            y = random_simplex_point(rng)
            assert product_metric(x, y) < 1.0


class TestTruncatedMetric:
    def test_first_coordinate_only(self):
        assert truncated_metric(basis(1), basis(2), 1) == 0.25

    def test_matches_product_when_support_covered(self):
        assert truncated_metric(basis(1), basis(2), 2) == 0.375

    def test_identity(self, rng):
        for n in (1, 3, 7):
            x = random_simplex_point(rng)
            assert truncated_metric(x, x, n) == 0.0

    def test_agrees_with_product_metric_on_prefix_support(self, rng):
        for _ in range(200):
            n = rng.randint(1, 6)
            x = random_simplex_point(rng, max_index=n)
            y = random_simplex_point(rng, max_index=n)
            assert truncated_metric(x, y, n) == product_metric(x, y)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            truncated_metric(ZERO, ZERO, 0)


class TestSupDistance:
    def test_basis_pair(self):
        assert sup_distance(basis(1), basis(2)) == 1.0

    def test_identity(self):
        p = Point([(4, 0.25)])
        assert sup_distance(p, p) == 0.0

    def test_single_entry(self):
        assert sup_distance(ZERO, Point([(3, 0.5)])) == 0.5


class TestEquivalenceBounds:
    def test_hand_checked_pair(self):
        assert check_equivalence_bounds(basis(1), basis(2), 2, 1.0) == (True, True)

    def test_equal_points(self):
        p = Point([(1, 0.3), (2, 0.2)])
        assert check_equivalence_bounds(p, p, 4, 1.0) == (True, True)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_random_sweep(self, n):
        # raw vectors in [0,1]^n, not simplex points: the sandwich is a
        # statement about bounded subsets of R^n
        rng = random.Random(900 + n)
        for _ in range(1000):
            x = [rng.random() for _ in range(n)]
            y = [rng.random() for _ in range(n)]
            assert check_equivalence_bounds(x, y, n, 1.0) == (True, True)

    def test_support_precondition(self):
        with pytest.raises(ValueError):
            check_equivalence_bounds(basis(3), basis(1), 2, 1.0)

    def test_bound_precondition(self):
        with pytest.raises(ValueError):
            check_equivalence_bounds([0.9], [0.1], 1, 0.5)


class TestMetricParams:
    def test_unbounded_marker(self):
        p = MetricParams(truncation_dim=None, bound_M=1.0)
        assert p.truncation_dim is None

    def test_validation(self):
        with pytest.raises(ValueError):
            MetricParams(truncation_dim=0)
        with pytest.raises(ValueError):
            MetricParams(truncation_dim=2, bound_M=-1.0)


class TestMembership:
    def test_basis_in_closure(self):
        assert is_member(basis(5), SimplexClosure)

    def test_zero_not_in_face(self):
        assert not is_member(ZERO, Face(2))

    def test_zero_in_closure_but_not_hull(self):
        assert is_member(ZERO, SimplexClosure)
        assert not is_member(ZERO, OpenHull)

    def test_half_half_in_face_one(self):
        assert is_member(from_dense([0.5, 0.5]), Face(1))

    def test_face_support_constraint(self):
        assert not is_member(basis(4), Face(2))
        assert is_member(basis(3), Face(2))

    def test_hull_requires_unit_mass(self):
        assert is_member(from_dense([0.25, 0.25, 0.5]), OpenHull)
        assert not is_member(from_dense([0.25, 0.25]), OpenHull)


class TestEmbedFace:
    def test_corner(self):
        assert embed_face([1.0, 0.0, 0.0]) == basis(1)

    def test_barycenter(self):
        p = embed_face([1 / 3] * 3)
        assert p.support == (1, 2, 3)
        assert p.mass() == pytest.approx(1.0)
        assert is_member(p, Face(2))

    def test_rejects_negative(self):
        with pytest.raises(MembershipError):
            embed_face([1.2, -0.2])

    def test_rejects_bad_sum(self):
        with pytest.raises(MembershipError):
            embed_face([0.4, 0.4])

    def test_isometry_random(self, rng):
        # distances of embedded images equal the truncated metric on
        # the raw coordinate vectors
        for _ in range(200):
            n = rng.randint(1, 5)
            a = [rng.random() for _ in range(n + 1)]
            b = [rng.random() for _ in range(n + 1)]
            a = [v / sum(a) for v in a]
            b = [v / sum(b) for v in b]
            pa, pb = embed_face(a), embed_face(b)
            assert product_metric(pa, pb) == pytest.approx(
                truncated_metric(a, b, n + 1), abs=1e-15)


class TestLemmaSandwichOnSimplex:
    def test_sandwich_on_simplex_points(self, rng):
        for _ in range(500):
            n = rng.randint(1, 6)
            x = random_simplex_point(rng, max_index=n)
            y = random_simplex_point(rng, max_index=n)
            lhs, rhs = check_equivalence_bounds(x, y, n, 1.0)
            assert lhs and rhs

    def test_explicit_scaling(self):
        # 2^n (1+M) blowup really is attained within a factor on
        # high-index coordinates
        n = 6
        x = basis(n)
        d = truncated_metric(x, ZERO, n)
        assert sup_distance(x, ZERO) <= 2 ** n * 2 * d
        assert d == pytest.approx(1.0 / (2 ** n * 2), abs=0)


def test_log_identity_for_tail():
    # N >= log2(2/eps)+1 forces the geometric tail below eps/2
    for eps in (0.5, 0.1, 0.01):
        N = math.ceil(math.log2(2 / eps) + 1)
        assert 2.0 ** -N < eps / 2
