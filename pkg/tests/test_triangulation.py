"""Kuhn and barycentric subdivisions: counts, mesh, pivots, coverage."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from simplexfp import (
    BOUNDARY,
    Face,
    ResourceCapExceeded,
    SupNorm,
    TruncatedProductMetric,
    barycentric_subdivide,
    is_member,
    kuhn_triangulate,
    mesh_size,
    trivial_triangulation,
)


class TestKuhnCounts:
    def test_segment_split(self):
        t = kuhn_triangulate(1, 2)
        assert sum(1 for _ in t.cells()) == 2
        assert t.num_vertices() == 3

    def test_two_dim_res_two(self):
        t = kuhn_triangulate(2, 2)
        assert sum(1 for _ in t.cells()) == 4

    def test_two_dim_res_three(self):
        t = kuhn_triangulate(2, 3)
        cells = list(t.cells())
        assert len(cells) == 9
        for cell in cells:
            for a, b in itertools.combinations(cell.vertices, 2):
                assert max(abs(x - y) for x, y in zip(a, b)) <= 1

    @pytest.mark.parametrize("N,k", [(N, k) for N in (1, 2, 3, 4) for k in (1, 2, 3)]
                             + [(1, 6), (2, 6), (3, 5)])
    def test_cell_and_vertex_counts(self, N, k):
        t = kuhn_triangulate(N, k)
        assert sum(1 for _ in t.cells()) == k ** N
        assert sum(1 for _ in t.vertex_refs()) == math.comb(k + N, N)

    def test_every_vertex_on_face(self):
        t = kuhn_triangulate(3, 4)
        for ref in t.vertex_refs():
            assert sum(ref) == 4
            assert is_member(t.vertex_point(ref), Face(3))

    def test_cell_carriers(self):
        t = kuhn_triangulate(2, 2)
        for cell in t.cells():
            for i in cell.carrier:
                assert any(v[i - 1] for v in cell.vertices)
            for v in cell.vertices:
                for i, n in enumerate(v):
                    if n:
                        assert i + 1 in cell.carrier

    def test_vertex_cap(self):
        with pytest.raises(ResourceCapExceeded):
            kuhn_triangulate(3, 100, max_cells=50)

    def test_enumeration_cap(self):
        t = kuhn_triangulate(2, 8)
        with pytest.raises(ResourceCapExceeded):
            list(t.cells(max_cells=10))


class TestMeshSize:
    def test_kuhn_sup_mesh_exact(self):
        assert mesh_size(kuhn_triangulate(2, 4), SupNorm) == 0.25

    def test_single_cell_segment(self):
        assert mesh_size(kuhn_triangulate(1, 1), SupNorm) == 1.0

    @pytest.mark.parametrize("N,k", [(1, 3), (2, 2), (2, 5), (3, 2)])
    def test_sup_mesh_is_one_over_k(self, N, k):
        assert mesh_size(kuhn_triangulate(N, k), SupNorm) == pytest.approx(1.0 / k, abs=0)

    @pytest.mark.parametrize("N,k", [(1, 2), (2, 3), (3, 2)])
    def test_product_mesh_bounded_by_lemma(self, N, k):
        t = kuhn_triangulate(N, k)
        dbar = mesh_size(t, TruncatedProductMetric)
        assert dbar <= (N + 1) * mesh_size(t, SupNorm) + 1e-15


class TestFacetNeighbor:
    def test_segment_pivot_at_midpoint(self):
        t = kuhn_triangulate(1, 2)
        left = t.corner_cell()
        assert left.vertices == ((2, 0), (1, 1))
        right = t.facet_neighbor(left, (2, 0))
        assert right.vertices == ((1, 1), (0, 2))

    def test_boundary_pivot(self):
        t = kuhn_triangulate(1, 2)
        left = t.corner_cell()
        assert t.facet_neighbor(left, (1, 1)) is BOUNDARY

    def test_pivot_is_involution(self):
        rng = random.Random(7)
        for N, k in [(1, 4), (2, 3), (3, 2), (3, 4)]:
            t = kuhn_triangulate(N, k)
            for cell in t.cells():
                drop = rng.choice(cell.vertices)
                other = t.facet_neighbor(cell, drop)
                if other is BOUNDARY:
                    continue
                new_vertex = next(v for v in other.vertices if v not in cell.vertices)
                back = t.facet_neighbor(other, new_vertex)
                assert back.vertices == cell.vertices

    def test_interior_facets_shared_by_two_cells(self):
        # every facet belongs to one cell (boundary) or exactly two
        for N, k in [(2, 3), (3, 2)]:
            t = kuhn_triangulate(N, k)
            owners = {}
            for cell in t.cells():
                for drop in cell.vertices:
                    facet = frozenset(cell.vertices) - {drop}
                    owners.setdefault(facet, set()).add(cell.vertices)
            for facet, cells in owners.items():
                assert len(cells) in (1, 2)

    def test_unknown_vertex_rejected(self):
        t = kuhn_triangulate(1, 2)
        with pytest.raises(ValueError):
            t.facet_neighbor(t.corner_cell(), (0, 2))


class TestCoverage:
    """The cells really cover F^N: locate random points independently."""

    @staticmethod
    def _locate(point, N, k):
        # staircase point location: tail sums give cube coordinates,
        # the base is their floor, the move order sorts the fractions
        ys = []
        for j in range(1, N + 1):
            ys.append(k * sum(point[j:]))
        base = [min(int(y), k - 1) if y >= 0 else 0 for y in ys]
        fracs = [(y - b, idx + 1) for idx, (y, b) in enumerate(zip(ys, base))]
        order = sorted(range(N), key=lambda i: (-fracs[i][0], i))
        perm = [fracs[i][1] for i in order]
        # rebuild lattice chain from cube coords
        lattice = [k - base[0]] + [base[i - 1] - base[i] for i in range(1, N)] + [base[N - 1]]
        chain = [tuple(lattice)]
        cur = list(lattice)
        for p in perm:
            cur[p - 1] -= 1
            cur[p] += 1
            chain.append(tuple(cur))
        return tuple(chain)

    def test_random_points_lie_in_enumerated_cells(self):
        rng = random.Random(1234)
        for N, k in [(2, 3), (2, 5), (3, 3)]:
            t = kuhn_triangulate(N, k)
            all_cells = {c.vertices for c in t.cells()}
            for _ in range(200):
                raw = [rng.random() for _ in range(N + 1)]
                point = [v / sum(raw) for v in raw]
                chain = self._locate(point, N, k)
                assert chain in all_cells
                # the located cell really contains the point: its cube
                # coordinates sit between the base and base+1 in walk order
                for vertex in chain:
                    assert all(v >= 0 for v in vertex)


class TestBarycentric:
    def test_segment_subdivision(self):
        t = barycentric_subdivide(trivial_triangulation(1))
        assert t.num_cells() == 2
        assert t.num_vertices() == 3

    def test_triangle_subdivision(self):
        t = barycentric_subdivide(trivial_triangulation(2))
        assert t.num_cells() == 6

    def test_double_subdivision(self):
        t = barycentric_subdivide(barycentric_subdivide(trivial_triangulation(2)))
        assert t.num_cells() == 36

    def test_mesh_strictly_decreases(self):
        t0 = trivial_triangulation(2)
        t1 = barycentric_subdivide(t0)
        t2 = barycentric_subdivide(t1)
        m0 = mesh_size(t0, SupNorm)
        m1 = mesh_size(t1, SupNorm)
        m2 = mesh_size(t2, SupNorm)
        assert m1 < m0
        assert m2 < m1
        # classical contraction factor N/(N+1)
        assert m1 <= m0 * 2 / 3 + 1e-15
        assert m2 <= m1 * 2 / 3 + 1e-15

    def test_proper_complex(self):
        t = barycentric_subdivide(trivial_triangulation(2))
        owners = {}
        for cell in t.cells():
            ids = tuple(sorted(cell.vertices))
            for drop in ids:
                facet = tuple(sorted(set(ids) - {drop}))
                owners.setdefault(facet, []).append(ids)
        for facet, cells in owners.items():
            assert len(cells) in (1, 2)

    def test_exact_rational_vertices(self):
        t = barycentric_subdivide(trivial_triangulation(2))
        bary = tuple(Fraction(1, 3) for _ in range(3))
        assert any(t.coords(ref) == bary for ref in t.vertex_refs())

    def test_subdivide_kuhn_input(self):
        t = barycentric_subdivide(kuhn_triangulate(1, 2))
        assert t.num_cells() == 4

    def test_cap(self):
        with pytest.raises(ResourceCapExceeded):
            barycentric_subdivide(trivial_triangulation(3), max_cells=10)
