"""Simplicial subdivisions of the face F^N with facet pivoting.

Two schemes are provided. The Kuhn (Freudenthal) triangulation is the
computational workhorse: cells are kept in permutation form (a base
lattice vertex plus a chain of unit mass moves), which gives constant
time facet pivoting and never materializes the full cell list. The
barycentric scheme is the classical construction on an explicit complex,
with exact rational vertices so deduplication never compares floats.
"""

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceCapExceeded
from .geometry import Point, from_lattice, product_metric, sup_distance

DEFAULT_CELL_CAP = 50_000_000

_CAP_ENV = "SIMPLEXFP_MAX_CELLS"


def cell_cap(override=None):
    """Active resource cap: explicit override, else env var, else default."""
    if override is not None:
        return int(override)
    env = os.environ.get(_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_CELL_CAP


class Boundary:
    """Marker returned by facet pivots that would leave the face."""

    def __repr__(self):
        return "BOUNDARY"


BOUNDARY = Boundary()


@dataclass(frozen=True)
class Cell:
    """One top-dimensional simplex of a triangulation.

    ``vertices`` holds exact vertex references in chain order (Kuhn) or
    ascending id order (explicit complexes). ``carrier`` is the set of
    1-based coordinate indices active somewhere on the cell, i.e. the
    minimal face of F^N containing it.
    """

    vertices: tuple
    carrier: tuple

    def __len__(self):
        return len(self.vertices)


def _lattice_carrier(chain):
    active = set()
    for v in chain:
        for i, n in enumerate(v):
            if n:
                active.add(i + 1)
    return tuple(sorted(active))


def _kuhn_cell(chain):
    return Cell(vertices=tuple(chain), carrier=_lattice_carrier(chain))


class KuhnTriangulation:
    """Kuhn/Freudenthal subdivision of F^N at grid resolution k.

    Vertex references are tuples of N+1 nonnegative integers summing to
    k (the vertex coordinates times k). A cell's vertices form a chain:
    consecutive vertices differ by moving one mass unit from some
    coordinate p to p+1, each p in 1..N used exactly once.
    """

    scheme = "kuhn"

    def __init__(self, dim, resolution, max_cells=None, check_cap=True):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        if resolution < 1:
            raise ValueError(f"resolution must be >= 1, got {resolution}")
        self.dim = dim
        self.resolution = resolution
        self._cap = cell_cap(max_cells)
        # the guard protects materialization; path following never
        # enumerates, so the solver constructs with check_cap=False and
        # budgets its steps instead
        if check_cap and self.num_vertices() > self._cap:
            raise ResourceCapExceeded(
                f"Kuhn({dim}, {resolution}) has {self.num_vertices()} vertices, cap {self._cap}",
                self._cap,
            )

    def num_cells(self):
        return self.resolution ** self.dim

    def num_vertices(self):
        return math.comb(self.resolution + self.dim, self.dim)

    def vertex_refs(self):
        """All lattice vertices, lexicographic order."""
        n, k = self.dim + 1, self.resolution

        def gen(prefix, remaining, slots):
            if slots == 1:
                yield prefix + (remaining,)
                return
            for first in range(remaining + 1):
                yield from gen(prefix + (first,), remaining - first, slots - 1)

        return gen((), k, n)

    def vertex_point(self, ref):
        return from_lattice(ref, self.resolution)

    def cells(self, max_cells=None):
        """All cells, lexicographic in (base vertex, move permutation).

        Counts against the resource cap; deterministic order.
        """
        cap = cell_cap(max_cells) if max_cells is not None else self._cap
        produced = 0
        for base in self.vertex_refs():
            for perm in itertools.permutations(range(1, self.dim + 1)):
                chain = _chain_from(base, perm)
                if chain is None:
                    continue
                produced += 1
                if produced > cap:
                    raise ResourceCapExceeded(
                        f"cell enumeration exceeded cap {cap}", cap)
                yield _kuhn_cell(chain)

    def corner_cell(self):
        """The distinguished start cell at e_1 (identity move order)."""
        base = (self.resolution,) + (0,) * self.dim
        chain = _chain_from(base, tuple(range(1, self.dim + 1)))
        if chain is None:  # only possible for resolution 0, excluded above
            raise AssertionError("corner cell must exist")
        return _kuhn_cell(chain)

    def facet_neighbor(self, cell, opposite_vertex):
        """Cell across the facet of ``cell`` opposite ``opposite_vertex``.

        Returns BOUNDARY when the facet lies on the boundary of F^N.
        Constant time: one chain splice, no adjacency tables.
        """
        try:
            pos = cell.vertices.index(tuple(opposite_vertex))
        except ValueError:
            raise ValueError(f"vertex {opposite_vertex!r} is not in the cell") from None
        chain = pivot_chain(cell.vertices, pos)
        if chain is None:
            return BOUNDARY
        return _kuhn_cell(chain)

    def __repr__(self):
        return f"KuhnTriangulation(dim={self.dim}, resolution={self.resolution})"


def _chain_from(base, perm):
    """Vertex chain for (base, move permutation), or None if it leaves F^N."""
    chain = [base]
    v = base
    for p in perm:
        if v[p - 1] == 0:
            return None
        v = v[: p - 1] + (v[p - 1] - 1, v[p] + 1) + v[p + 1:]
        chain.append(v)
    return chain


def _move(a, b):
    """Index p of the unit move turning vertex a into b (1-based)."""
    for i, (x, y) in enumerate(zip(a, b)):
        if y != x:
            return i + 1
    raise AssertionError("identical vertices in a chain")


def pivot_chain(chain, pos):
    """Replace the vertex at ``pos`` in a Kuhn chain; None if boundary.

    The replacement rules are the classical Freudenthal pivots: dropping
    the base rotates the first move to the back, dropping the top
    rotates the last move to the front, dropping a middle vertex swaps
    the two adjacent moves.
    """
    m = len(chain) - 1  # number of moves
    if m == 0:
        return None
    if pos == 0:
        p = _move(chain[0], chain[1])
        top = chain[m]
        new = top[: p - 1] + (top[p - 1] - 1, top[p] + 1) + top[p + 1:]
        if new[p - 1] < 0:
            return None
        return tuple(chain[1:]) + (new,)
    if pos == m:
        p = _move(chain[m - 1], chain[m])
        bot = chain[0]
        new = bot[: p - 1] + (bot[p - 1] + 1, bot[p] - 1) + bot[p + 1:]
        if new[p] < 0:
            return None
        return (new,) + tuple(chain[:m])
    prev, cur, nxt = chain[pos - 1], chain[pos], chain[pos + 1]
    q = _move(cur, nxt)
    new = prev[: q - 1] + (prev[q - 1] - 1, prev[q] + 1) + prev[q + 1:]
    if new[q - 1] < 0:
        return None
    return tuple(chain[:pos]) + (new,) + tuple(chain[pos + 1:])


def kuhn_triangulate(N, k, max_cells=None):
    """Standard Kuhn/Freudenthal subdivision of F^N with k^N cells."""
    return KuhnTriangulation(N, k, max_cells=max_cells)


def facet_neighbor(t, cell, opposite_vertex):
    """Cell sharing the facet of ``cell`` opposite ``opposite_vertex``,
    or BOUNDARY."""
    return t.facet_neighbor(cell, opposite_vertex)


class ExplicitTriangulation:
    """Materialized complex: vertex table plus cell index tuples.

    Vertices are tuples of Fractions (barycentric coordinates on F^N),
    so equality and deduplication are exact.
    """

    def __init__(self, dim, vertices, cells, scheme="explicit"):
        self.dim = dim
        self.scheme = scheme
        self._vertices = list(vertices)
        self._index = {v: i for i, v in enumerate(self._vertices)}
        self._cells = [tuple(sorted(c)) for c in cells]
        self._facets = None

    def num_cells(self):
        return len(self._cells)

    def num_vertices(self):
        return len(self._vertices)

    def vertex_refs(self):
        return iter(range(len(self._vertices)))

    def coords(self, ref):
        return self._vertices[ref]

    def vertex_point(self, ref):
        coords = self._vertices[ref]
        return Point([(i + 1, float(c)) for i, c in enumerate(coords) if c])

    def _carrier(self, ids):
        active = set()
        for vid in ids:
            for i, c in enumerate(self._vertices[vid]):
                if c:
                    active.add(i + 1)
        return tuple(sorted(active))

    def cells(self, max_cells=None):
        for ids in self._cells:
            yield Cell(vertices=ids, carrier=self._carrier(ids))

    def _facet_table(self):
        if self._facets is None:
            table = {}
            for ci, ids in enumerate(self._cells):
                for drop in ids:
                    facet = tuple(sorted(set(ids) - {drop}))
                    table.setdefault(facet, []).append(ci)
            self._facets = table
        return self._facets

    def facet_neighbor(self, cell, opposite_vertex):
        ids = tuple(sorted(cell.vertices))
        if opposite_vertex not in ids:
            raise ValueError(f"vertex {opposite_vertex!r} is not in the cell")
        facet = tuple(sorted(set(ids) - {opposite_vertex}))
        owners = self._facet_table().get(facet, [])
        others = [ci for ci in owners if self._cells[ci] != ids]
        if not others:
            return BOUNDARY
        if len(others) > 1:
            raise AssertionError("facet shared by more than two cells")
        other = self._cells[others[0]]
        return Cell(vertices=other, carrier=self._carrier(other))

    def __repr__(self):
        return (f"ExplicitTriangulation(dim={self.dim}, scheme={self.scheme!r}, "
                f"cells={len(self._cells)})")


def trivial_triangulation(N):
    """F^N as a single cell with vertices e_1 .. e_{N+1}."""
    verts = []
    for i in range(N + 1):
        coords = [Fraction(0)] * (N + 1)
        coords[i] = Fraction(1)
        verts.append(tuple(coords))
    return ExplicitTriangulation(N, verts, [tuple(range(N + 1))], scheme="trivial")


def _materialize(t, max_cells=None):
    if isinstance(t, ExplicitTriangulation):
        return t
    k = t.resolution
    vertices = []
    index = {}
    cells = []
    for cell in t.cells(max_cells=max_cells):
        ids = []
        for v in cell.vertices:
            coords = tuple(Fraction(n, k) for n in v)
            if coords not in index:
                index[coords] = len(vertices)
                vertices.append(coords)
            ids.append(index[coords])
        cells.append(tuple(ids))
    return ExplicitTriangulation(t.dim, vertices, cells, scheme=t.scheme)


def barycentric_subdivide(t, max_cells=None):
    """Barycentric subdivision: each N-cell splits into (N+1)! cells.

    New vertices are the barycenters of all faces of all cells; chains
    of nested faces give the new cells. Mesh size shrinks by at least
    the classical N/(N+1) factor in any norm.
    """
    t = _materialize(t, max_cells=max_cells)
    cap = cell_cap(max_cells)
    expected = t.num_cells() * math.factorial(t.dim + 1)
    if expected > cap:
        raise ResourceCapExceeded(
            f"barycentric subdivision would create {expected} cells, cap {cap}", cap)

    vertices = []
    index = {}

    def vid(coords):
        if coords not in index:
            index[coords] = len(vertices)
            vertices.append(coords)
        return index[coords]

    def barycenter(ids):
        pts = [t.coords(i) for i in ids]
        n = len(pts)
        return tuple(sum(col, Fraction(0)) / n for col in zip(*pts))

    new_cells = []
    for ids in t._cells:
        members = list(ids)
        # chains of strictly nested faces, one face per dimension
        for perm in itertools.permutations(members):
            chain_ids = []
            for depth in range(1, len(members) + 1):
                face = tuple(sorted(perm[:depth]))
                chain_ids.append(vid(barycenter(face)))
            new_cells.append(tuple(chain_ids))
    return ExplicitTriangulation(t.dim, vertices, new_cells, scheme="barycentric")


class SupNorm:
    """Metric marker: sup-norm distance between vertex coordinates."""


class TruncatedProductMetric:
    """Metric marker: the product metric truncated to the face."""


def _cell_points(t, cell):
    return [t.vertex_point(ref) for ref in cell.vertices]


def _lattice_distance(a, b, k, want_sup):
    """Vertex distance from exact lattice differences (one rounding)."""
    if want_sup:
        return max(abs(x - y) for x, y in zip(a, b)) / k
    total = 0.0
    for i, (x, y) in enumerate(zip(a, b), start=1):
        d = abs(x - y) / k
        if d:
            total += d / (2.0 ** i * (1.0 + d))
    return total


def mesh_size(t, metric=SupNorm, max_cells=None):
    """Largest cell diameter, measured at the vertices.

    The diameter of a simplex under either metric is attained at a
    vertex pair, so the maximum over vertex pairs is exact. Kuhn cells
    are measured on integer lattice differences, so the sup-norm mesh
    of Kuhn(N, k) is exactly 1/k.
    """
    if metric is SupNorm or isinstance(metric, SupNorm):
        want_sup = True
    elif metric is TruncatedProductMetric or isinstance(metric, TruncatedProductMetric):
        want_sup = False  # vertices live on F^N, so d-bar = d-bar_{N+1}
    else:
        raise TypeError(f"unknown metric {metric!r}")
    lattice = isinstance(t, KuhnTriangulation)
    worst = 0.0
    for cell in t.cells(max_cells=max_cells):
        if lattice:
            pairs = itertools.combinations(cell.vertices, 2)
            for a, b in pairs:
                d = _lattice_distance(a, b, t.resolution, want_sup)
                if d > worst:
                    worst = d
            continue
        pts = _cell_points(t, cell)
        dist = sup_distance if want_sup else product_metric
        for a, b in itertools.combinations(pts, 2):
            d = dist(a, b)
            if d > worst:
                worst = d
    return worst
