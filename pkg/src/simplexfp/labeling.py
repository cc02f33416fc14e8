"""Truncated maps, argmax vertex labels, and full-cell search.

The label of a grid vertex v is the index maximizing v_i - g_i(v) over
the carrier of v (least index on ties). Restricting the argmax to the
carrier keeps the label rule a Sperner labelling even in degenerate
ties, while preserving the defect inequality v_label - g_label >= 0.
"""

import random

from .errors import InternalError, MapRangeError, ResourceCapExceeded
from .geometry import TOL_MEMBERSHIP, Point
from .triangulation import KuhnTriangulation, cell_cap


class FiniteMap:
    """Self-map of the face F^N induced by truncating an oracle.

    Components 1..N are the oracle's components; component N+1 absorbs
    the remaining mass so the output stays on the face.
    """

    def __init__(self, oracle, dim, tol=TOL_MEMBERSHIP):
        if dim < 1:
            raise ValueError(f"truncation dimension must be >= 1, got {dim}")
        self.oracle = oracle
        self.dim = dim
        self.tol = tol
        self.evaluations = 0

    def evaluate(self, xs):
        """Map dense coordinates of a point of F^N to coordinates in F^N.

        ``xs`` has N+1 entries; indices beyond it are read as zero by
        the oracle. Raises MapRangeError when the oracle is not a
        self-map of the simplex.
        """
        self.evaluations += 1
        n = self.dim
        fs = list(self.oracle.components_from_dense(xs, n))
        for i in range(n):
            v = fs[i]
            if v < 0.0:
                if v < -self.tol:
                    raise MapRangeError(f"component {i + 1} is negative: {v!r}")
                fs[i] = 0.0
            elif v > 1.0:
                if v > 1.0 + self.tol:
                    raise MapRangeError(f"component {i + 1} exceeds 1: {v!r}")
                fs[i] = 1.0
        s = 0.0
        for v in fs:
            s += v
        last = 1.0 - s
        if last < 0.0:
            if last < -self.tol:
                raise MapRangeError(f"first {n} components sum to {s!r} > 1")
            fs.append(0.0)
            return tuple(v / s for v in fs)
        fs.append(last)
        return tuple(fs)

    def label_lattice(self, v, k):
        """Sperner label of the grid vertex with lattice coordinates v/k."""
        xs = [n / k for n in v]
        g = self.evaluate(xs)
        best = -1
        best_diff = 0.0
        for i, n in enumerate(v):
            if n == 0:
                continue
            d = xs[i] - g[i]
            if best < 0 or d > best_diff:
                best = i
                best_diff = d
        if best < 0:
            raise MapRangeError("vertex has empty carrier")
        return best + 1

    def __repr__(self):
        return f"FiniteMap({self.oracle!r}, dim={self.dim})"


def truncate_map(f, N):
    """Truncation of the oracle ``f`` to a self-map of F^N."""
    return FiniteMap(f, N)


def sperner_label(v, g):
    """Label of an arbitrary point ``v`` of F^N under the finite map ``g``.

    Carrier-restricted argmax of v_i - g_i(v), least index on ties.
    """
    if isinstance(v, Point):
        xs = v.dense(g.dim + 1)
    else:
        xs = list(v)
    out = g.evaluate(xs)
    best = -1
    best_diff = 0.0
    for i, x in enumerate(xs):
        if x <= 0.0:
            continue
        d = x - out[i]
        if best < 0 or d > best_diff:
            best = i
            best_diff = d
    if best < 0:
        raise MapRangeError("point has empty carrier")
    return best + 1


def _ref_carrier(t, ref):
    """1-based carrier indices of a vertex reference."""
    if isinstance(t, KuhnTriangulation):
        return tuple(i + 1 for i, n in enumerate(ref) if n)
    coords = t.coords(ref)
    return tuple(i + 1 for i, c in enumerate(coords) if c)


class MapInducedLabeling:
    """Lazy labelling of a Kuhn triangulation by a finite map.

    Labels are memoized on exact lattice coordinates; each vertex is
    evaluated at most once. Insertions are plain dict stores, so
    concurrent readers are safe as long as the oracle is pure.
    """

    provenance = "map"

    def __init__(self, triangulation, finite_map):
        if not isinstance(triangulation, KuhnTriangulation):
            raise TypeError("map-induced labellings require a Kuhn triangulation")
        if finite_map.dim != triangulation.dim:
            raise ValueError(
                f"map truncation {finite_map.dim} != triangulation dim {triangulation.dim}")
        self.triangulation = triangulation
        self.finite_map = finite_map
        self._memo = {}

    def label(self, ref):
        got = self._memo.get(ref)
        if got is None:
            got = self.finite_map.label_lattice(ref, self.triangulation.resolution)
            self._memo[ref] = got
        return got

    @property
    def evaluations(self):
        return len(self._memo)


class ExplicitLabeling:
    """Labelling backed by a fixed assignment table."""

    provenance = "explicit"

    def __init__(self, assignment):
        self.assignment = dict(assignment)

    def label(self, ref):
        try:
            return self.assignment[ref]
        except KeyError:
            raise InternalError(f"labelling does not assign vertex {ref!r}") from None

    @property
    def evaluations(self):
        return 0


def random_carrier_labeling(t, seed):
    """Seeded random labelling that respects every vertex's carrier."""
    rng = random.Random(seed)
    assignment = {}
    for ref in t.vertex_refs():
        carrier = _ref_carrier(t, ref)
        assignment[ref] = rng.choice(carrier)
    return ExplicitLabeling(assignment)


class ValidationReport:
    """Outcome of validate_sperner: truthy when valid."""

    def __init__(self, ok, violation=None):
        self.ok = ok
        self.violation = violation  # (vertex ref, label, carrier) or None

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        ref, label, carrier = self.violation
        return f"ValidationReport(vertex={ref!r}, label={label}, carrier={carrier})"


def validate_sperner(t, lab):
    """Check that every vertex's label lies in its carrier."""
    for ref in t.vertex_refs():
        label = lab.label(ref)
        carrier = _ref_carrier(t, ref)
        if label not in carrier:
            return ValidationReport(False, (ref, label, carrier))
    return ValidationReport(True)


def _cell_labels(t, lab, cell):
    return [lab.label(ref) for ref in cell.vertices]


def _is_full(labels, dim):
    return len(set(labels)) == dim + 1


def count_full_cells(t, lab, max_cells=None):
    """Exact number of fully labelled cells (odd for Sperner labellings)."""
    from . import kernels

    fast = kernels.try_count(t, lab, max_cells)
    if fast is not None:
        return fast
    count = 0
    for cell in t.cells(max_cells=max_cells):
        if _is_full(_cell_labels(t, lab, cell), t.dim):
            count += 1
    return count


def full_cells(t, lab, max_cells=None):
    """All fully labelled cells, in enumeration order."""
    return [cell for cell in t.cells(max_cells=max_cells)
            if _is_full(_cell_labels(t, lab, cell), t.dim)]


class WalkStats:
    """Instrumentation from one path-following run."""

    def __init__(self):
        self.steps = 0
        self.cells_visited = 0
        self.ascents = 0
        self.descents = 0
        self.revisit_checked = False

    def __repr__(self):
        return (f"WalkStats(steps={self.steps}, cells={self.cells_visited}, "
                f"ascents={self.ascents}, descents={self.descents})")


def find_full_cell_pathfollow(t, lab, max_cells=None, check_revisits=True,
                              return_stats=False, force_python=False):
    """Locate one fully labelled cell by door-to-door path following.

    Starts at the corner vertex e_1 and follows the unique simple path
    through facets labelled {1..j} across the faces F^1 ⊂ F^2 ⊂ ... up
    to a full top-dimensional cell. Labels are evaluated lazily, at most
    once per vertex in the pure Python lane.
    """
    from . import kernels
    from .triangulation import Cell, _lattice_carrier

    if not isinstance(t, KuhnTriangulation):
        raise TypeError("path following requires a Kuhn triangulation")
    if not force_python:
        fast = kernels.try_walk(t, lab, max_cells)
        if fast is not None:
            chain, labels, steps = fast
            stats = WalkStats()
            stats.steps = steps
            stats.cells_visited = steps
            cell = Cell(vertices=tuple(chain), carrier=_lattice_carrier(chain))
            return (cell, stats) if return_stats else cell
    chain, labels, stats = _walk_python(t, lab, max_cells, check_revisits)
    cell = Cell(vertices=tuple(chain), carrier=_lattice_carrier(chain))
    return (cell, stats) if return_stats else cell


def _walk_python(t, lab, max_cells=None, check_revisits=True):
    """Reference implementation of the variable-dimension walk."""
    from .triangulation import pivot_chain

    m = t.dim
    k = t.resolution
    cap = cell_cap(max_cells)
    stats = WalkStats()
    stats.revisit_checked = check_revisits
    seen = set() if check_revisits else None

    corner = (k,) + (0,) * m
    if lab.label(corner) != 1:
        raise InternalError("corner vertex e_1 is not labelled 1")

    # dimension 0 is the root; enter dimension 1 through the door {e_1}
    j = 1
    second = (k - 1, 1) + (0,) * (m - 1)
    chain = [corner, second]
    labels = [1, lab.label(second)]
    p_in = 1
    descended = False

    while True:
        stats.steps += 1
        stats.cells_visited += 1
        if stats.steps > cap:
            raise ResourceCapExceeded(f"path following exceeded cap {cap}", cap)
        if seen is not None:
            key = (j, frozenset(chain))
            if key in seen:
                raise InternalError("path follower revisited a cell; labels mutated?")
            seen.add(key)

        full = len(set(labels)) == j + 1
        if full:
            if not descended:
                if labels[p_in] != j + 1:
                    raise InternalError("entered a full cell through a non-door facet")
                if j == m:
                    return chain, labels, stats
                # ascend: the cell is a boundary facet of exactly one
                # (j+1)-cell, obtained by one mass move j+1 -> j+2
                top = chain[-1]
                new = top[:j] + (top[j] - 1, top[j + 1] + 1) + top[j + 2:]
                chain = chain + [new]
                labels = labels + [lab.label(new)]
                j += 1
                p_in = j
                stats.ascents += 1
                continue
            # arrived from above: leave through this cell's own door
            p_out = labels.index(j + 1)
            descended = False
        else:
            if descended:
                raise InternalError("descended into a non-full boundary cell")
            dup = labels[p_in]
            p_out = next(i for i, l in enumerate(labels) if l == dup and i != p_in)

        new_chain = pivot_chain(tuple(chain), p_out)
        if new_chain is None:
            # boundary door: only legal on the face x_{j+1} = 0
            if p_out != j or any(v[j] for v in chain[:j]):
                raise InternalError("walk hit an illegal boundary facet")
            if j == 1:
                # the only dimension-0 door is the start vertex itself
                raise InternalError("walk returned to the root; labels mutated?")
            chain = chain[:j]
            labels = labels[:j]
            j -= 1
            descended = True
            stats.descents += 1
            continue
        if p_out == 0:
            p_in = j
            new_vertex = new_chain[-1]
            labels = labels[1:] + [lab.label(new_vertex)]
        elif p_out == j:
            p_in = 0
            new_vertex = new_chain[0]
            labels = [lab.label(new_vertex)] + labels[:-1]
        else:
            p_in = p_out
            new_vertex = new_chain[p_out]
            labels = labels[:p_out] + [lab.label(new_vertex)] + labels[p_out + 1:]
        chain = list(new_chain)
