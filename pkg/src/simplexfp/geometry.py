"""Points of the standard infinite-dimensional simplex and its metrics.

Coordinates are 1-indexed. A point stores only its nonzero entries, so
every value handled here has finite support and every metric series below
is a finite sum.
"""

from dataclasses import dataclass

from .errors import MembershipError

# Absolute tolerance for sum/range membership predicates.
TOL_MEMBERSHIP = 1e-9

# Values below this magnitude are treated as exact zeros after arithmetic.
ZERO_EPS = 1e-15


class Point:
    """Finitely supported element of the closed simplex.

    Stores an ascending tuple of ``(index, value)`` pairs with all values
    in (0, 1] and total mass at most ``1 + TOL_MEMBERSHIP``.
    """

    __slots__ = ("_pairs",)

    def __init__(self, pairs=()):
        cleaned = []
        last_index = 0
        for index, value in pairs:
            if not isinstance(index, int) or index < 1:
                raise MembershipError(f"coordinate index must be a positive integer, got {index!r}")
            if index <= last_index:
                raise MembershipError(f"indices must be strictly increasing, got {index} after {last_index}")
            last_index = index
            value = float(value)
            if abs(value) < ZERO_EPS:
                continue
            if value < 0.0 or value > 1.0 + TOL_MEMBERSHIP:
                raise MembershipError(f"coordinate {index} out of [0, 1]: {value!r}")
            cleaned.append((index, min(value, 1.0)))
        total = sum(v for _, v in cleaned)
        if total > 1.0 + TOL_MEMBERSHIP:
            raise MembershipError(f"coordinates sum to {total!r} > 1")
        object.__setattr__(self, "_pairs", tuple(cleaned))

    @property
    def pairs(self):
        return self._pairs

    @property
    def support(self):
        return tuple(i for i, _ in self._pairs)

    def value(self, index):
        """Coordinate at 1-based ``index`` (0.0 off the support)."""
        for i, v in self._pairs:
            if i == index:
                return v
            if i > index:
                return 0.0
        return 0.0

    def mass(self):
        return sum(v for _, v in self._pairs)

    def max_index(self):
        return self._pairs[-1][0] if self._pairs else 0

    def dense(self, upto):
        """First ``upto`` coordinates as a list."""
        out = [0.0] * upto
        for i, v in self._pairs:
            if i <= upto:
                out[i - 1] = v
        return out

    def __eq__(self, other):
        return isinstance(other, Point) and self._pairs == other._pairs

    def __hash__(self):
        return hash(self._pairs)

    def __repr__(self):
        inner = ", ".join(f"{i}: {v!r}" for i, v in self._pairs)
        return f"Point({{{inner}}})"

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")


ZERO = Point()


def basis(i):
    """The standard basis vector e_i."""
    return Point([(i, 1.0)])


def from_dense(values, start=1):
    """Point from a dense coordinate list beginning at index ``start``."""
    return Point([(start + j, v) for j, v in enumerate(values) if abs(v) >= ZERO_EPS])


def from_lattice(lattice, k):
    """Point with coordinates ``lattice[j] / k`` (lattice of nonneg ints)."""
    return Point([(j + 1, n / k) for j, n in enumerate(lattice) if n])


def _as_pairs(x):
    """Coerce Point | dense sequence | {index: value} into sorted pairs.

    Metric functions accept raw coordinate vectors as well as Points so
    they can be exercised on bounded subsets of R^n that are not inside
    the simplex (the equivalence bounds hold there too).
    """
    if isinstance(x, Point):
        return x.pairs
    if isinstance(x, dict):
        return tuple(sorted((int(i), float(v)) for i, v in x.items() if v))
    return tuple((j + 1, float(v)) for j, v in enumerate(x) if v)


def _merged_abs_diffs(x, y):
    """Yield (index, |x_i - y_i|) over the union of supports."""
    px, py = _as_pairs(x), _as_pairs(y)
    ix = iy = 0
    while ix < len(px) or iy < len(py):
        if iy >= len(py) or (ix < len(px) and px[ix][0] < py[iy][0]):
            yield px[ix][0], abs(px[ix][1])
            ix += 1
        elif ix >= len(px) or py[iy][0] < px[ix][0]:
            yield py[iy][0], abs(py[iy][1])
            iy += 1
        else:
            yield px[ix][0], abs(px[ix][1] - py[iy][1])
            ix += 1
            iy += 1


def product_metric(x, y):
    """Complete metric of the product topology.

    Sum over i of |x_i - y_i| / (2^i (1 + |x_i - y_i|)); finitely many
    nonzero terms because both arguments are finitely supported.
    """
    total = 0.0
    for i, d in _merged_abs_diffs(x, y):
        if d:
            total += d / (2.0 ** i * (1.0 + d))
    return total


def truncated_metric(x, y, n):
    """The metric restricted to the first ``n`` coordinates."""
    if n < 1:
        raise ValueError(f"truncation dimension must be >= 1, got {n}")
    total = 0.0
    for i, d in _merged_abs_diffs(x, y):
        if i > n:
            break
        if d:
            total += d / (2.0 ** i * (1.0 + d))
    return total


def sup_distance(x, y):
    """Sup-norm distance; 0.0 when both supports are empty."""
    return max((d for _, d in _merged_abs_diffs(x, y)), default=0.0)


@dataclass(frozen=True)
class MetricParams:
    """Truncation dimension (None marks the full product metric) and the
    sup-norm diameter bound of the set under consideration."""

    truncation_dim: int | None
    bound_M: float = 0.0

    def __post_init__(self):
        if self.truncation_dim is not None and self.truncation_dim < 1:
            raise ValueError("truncation_dim must be >= 1 when finite")
        if self.bound_M < 0:
            raise ValueError("bound_M must be nonnegative")


def check_equivalence_bounds(x, y, n, M):
    """Both sides of the metric-equivalence sandwich on a bounded set.

    Returns ``(lhs_ok, rhs_ok)`` where lhs is
    ``d_n(x, y) <= n * sup`` and rhs is ``sup <= 2^n (1 + M) * d_n(x, y)``.
    Requires supports within 1..n and ``sup_distance(x, y) <= M``.
    """
    for p in (x, y):
        pairs = _as_pairs(p)
        if pairs and pairs[-1][0] > n:
            raise ValueError(f"support index {pairs[-1][0]} exceeds truncation {n}")
    sup = sup_distance(x, y)
    if sup > M:
        raise ValueError(f"sup distance {sup} exceeds bound M={M}")
    dn = truncated_metric(x, y, n)
    lhs_ok = dn <= n * sup
    rhs_ok = sup <= 2.0 ** n * (1.0 + M) * dn
    if sup == 0.0:
        # identical points: both sides are 0 <= 0
        rhs_ok = dn >= 0.0
    return lhs_ok, rhs_ok


class SimplexClosure:
    """Region marker: the closed simplex (sum <= 1, coords in [0, 1])."""


class OpenHull:
    """Region marker: the convex hull of the basis vectors (sum = 1)."""


@dataclass(frozen=True)
class Face:
    """Region marker: the n-dimensional face conv{e_1, ..., e_{n+1}}."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("face dimension must be nonnegative")


def is_member(x, region):
    """Membership of ``x`` in one of the region markers above."""
    if not isinstance(x, Point):
        try:
            x = Point(_as_pairs(x))
        except MembershipError:
            return False
    if region is SimplexClosure or isinstance(region, SimplexClosure):
        return True  # Point invariants are exactly closure membership
    if region is OpenHull or isinstance(region, OpenHull):
        return abs(x.mass() - 1.0) <= TOL_MEMBERSHIP
    if isinstance(region, Face):
        if x.max_index() > region.n + 1:
            return False
        return abs(x.mass() - 1.0) <= TOL_MEMBERSHIP
    raise TypeError(f"unknown region {region!r}")


def embed_face(coords):
    """Isometric embedding of the standard simplex into the face F^n.

    ``coords`` are the n+1 barycentric coordinates; they must be
    nonnegative and sum to 1 within tolerance.
    """
    coords = [float(c) for c in coords]
    if not coords:
        raise MembershipError("embed_face needs at least one coordinate")
    for j, c in enumerate(coords):
        if c < -TOL_MEMBERSHIP:
            raise MembershipError(f"coordinate {j + 1} is negative: {c!r}")
    total = sum(coords)
    if abs(total - 1.0) > TOL_MEMBERSHIP:
        raise MembershipError(f"coordinates sum to {total!r}, expected 1")
    return from_dense([max(c, 0.0) for c in coords])
