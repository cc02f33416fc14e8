"""Certified epsilon-fixed points on the infinite-dimensional simplex.

The pipeline: derive the truncation dimension N and the tolerance
cascade from epsilon, truncate the map onto a face, triangulate at a
dyadic Kuhn resolution, path-follow to a fully labelled cell, read the
candidate off the label-1 vertex, and accept only when the measured
residual beats epsilon. Without a continuity modulus no mesh certifies
the residual a priori, so the loop starts coarse and doubles the
resolution until the measurement passes.
"""

import math
from dataclasses import dataclass, field

from .errors import InternalError, RefinementExhausted
from .geometry import Point
from .labeling import MapInducedLabeling, find_full_cell_pathfollow, truncate_map
from .triangulation import KuhnTriangulation

# Float guard for the witness inequality x^i_i - g_i(x^i) >= 0; the
# builtin maps evaluate exactly on dyadic grids, arbitrary expression
# maps may miss zero by rounding.
WITNESS_SLACK_GUARD = -1e-12


@dataclass(frozen=True)
class LipschitzModulus:
    """Modulus of continuity d(g(x), g(y)) <= L * d(x, y)."""

    L: float

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("Lipschitz constant must be positive")

    def delta_for(self, eps):
        return eps / self.L

    def describe(self):
        return {"kind": "lipschitz", "L": self.L}


@dataclass(frozen=True)
class SolverParams:
    """Derived constants of the truncation argument for a given epsilon.

    N makes the metric tail past N smaller than epsilon/2; eps0 and
    eps1 are the cascade driving the witness-cell estimates; the mesh
    target is reached directly when a modulus is available and kept as
    a reference floor otherwise.
    """

    epsilon: float
    N: int
    eps0: float
    eps1: float
    mesh_target: float
    tail_bound: float
    max_refinements: int = 20
    modulus: LipschitzModulus | None = None

    def __post_init__(self):
        if self.N < math.log2(2.0 / self.epsilon) + 1.0 - 1e-12:
            raise ValueError(f"N={self.N} too small for epsilon={self.epsilon}")
        if not self.tail_bound < self.epsilon / 2.0:
            raise ValueError("tail bound must be below epsilon/2")


def plan_parameters(epsilon, *, max_refinements=20, modulus=None, N=None,
                    mesh_target=None):
    """Solver constants for a requested epsilon (clamped into (0, 1])."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    eps = min(float(epsilon), 1.0)
    if N is None:
        N = math.ceil(math.log2(2.0 / eps) + 1.0)
    N = max(1, int(N))
    eps0 = eps / (8.0 * (N + 1))
    eps1 = eps / (2.0 ** (N + 5) * (N + 1))
    return SolverParams(
        epsilon=eps,
        N=N,
        eps0=eps0,
        eps1=eps1,
        mesh_target=eps1 if mesh_target is None else min(mesh_target, eps1),
        tail_bound=2.0 ** -N,
        max_refinements=max_refinements,
        modulus=modulus,
    )


class ResidualEstimate:
    """Measured d(y, f(y)) plus the analytic bound on the unevaluated tail."""

    def __init__(self, value, tail_bound):
        self.value = value
        self.tail_bound = tail_bound

    @property
    def upper(self):
        return self.value + self.tail_bound

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"ResidualEstimate({self.value!r}, tail<={self.tail_bound!r})"


def residual(f, y, min_prefix=60):
    """Distance from y to f(y) in the product metric.

    Components of f(y) are evaluated up to a prefix P; past P every
    metric term is below 2^-i, so the unevaluated tail is at most 2^-P.
    Maps with a declared support bound have an exactly zero tail.
    """
    if not isinstance(y, Point):
        raise TypeError("residual expects a Point")
    sb = getattr(f, "support_bound", None)
    if sb is not None:
        P = max(y.max_index(), sb)
        tail = 0.0
    else:
        P = max(y.max_index(), int(min_prefix))
        tail = 2.0 ** -P
    fs = f.components(y, P)
    total = 0.0
    for i in range(1, P + 1):
        d = abs(y.value(i) - fs[i - 1])
        if d:
            total += d / (2.0 ** i * (1.0 + d))
    return ResidualEstimate(total, tail)


@dataclass(frozen=True)
class WitnessCell:
    """The fully labelled cell backing a certificate."""

    dim: int
    resolution: int
    vertices: tuple
    labels: tuple
    min_label_slack: float
    max_vertex_spread: float


@dataclass(frozen=True)
class Certificate:
    """An epsilon-fixed point with provenance.

    ``residual`` is the conservative upper estimate (measured value plus
    tail bound) and is strictly below ``epsilon_requested``.
    """

    point_y: Point
    epsilon_requested: float
    residual: float
    residual_value: float
    residual_tail: float
    params: SolverParams
    witness: WitnessCell
    mesh_used: float
    refinement_count: int
    map_evaluations: int
    kernel: str
    config: dict = field(default_factory=dict)


@dataclass
class SolveConfig:
    """Operational knobs; never affects what counts as a valid answer."""

    start_resolution: int = 16
    max_refinements: int | None = None
    modulus: LipschitzModulus | None = None
    max_cells: int | None = None
    force_python: bool = False
    check_revisits: int = 4096  # verify the no-revisit invariant up to this k

    def echo(self):
        out = {
            "start_resolution": self.start_resolution,
            "force_python": self.force_python,
        }
        if self.max_refinements is not None:
            out["max_refinements"] = self.max_refinements
        if self.modulus is not None:
            out["modulus"] = self.modulus.describe()
        if self.max_cells is not None:
            out["max_cells"] = self.max_cells
        return out


def _next_pow2(n):
    k = 1
    while k < n:
        k *= 2
    return k


def _effective_dim(f, N):
    """Face dimension the solve runs on.

    A map that declares a finite support bound s and invariance of the
    face F^{s-1} is solved there directly; the truncation then
    reproduces the map exactly and no mass parks on the slack
    coordinate. Everything else uses the full truncation dimension.
    """
    s = getattr(f, "support_bound", None)
    if s is not None and getattr(f, "face_invariant", False):
        return max(1, min(N, s - 1))
    return N


def _witness_diagnostics(g, cell, k):
    xs_by_label = {}
    labels = []
    for ref in cell.vertices:
        lab = g.label_lattice(ref, k)
        labels.append(lab)
        xs_by_label[lab] = ref
    if sorted(labels) != list(range(1, g.dim + 2)):
        raise InternalError(f"walk returned a non-full cell with labels {labels}")
    min_slack = math.inf
    for lab, ref in xs_by_label.items():
        xs = [n / k for n in ref]
        out = g.evaluate(xs)
        slack = xs[lab - 1] - out[lab - 1]
        if slack < min_slack:
            min_slack = slack
    if min_slack < WITNESS_SLACK_GUARD:
        raise InternalError(f"witness inequality violated: slack {min_slack}")
    x1 = xs_by_label[1]
    spread = 0.0
    for ref in cell.vertices:
        for a, b in zip(x1, ref):
            d = abs(a - b) / k
            if d > spread:
                spread = d
    return labels, x1, min_slack, spread


def epsilon_fixed_point(f, epsilon, config=None):
    """Certified epsilon-fixed point of a continuous self-map.

    Raises MapRangeError if the oracle leaves the simplex and
    RefinementExhausted when the refinement budget runs out before the
    measured residual passes (a symptom of a steep continuity modulus,
    or of a discontinuous map).
    """
    from . import kernels

    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    config = config or SolveConfig()
    params = plan_parameters(
        epsilon,
        max_refinements=(config.max_refinements if config.max_refinements is not None else 20),
        modulus=config.modulus,
    )
    eps = params.epsilon
    m = _effective_dim(f, params.N)
    g = truncate_map(f, m)

    if params.modulus is not None:
        delta = min(params.modulus.delta_for(params.eps1), params.eps1)
        k = _next_pow2(math.ceil((m + 1) / delta))
    else:
        k = _next_pow2(max(2, config.start_resolution))

    best = None
    refinements = 0
    while True:
        t = KuhnTriangulation(m, k, max_cells=config.max_cells, check_cap=False)
        lab = MapInducedLabeling(t, g)
        cell = find_full_cell_pathfollow(
            t, lab,
            max_cells=config.max_cells,
            check_revisits=(k <= config.check_revisits),
            force_python=config.force_python,
        )
        labels, x1, min_slack, spread = _witness_diagnostics(g, cell, k)
        y = Point([(i + 1, x1[i] / k) for i in range(min(params.N, m + 1)) if x1[i]])
        res = residual(f, y, min_prefix=max(params.N, 60))
        mesh_used = (m + 1) / k
        if not spread < 2.0 ** (params.N + 2) * mesh_used:
            raise InternalError("vertex spread exceeds the mesh bound")
        cert = Certificate(
            point_y=y,
            epsilon_requested=float(epsilon),
            residual=res.upper,
            residual_value=res.value,
            residual_tail=res.tail_bound,
            params=params,
            witness=WitnessCell(
                dim=m,
                resolution=k,
                vertices=tuple(cell.vertices),
                labels=tuple(labels),
                min_label_slack=min_slack,
                max_vertex_spread=spread,
            ),
            mesh_used=mesh_used,
            refinement_count=refinements,
            map_evaluations=g.evaluations,
            kernel="python" if config.force_python else kernels.active_kernel(),
            config=config.echo(),
        )
        if res.upper < eps:
            return cert
        if best is None or cert.residual < best.residual:
            best = cert
        if refinements >= params.max_refinements:
            raise RefinementExhausted(
                f"residual {best.residual!r} still >= {eps!r} after "
                f"{refinements} refinements (resolution {k})",
                best=best,
            )
        refinements += 1
        k *= 2


def fixed_point(f, tol, config=None):
    """Drive the residual below ``tol`` through a halving epsilon ladder.

    Each rung reuses the previous rung's resolution as its starting
    mesh, so refinement work is shared down the ladder.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    config = config or SolveConfig()
    rungs = []
    eps = float(tol)
    while eps < 1.0:
        rungs.append(eps)
        eps *= 2.0
    rungs.append(min(eps, 1.0))
    rungs.reverse()  # largest epsilon first, tol last

    cert = None
    start = config.start_resolution
    for eps in rungs:
        rung_config = SolveConfig(
            start_resolution=start,
            max_refinements=config.max_refinements,
            modulus=config.modulus,
            max_cells=config.max_cells,
            force_python=config.force_python,
            check_revisits=config.check_revisits,
        )
        cert = epsilon_fixed_point(f, eps, rung_config)
        start = max(start, cert.witness.resolution)
    return cert
