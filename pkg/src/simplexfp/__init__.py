"""Certified epsilon-fixed points of continuous self-maps of the
standard infinite-dimensional simplex, via Sperner labellings of Kuhn
triangulations and door-to-door path following.

Hot loops run in a compiled extension when it is built; the pure Python
lane is always available and bit-identical (see ``simplexfp.kernels``).
"""

from .errors import (
    DivisionByZero,
    EmptyComponentList,
    InternalError,
    MapRangeError,
    MapSyntaxError,
    MembershipError,
    RangeViolation,
    RefinementExhausted,
    ResourceCapExceeded,
    SimplexError,
    UndeclaredVariable,
    UnknownBuiltin,
)
from .geometry import (
    TOL_MEMBERSHIP,
    ZERO,
    Face,
    MetricParams,
    OpenHull,
    Point,
    SimplexClosure,
    basis,
    check_equivalence_bounds,
    embed_face,
    from_dense,
    from_lattice,
    is_member,
    product_metric,
    sup_distance,
    truncated_metric,
)
from .kernels import active_kernel, compiled_available, force_python
from .labeling import (
    ExplicitLabeling,
    FiniteMap,
    MapInducedLabeling,
    ValidationReport,
    count_full_cells,
    find_full_cell_pathfollow,
    full_cells,
    random_carrier_labeling,
    sperner_label,
    truncate_map,
    validate_sperner,
)
from .mapdsl import (
    MapOracle,
    MapSpec,
    ParsedMap,
    builtin,
    builtin_suite,
    evaluate_map,
    load_map_file,
    parse_map,
    project_to_simplex,
    render_map,
)
from .solver import (
    Certificate,
    LipschitzModulus,
    ResidualEstimate,
    SolveConfig,
    SolverParams,
    epsilon_fixed_point,
    fixed_point,
    plan_parameters,
    residual,
)
from .triangulation import (
    BOUNDARY,
    Cell,
    ExplicitTriangulation,
    KuhnTriangulation,
    SupNorm,
    TruncatedProductMetric,
    barycentric_subdivide,
    facet_neighbor,
    kuhn_triangulate,
    mesh_size,
    trivial_triangulation,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY", "Cell", "Certificate", "DivisionByZero", "EmptyComponentList",
    "ExplicitLabeling", "ExplicitTriangulation", "Face", "FiniteMap",
    "InternalError", "KuhnTriangulation", "LipschitzModulus",
    "MapInducedLabeling", "MapOracle", "MapRangeError", "MapSpec",
    "MapSyntaxError", "MembershipError", "MetricParams", "OpenHull",
    "ParsedMap", "Point", "RangeViolation", "RefinementExhausted",
    "ResidualEstimate", "ResourceCapExceeded", "SimplexClosure",
    "SimplexError", "SolveConfig", "SolverParams", "SupNorm",
    "TOL_MEMBERSHIP", "TruncatedProductMetric", "UndeclaredVariable",
    "UnknownBuiltin", "ValidationReport", "ZERO", "active_kernel",
    "barycentric_subdivide", "basis", "builtin", "builtin_suite",
    "check_equivalence_bounds", "compiled_available", "count_full_cells",
    "embed_face", "epsilon_fixed_point", "evaluate_map", "facet_neighbor",
    "find_full_cell_pathfollow", "fixed_point", "force_python",
    "from_dense", "from_lattice", "full_cells", "is_member",
    "kuhn_triangulate", "load_map_file", "mesh_size", "parse_map",
    "plan_parameters", "product_metric", "project_to_simplex",
    "random_carrier_labeling", "render_map", "residual", "sperner_label",
    "sup_distance", "trivial_triangulation", "truncate_map",
    "truncated_metric", "validate_sperner",
]
