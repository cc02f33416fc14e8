"""Deterministic structured-text output for certificates and exports.

Floats are rendered with 17 significant digits so every value round
trips exactly; key order is fixed by construction, never by sorting,
so identical inputs yield byte-identical documents.
"""

import json

from .geometry import Point

SCHEMA_VERSION = 1


def render_float(v):
    return f"{float(v):.17g}"


def dumps(obj, indent=0):
    """JSON text with deterministic float rendering."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        rendered = [dumps(v, indent + 1) for v in seq]
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in seq) \
                and sum(len(r) for r in rendered) < 60:
            return "[" + ", ".join(rendered) + "]"
        return "[\n" + ",\n".join(f"{inner}{r}" for r in rendered) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return render_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def point_payload(p):
    """Ordered [index, value] pairs."""
    return [[i, v] for i, v in p.pairs]


def point_from_payload(payload):
    return Point([(int(i), float(v)) for i, v in payload])


def params_payload(params):
    out = {
        "epsilon": params.epsilon,
        "N": params.N,
        "eps0": params.eps0,
        "eps1": params.eps1,
        "mesh_target": params.mesh_target,
        "tail_bound": params.tail_bound,
        "max_refinements": params.max_refinements,
    }
    out["modulus"] = params.modulus.describe() if params.modulus else None
    return out


def certificate_payload(cert, solver_version):
    w = cert.witness
    return {
        "schema_version": SCHEMA_VERSION,
        "solver_version": solver_version,
        "epsilon_requested": cert.epsilon_requested,
        "residual": cert.residual,
        "residual_value": cert.residual_value,
        "residual_tail": cert.residual_tail,
        "point_y": point_payload(cert.point_y),
        "params": params_payload(cert.params),
        "witness": {
            "dim": w.dim,
            "resolution": w.resolution,
            "vertices": [list(v) for v in w.vertices],
            "labels": list(w.labels),
            "min_label_slack": w.min_label_slack,
            "max_vertex_spread": w.max_vertex_spread,
        },
        "mesh_used": cert.mesh_used,
        "refinement_count": cert.refinement_count,
        "map_evaluations": cert.map_evaluations,
        "kernel": cert.kernel,
        "config": cert.config,
    }


def triangulation_payload(t, labeling=None):
    """Vertex/cell export, with labels when a labelling is supplied."""
    from .triangulation import KuhnTriangulation

    refs = list(t.vertex_refs())
    index = {ref: i for i, ref in enumerate(refs)}
    if isinstance(t, KuhnTriangulation):
        vertices = [list(ref) for ref in refs]
        denominator = t.resolution
    else:
        vertices = [[float(c) for c in t.coords(ref)] for ref in refs]
        denominator = None
    cells = [[index[ref] for ref in cell.vertices] for cell in t.cells()]
    out = {
        "schema_version": SCHEMA_VERSION,
        "scheme": t.scheme,
        "dim": t.dim,
        "lattice_denominator": denominator,
        "num_vertices": len(vertices),
        "num_cells": len(cells),
        "vertices": vertices,
        "cells": cells,
    }
    if labeling is not None:
        out["labels"] = [labeling.label(ref) for ref in refs]
    return out


def labeling_from_payload(payload):
    """Rebuild (triangulation, labeling) from a triangulate export."""
    from .labeling import ExplicitLabeling
    from .triangulation import ExplicitTriangulation, KuhnTriangulation

    labels = payload.get("labels")
    if labels is None:
        raise ValueError("payload carries no labels")
    dim = payload["dim"]
    if payload.get("lattice_denominator"):
        k = payload["lattice_denominator"]
        t = KuhnTriangulation(dim, k)
        assignment = {tuple(int(n) for n in ref): int(lab)
                      for ref, lab in zip(payload["vertices"], labels)}
    else:
        from fractions import Fraction

        coords = [tuple(Fraction(c).limit_denominator(10 ** 12) for c in v)
                  for v in payload["vertices"]]
        t = ExplicitTriangulation(dim, coords, payload["cells"])
        assignment = {i: int(lab) for i, lab in enumerate(labels)}
    return t, ExplicitLabeling(assignment)
