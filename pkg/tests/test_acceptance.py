"""Acceptance suite: one test per criterion, each printing a verdict.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict
lines. Oracles here are written independently of the library paths they
check: residuals are recomputed from explicit metric formulas, full
cells come from exhaustive enumeration, and proximity thresholds are
pre-validated on dense coordinate grids before being asserted on
solver output.
"""

import json
import math
import random
import subprocess
import sys

from simplexfp import (
    MapInducedLabeling,
    ZERO,
    basis,
    builtin,
    builtin_suite,
    check_equivalence_bounds,
    count_full_cells,
    find_full_cell_pathfollow,
    from_dense,
    full_cells,
    kuhn_triangulate,
    epsilon_fixed_point,
    parse_map,
    plan_parameters,
    product_metric,
    random_carrier_labeling,
    render_map,
    residual,
    sup_distance,
    truncate_map,
)

BARYCENTER = from_dense([1 / 3, 1 / 3, 1 / 3])


def verdict(number, description, ok):
    print(f"ACCEPTANCE {number}: {description}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {number} failed: {description}"


def test_criterion_1_sperner_oddness():
    """100 seeded carrier-respecting labellings per triangulation -> odd."""
    failures = 0
    for dim, resolutions in ((2, range(1, 9)), (3, range(1, 5))):
        for k in resolutions:
            t = kuhn_triangulate(dim, k)
            for seed in range(100):
                lab = random_carrier_labeling(t, seed * 1000 + dim * 10 + k)
                if count_full_cells(t, lab) % 2 == 0:
                    failures += 1
    verdict(1, "full-cell count odd for 1200/1200 random Sperner labellings",
            failures == 0)


def test_criterion_2_metric_equivalence():
    """Both sandwich inequalities on random bounded pairs, zero tolerance."""
    bad = 0
    for n in range(1, 7):
        rng = random.Random(5150 + n)
        for _ in range(1000):
            x = [rng.random() for _ in range(n)]
            y = [rng.random() for _ in range(n)]
            lhs, rhs = check_equivalence_bounds(x, y, n, 1.0)
            if not (lhs and rhs):
                bad += 1
    verdict(2, "metric equivalence sandwich holds for 6000/6000 pairs", bad == 0)


def test_criterion_3_tail_bound():
    """Planned N forces the geometric tail below epsilon/2, exactly."""
    ok = True
    for j in range(1, 7):
        eps = 10.0 ** -j
        params = plan_parameters(eps)
        ok = ok and (2.0 ** -params.N < eps / 2.0)
    verdict(3, "2^-N < eps/2 for eps in {1e-1..1e-6}", ok)


def test_criterion_4_witness_inequalities():
    """Label slack >= 0 and vertex spread below the mesh bound, all builtins."""
    ok = True
    for f in builtin_suite():
        for eps in (0.1, 0.02):
            cert = epsilon_fixed_point(f, eps)
            w = cert.witness
            if not w.min_label_slack >= 0.0:
                ok = False
            if not w.max_vertex_spread < 2.0 ** (cert.params.N + 2) * cert.mesh_used:
                ok = False
            if sorted(w.labels) != list(range(1, w.dim + 2)):
                ok = False
    verdict(4, "witness-cell inequalities hold across the builtin suite", ok)


def _rotation_residual_oracle(a, b, c):
    """d-bar(y, rot y) for y = (a, b, c) on F^2, written out directly."""
    d1 = abs(a - c)
    d2 = abs(b - a)
    d3 = abs(c - b)
    return (d1 / (2.0 * (1.0 + d1))
            + d2 / (4.0 * (1.0 + d2))
            + d3 / (8.0 * (1.0 + d3)))


def test_criterion_5_rotation_end_to_end():
    """Certificates for rotation-3, with an oracle-validated proximity bound."""
    # grid oracle over F^2 at step 1e-3: small residual forces proximity
    # to the barycenter, for every epsilon under test
    steps = 1000
    implication_ok = True
    for eps in (1e-1, 1e-2, 1e-3):
        allowed = 10.0 * eps
        for ia in range(steps + 1):
            for ib in range(steps + 1 - ia):
                a = ia / steps
                b = ib / steps
                c = (steps - ia - ib) / steps
                if _rotation_residual_oracle(a, b, c) < eps:
                    prox = max(abs(a - 1 / 3), abs(b - 1 / 3), abs(c - 1 / 3))
                    if prox >= allowed:
                        implication_ok = False
    verdict(5, "grid oracle: rotation residual < eps forces barycenter proximity",
            implication_ok)

    f = builtin("rotation", n=3)
    ok = True
    for eps in (1e-1, 1e-2, 1e-3):
        cert = epsilon_fixed_point(f, eps)
        y = cert.point_y
        remeasured = _rotation_residual_oracle(y.value(1), y.value(2), y.value(3))
        if not remeasured < eps:
            ok = False
        if not sup_distance(y, BARYCENTER) < 10.0 * eps:
            ok = False
    verdict(5, "rotation-3 certificates: re-measured residual < eps, "
               "y within 10*eps of the barycenter", ok)


def _shift_residual_oracle(ys):
    """d-bar(y, shift y) for y supported in 1..6, written out directly."""
    total = ys[0] / (2.0 * (1.0 + ys[0]))
    for i in range(2, 7):
        d = abs(ys[i - 1] - ys[i - 2])
        total += d / (2.0 ** i * (1.0 + d))
    total += ys[5] / (2.0 ** 7 * (1.0 + ys[5]))
    return total


def _shift_distance_to_zero(ys):
    return sum(v / (2.0 ** i * (1.0 + v)) for i, v in enumerate(ys, start=1) if v)


def test_criterion_6_shift_infinite_support():
    """Shift map: residual < 0.05 and the candidate hugs the origin."""
    # grid oracle over the first six coordinates, mass step 1/20
    eps, allowed = 0.05, 0.2
    implication_ok = True

    def rec(prefix, remaining):
        nonlocal implication_ok
        if len(prefix) == 5:
            for last in range(remaining + 1):
                ys = [v / 20.0 for v in prefix + [last]]
                if _shift_residual_oracle(ys) < eps:
                    if _shift_distance_to_zero(ys) >= allowed:
                        implication_ok = False
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v)

    rec([], 20)
    verdict(6, "grid oracle: shift residual < 0.05 forces d(y, 0) < 0.2",
            implication_ok)

    cert = epsilon_fixed_point(builtin("shift"), eps)
    ok = cert.residual < eps
    ok = ok and residual(builtin("shift"), cert.point_y).upper < eps
    ok = ok and product_metric(cert.point_y, ZERO) < allowed
    verdict(6, "shift certificate: residual < 0.05 and d(y, 0) < 0.2", ok)


def test_criterion_7_pathfollow_matches_exhaustive():
    """The walk's cell is in the exhaustive full set, every builtin, N<=3, k<=6."""
    agree = 0
    total = 0
    for f in builtin_suite():
        for N in (1, 2, 3):
            for k in range(1, 7):
                t = kuhn_triangulate(N, k)
                lab = MapInducedLabeling(t, truncate_map(f, N))
                found = find_full_cell_pathfollow(t, lab)
                exhaustive = {c.vertices for c in full_cells(t, lab)}
                total += 1
                if found.vertices in exhaustive:
                    agree += 1
    verdict(7, f"path following agrees with exhaustive search ({agree}/{total})",
            agree == total)


def test_criterion_8_dsl_corpus():
    """Valid corpus parses and round-trips; malformed corpus diagnoses."""
    import glob
    import os

    maps_dir = os.path.join(os.path.dirname(__file__), "..", "src", "simplexfp", "maps")
    good = sorted(glob.glob(os.path.join(maps_dir, "*.map")))
    bad = sorted(glob.glob(os.path.join(maps_dir, "bad", "*.map")))
    ok = len(good) >= 10 and len(bad) >= 10

    for path in good:
        with open(path, encoding="utf-8") as fh:
            spec = parse_map(fh.read())
        if parse_map(render_map(spec)) != spec:
            ok = False
    verdict(8, f"{len(good)} map files parse and round-trip", ok)

    from simplexfp.cli import EXIT_PARSE, main

    diag_ok = True
    for path in bad:
        import contextlib
        import io

        err = io.StringIO()
        with contextlib.redirect_stderr(err):
            code = main(["parse-check", "--map", path])
        text = err.getvalue()
        if code != EXIT_PARSE or "line" not in text or "column" not in text:
            diag_ok = False
    verdict(8, f"{len(bad)} malformed files give positioned diagnostics and "
               f"the parse exit code", diag_ok)


def test_criterion_9_determinism():
    """Two identical solve invocations emit byte-identical certificates."""
    args = [sys.executable, "-m", "simplexfp.cli",
            "solve", "--map", "rotation-3", "--epsilon", "0.01"]
    first = subprocess.run(args, capture_output=True, timeout=300)
    second = subprocess.run(args, capture_output=True, timeout=300)
    ok = (first.returncode == 0 and second.returncode == 0
          and first.stdout == second.stdout and len(first.stdout) > 0)
    json.loads(first.stdout)  # must be valid structured output
    verdict(9, "byte-identical certificates across runs", ok)
