"""Selection between the compiled walk core and the pure Python lane.

The extension module accelerates path following and exhaustive counting
for the builtin maps; both lanes perform identical IEEE arithmetic, so
results are bit-for-bit interchangeable. Anything the kernel cannot
express (expression maps, convex mixes, explicit labellings) silently
uses the Python lane. Set SIMPLEXFP_PURE_PYTHON=1 or call
``force_python()`` to disable the extension globally.
"""

import os

try:
    from . import _walkcore
except ImportError:
    _walkcore = None

_env_forced = os.environ.get("SIMPLEXFP_PURE_PYTHON", "") not in ("", "0")
_forced_python = _env_forced

_CODES = {"identity": 1, "rotation": 2, "shift": 3, "constant": 4}

_MAX_KERNEL_DIM = 62


def compiled_available():
    return _walkcore is not None


def active_kernel():
    return "cython" if (_walkcore is not None and not _forced_python) else "python"


def force_python(flag=True):
    """Disable (or re-enable) the compiled kernel globally."""
    global _forced_python
    _forced_python = bool(flag) or _env_forced


def _kernel_args(lab):
    from .labeling import MapInducedLabeling

    if not isinstance(lab, MapInducedLabeling):
        return None
    code = lab.finite_map.oracle.kernel_code()
    if code is None:
        return None
    name, rparam, cvals = code
    if len(cvals) > _MAX_KERNEL_DIM:
        return None
    return _CODES[name], int(rparam), tuple(float(v) for v in cvals)


def try_walk(t, lab, max_cells=None):
    """Compiled walk result (chain, labels, steps), or None to fall back."""
    if active_kernel() != "cython" or t.dim + 1 > _MAX_KERNEL_DIM:
        return None
    args = _kernel_args(lab)
    if args is None:
        return None
    from .triangulation import cell_cap

    code, rparam, cvals = args
    return _walkcore.walk(t.dim, t.resolution, code, rparam, cvals,
                          cell_cap(max_cells))


def try_count(t, lab, max_cells=None):
    """Compiled full-cell count, or None to fall back."""
    from .triangulation import KuhnTriangulation

    if active_kernel() != "cython":
        return None
    if not isinstance(t, KuhnTriangulation):
        return None
    if t.dim + 1 > _MAX_KERNEL_DIM or t.dim > 8:
        return None
    args = _kernel_args(lab)
    if args is None:
        return None
    from .triangulation import cell_cap

    code, rparam, cvals = args
    return _walkcore.count_full(t.dim, t.resolution, code, rparam, cvals,
                                cell_cap(max_cells))
