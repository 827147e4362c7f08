"""Import-time kernel selection: compiled extension if built, else pure Python.

The compiled kernel only accepts spaces with at most 63 concepts (single
64-bit word per position bitmap); callers route larger spaces to the pure
kernel regardless of what was selected here.
"""

from __future__ import annotations

from . import _kernel_py

try:
    from . import _speedups  # type: ignore[attr-defined]

    HAVE_SPEEDUPS = True
except ImportError:
    _speedups = None
    HAVE_SPEEDUPS = False

COMPILED_MAX_N = 63


def backend_name() -> str:
    return "compiled" if HAVE_SPEEDUPS else "pure"


def count_states(n, k, conc, pos, count_ops=False, force_pure=False):
    if HAVE_SPEEDUPS and not force_pure and n <= COMPILED_MAX_N:
        return _speedups.count_states(n, k, conc, pos, count_ops)
    return _kernel_py.count_states(n, k, conc, pos, count_ops)


def collect_states(n, k, conc, pos, cap=None, force_pure=False):
    if HAVE_SPEEDUPS and not force_pure and n <= COMPILED_MAX_N:
        return _speedups.collect_states(n, k, conc, pos, cap)
    return _kernel_py.collect_states(n, k, conc, pos, cap)


traverse = _kernel_py.traverse
