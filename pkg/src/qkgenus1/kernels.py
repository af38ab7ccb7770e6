"""Dispatch between the compiled series kernels and the Python fallback.

The compiled module is used when it imports and the environment variable
``QKGENUS1_PURE_PYTHON`` is unset. Compiled kernels work in int64 and
raise OverflowError rather than wrap; the dispatcher then reruns the exact
Python kernel, so results never depend on the backend.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_compiled = _ckernels is not None and not os.environ.get("QKGENUS1_PURE_PYTHON")


def backend() -> str:
    return "cython" if _compiled else "python"


def set_backend(name: str) -> None:
    """Select ``"cython"`` or ``"python"`` at runtime (tests and benchmarks)."""
    global _compiled
    if name == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        _compiled = True
    elif name == "python":
        _compiled = False
    else:
        raise ValueError(f"unknown backend {name!r}")


def compiled_available() -> bool:
    return _ckernels is not None


def _ints(values):
    return all(type(v) is int for v in values)


def _as_i64(values):
    # raises OverflowError for values outside int64
    return np.array(values, dtype=np.int64)


def div_sparse(s, layout_shifts, coeffs):
    """``layout_shifts`` is a 2-d int64 array, one row per divisor term."""
    if _compiled and _ints(coeffs) and _ints(s):
        try:
            return _ckernels.div_sparse(_as_i64(s), layout_shifts, _as_i64(coeffs)).tolist()
        except OverflowError:
            pass
    return _kernels_py.div_sparse(s, layout_shifts.tolist(), list(coeffs))


def mul_sparse(s, layout_shifts, coeffs):
    if _compiled and _ints(coeffs) and _ints(s):
        try:
            return _ckernels.mul_sparse(_as_i64(s), layout_shifts, _as_i64(coeffs)).tolist()
        except OverflowError:
            pass
    return _kernels_py.mul_sparse(s, layout_shifts.tolist(), list(coeffs))


def mul_dense(a, b, layout):
    if _compiled and _ints(a) and _ints(b):
        try:
            cap = -1 if layout.cap is None else layout.cap
            return _ckernels.mul_dense(
                _as_i64(a), _as_i64(b), layout.exps, layout.codes, layout.orders_array, cap
            ).tolist()
        except OverflowError:
            pass
    return _kernels_py.mul_dense(a, b, layout.exps_tuples, layout.codes.tolist(), layout.orders, layout.cap)
