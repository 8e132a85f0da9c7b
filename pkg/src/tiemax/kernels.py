"""Backend selection for the counting scans.

The compiled extension is used when it imported and the values are int64;
object arrays (values beyond int64) always take the numpy path.
"""
from __future__ import annotations

import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_backend = "compiled" if _compiled is not None else "python"


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous backend."""
    global _backend
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _compiled is None:
        raise RuntimeError("compiled kernels are not built")
    previous, _backend = _backend, name
    return previous


def _impl(values: np.ndarray):
    if _backend == "compiled" and values.dtype == np.int64:
        return _compiled
    return _pykernels


def count_masked(values: np.ndarray, mask: np.ndarray, pivot) -> tuple[int, int, int]:
    """Return (|B|, ties with pivot, entries above pivot) for B given as a uint8 mask."""
    return _impl(values).count_masked(values, mask, pivot)


def count_indexed(values: np.ndarray, idx: np.ndarray, lo: int, hi: int, pivot) -> tuple[int, int]:
    """Return (ties, above) for B = idx[lo:hi]; ``idx`` must be int64."""
    return _impl(values).count_indexed(values, idx, lo, hi, pivot)


def count_above(values: np.ndarray, pivot) -> int:
    return _impl(values).count_above(values, pivot)


def count_bits(values: np.ndarray, bits: np.ndarray, skip: int, pivot) -> tuple[int, int, int]:
    """Like :func:`count_masked` with B packed MSB-first into uint8 ``bits``, minus ``skip``."""
    return _impl(values).count_bits(values, bits, skip, pivot)
