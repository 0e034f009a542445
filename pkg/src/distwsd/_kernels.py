"""Numeric kernels for the similarity hot path.

Two implementations of each kernel: a numba ``@njit`` version and a pure
numpy one.  The numba path is used when numba imports cleanly and the
environment variable ``DISTWSD_PURE_NUMPY`` is unset/empty; setting it to
any non-empty value forces the numpy path.  Both paths agree to within
normal float64 rounding (the numba loops accumulate sequentially, numpy
uses pairwise summation), see benchmarks/bench_kernels.py.

Feature ids per word are unique and sorted ascending; ``info`` arrays are
aligned with the id arrays.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_wanted() -> bool:
    return not os.environ.get("DISTWSD_PURE_NUMPY")


# -- numpy reference implementations --------------------------------------


def shared_information_numpy(ids_a: np.ndarray, info_a: np.ndarray, ids_b: np.ndarray) -> float:
    """Sum of info_a over ids present in both sorted unique id arrays."""
    if ids_a.size == 0 or ids_b.size == 0:
        return 0.0
    mask = np.isin(ids_a, ids_b, assume_unique=True)
    return float(info_a[mask].sum())


def cosine_many_numpy(matrix: np.ndarray, norms: np.ndarray, query: np.ndarray, qnorm: float) -> np.ndarray:
    """Cosine of ``query`` against every row of ``matrix``."""
    return (matrix @ query) / (norms * qnorm)


# -- numba implementations -------------------------------------------------


def _shared_information_loop(ids_a, info_a, ids_b):
    total = 0.0
    i = 0
    j = 0
    na = ids_a.shape[0]
    nb = ids_b.shape[0]
    while i < na and j < nb:
        a = ids_a[i]
        b = ids_b[j]
        if a == b:
            total += info_a[i]
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return total


def _cosine_many_loop(matrix, norms, query, qnorm):
    n, dim = matrix.shape
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        dot = 0.0
        for d in range(dim):
            dot += matrix[i, d] * query[d]
        out[i] = dot / (norms[i] * qnorm)
    return out


NUMBA_ENABLED = False
if _numba_wanted():
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass
    else:
        shared_information = njit(cache=True, nogil=True)(_shared_information_loop)
        cosine_many = njit(cache=True, nogil=True)(_cosine_many_loop)
        NUMBA_ENABLED = True

if not NUMBA_ENABLED:
    shared_information = shared_information_numpy
    cosine_many = cosine_many_numpy


def warmup() -> None:
    """Trigger JIT compilation so timing-sensitive callers pay it up front."""
    ids = np.array([1, 2, 3], dtype=np.int64)
    info = np.array([0.1, 0.2, 0.3], dtype=np.float64)
    shared_information(ids, info, ids)
    m = np.ones((2, 3), dtype=np.float64)
    cosine_many(m, np.sqrt((m * m).sum(axis=1)), np.ones(3), np.sqrt(3.0))
