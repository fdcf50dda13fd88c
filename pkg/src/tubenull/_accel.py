"""Backend selection for the hot kernels.

The compiled module is used when it imports and the caller's integers fit in
int64; otherwise the numpy/pure-Python versions in ``_pure`` run (with exact
Python ints when needed). Set ``TUBENULL_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pure

try:
    from . import _kernels as _ext
except ImportError:  # extension not built
    _ext = None

if os.environ.get("TUBENULL_PURE"):
    _ext = None

HAVE_EXT = _ext is not None
BACKEND = "cython" if HAVE_EXT else "python"

INT64_SAFE = 2**62


def _fits(*bounds) -> bool:
    return all(abs(int(b)) < INT64_SAFE for b in bounds)


def sum_bound(values, weights) -> int:
    """Upper bound on |sum_pos values[c_pos] * weights[pos]| over all words."""
    vmax = max((abs(int(x)) for x in np.asarray(values, dtype=object).ravel()), default=0)
    return vmax * sum(abs(int(w)) for w in weights)


def _as_array(x, exact: bool):
    return np.array([int(v) for v in np.asarray(x, dtype=object).ravel()],
                    dtype=object if exact else np.int64).reshape(np.shape(x))


def backend(use_ext: bool | None = None):
    if use_ext is None:
        use_ext = HAVE_EXT
    if use_ext and not HAVE_EXT:
        raise RuntimeError("compiled kernels are not available")
    return _ext if use_ext else _pure


def word_sums(values, weights, use_ext=None):
    exact = not _fits(sum_bound(values, weights))
    mod = _pure if exact else backend(use_ext)
    return mod.word_sums(_as_array(values, exact), _as_array(weights, exact))


def pigeonhole_scan(m, n, use_ext=None):
    return backend(use_ext).pigeonhole_scan(int(m), int(n))


def freq_sums(values, weights, symbol, threshold, use_ext=None):
    exact = not _fits(sum_bound(values, weights))
    mod = _pure if exact else backend(use_ext)
    return mod.freq_sums(_as_array(values, exact), _as_array(weights, exact), int(symbol), int(threshold))


def verify_words(values, weights, lo_off, hi_off, starts, slab_lo, slab_hi, use_ext=None):
    b = sum_bound(values, weights)
    exact = not _fits(b + max(map(abs, map(int, lo_off)), default=0) + max(map(abs, map(int, hi_off)), default=0),
                      *slab_lo, *slab_hi)
    mod = _pure if exact else backend(use_ext)
    return mod.verify_words(
        _as_array(values, exact), _as_array(weights, exact), _as_array(lo_off, exact),
        _as_array(hi_off, exact), np.asarray(starts, dtype=np.int64),
        _as_array(slab_lo, exact), _as_array(slab_hi, exact),
    )


def mark_cells(values, weights, lo, side, den, scale, grid, use_ext=None):
    b = sum_bound(values, weights) + max(map(abs, map(int, lo))) + max(map(abs, map(int, side)))
    exact = not _fits(b * int(scale), den)
    mod = _pure if exact else backend(use_ext)
    return mod.mark_cells(_as_array(values, exact), _as_array(weights, exact), _as_array(lo, exact),
                          _as_array(side, exact), int(den), int(scale), grid)
