"""Backend selection for the hot loops.

The compiled extension ``natorder._kernels`` is used when it imports and
``NATORDER_PURE_PYTHON`` is unset; otherwise the numpy fallback runs. Both
produce identical integer results. Overflowing int64 rows from the compiled
path are recomputed with Python ints.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

from . import _fallback

_compiled = None
if os.environ.get("NATORDER_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def _perms(n: int):
    perms, signs = [], []
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        perms.append(p)
        signs.append(-1 if inv % 2 else 1)
    return np.array(perms, dtype=np.int32), np.array(signs, dtype=np.int64)


def reduced_norms(T, S, G, coeffs, backend: str | None = None) -> np.ndarray:
    """Z-coordinates of ``nr(c)`` for a batch, as an ``(N, d)`` array.

    The array is int64 unless some row needed arbitrary precision, in which
    case it holds Python ints.
    """
    backend = backend or BACKEND
    coeffs = np.asarray(coeffs)
    if coeffs.shape[0] == 0:
        return np.zeros((0, coeffs.shape[2]), dtype=np.int64)
    n_r = coeffs.shape[1]
    if backend == "compiled" and _compiled is not None and n_r <= 4 and coeffs.dtype != object:
        perms, signs = _perms(n_r)
        out, flags = _compiled.reduced_norms(T, S, G, coeffs, perms, signs)
        bad = np.nonzero(flags)[0]
        if len(bad):
            out = out.astype(object)
            out[bad] = _fallback.reduced_norms(T, S, G, coeffs[bad], exact_objects=True)
        return out
    return np.asarray(_fallback.reduced_norms(T, S, G, coeffs))


def abs_norms(T, xs, backend: str | None = None):
    backend = backend or BACKEND
    xs = np.asarray(xs)
    if xs.shape[0] == 0:
        return []
    if backend == "compiled" and _compiled is not None and xs.dtype != object:
        out, flags = _compiled.abs_norms(T, xs.astype(np.int64))
        vals = out.tolist()
        bad = np.nonzero(flags)[0]
        if len(bad):
            for k, v in zip(bad, _fallback.abs_norms(T, xs[bad].astype(object))):
                vals[k] = v
        return vals
    return _fallback.abs_norms(T, xs)


def ml_decode(Y, H, X, backend: str | None = None):
    backend = backend or BACKEND
    X = np.asarray(X)
    if X.shape[0] == 0:
        raise ValueError("empty codebook")
    if backend == "compiled" and _compiled is not None:
        return _compiled.ml_decode(Y, H, X)
    return _fallback.ml_decode(Y, H, X)


def abs_det2(mats):
    return _fallback.abs_det2(mats)
