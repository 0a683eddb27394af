"""Block Rayleigh channel and exhaustive ML detection."""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from .rng import CounterStream

DEFAULT_SIGMA_H = 1 / math.sqrt(2)


def channel_sample(stream: CounterStream, n_rx: int, n_tx: int, sigma_h: float = DEFAULT_SIGMA_H, count: int | None = None):
    """``H`` with i.i.d. complex Gaussian entries; a stack of ``count`` draws when given."""
    if n_rx < 1 or n_tx < 1:
        raise ValueError("antenna counts must be positive")
    shape = (n_rx, n_tx) if count is None else (count, n_rx, n_tx)
    return stream.complex_normal(shape, sigma_h)


def ml_decode(Y, H, codebook, backend: str | None = None):
    """Index of ``argmin ||Y - H X||_F^2`` over the codebook; ties go to the lowest index.

    ``Y`` and ``H`` may be single matrices or stacks over trials.
    """
    X = np.asarray(codebook, dtype=np.complex128)
    if X.ndim != 3 or not len(X):
        raise ValueError("empty codebook")
    Y = np.asarray(Y, dtype=np.complex128)
    H = np.asarray(H, dtype=np.complex128)
    single = Y.ndim == 2
    if single:
        Y, H = Y[None], H[None]
    if H.shape[2] != X.shape[1] or Y.shape[2] != X.shape[2] or Y.shape[1] != H.shape[1]:
        raise ValueError(f"dimension mismatch: Y {Y.shape}, H {H.shape}, X {X.shape}")
    out = kernels.ml_decode(Y, H, X, backend)
    return int(out[0]) if single else out
