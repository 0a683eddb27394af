"""Counter-based random streams.

Each stream is Philox4x64-10 keyed by ``(seed, snr_index << 32 | partition)``,
so any partition of any SNR point can be regenerated on its own. Uniforms use
the top 53 bits of each 64-bit word; normals use the polar rejection method.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_INV53 = 2.0**-53


class CounterStream:
    def __init__(self, seed: int, snr_index: int = 0, partition: int = 0):
        if not 0 <= seed <= _MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not (0 <= snr_index < 2**32 and 0 <= partition < 2**32):
            raise ValueError("snr index and partition must fit in 32 bits")
        key = np.array([seed, (snr_index << 32) | partition], dtype=np.uint64)
        self._bits = np.random.Philox(key=key)
        self.key = (seed, snr_index, partition)

    def raw(self, n: int) -> np.ndarray:
        return np.asarray(self._bits.random_raw(n), dtype=np.uint64)

    def uniform(self, n: int) -> np.ndarray:
        """Doubles in ``[0, 1)`` on a 2^-53 grid."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _INV53

    def integers(self, n: int, high: int) -> np.ndarray:
        """Integers in ``[0, high)``; bias is below ``high * 2^-53``."""
        return np.minimum((self.uniform(n) * high).astype(np.int64), high - 1)

    def normal(self, n: int) -> np.ndarray:
        """Standard normals by polar rejection; pairs are consumed in order, leftovers dropped."""
        out = np.empty(n)
        filled = 0
        while filled < n:
            pairs = (n - filled + 1) // 2
            batch = int(pairs * 1.3) + 4
            u = 2.0 * self.uniform(2 * batch).reshape(batch, 2) - 1.0
            s = u[:, 0] * u[:, 0] + u[:, 1] * u[:, 1]
            ok = (s > 0.0) & (s < 1.0)
            u, s = u[ok], s[ok]
            z = (u * np.sqrt(-2.0 * np.log(s) / s)[:, None]).reshape(-1)
            take = min(len(z), n - filled)
            out[filled : filled + take] = z[:take]
            filled += take
        return out

    def complex_normal(self, shape, sigma: float) -> np.ndarray:
        """Complex entries with independent ``N(0, sigma^2)`` real and imaginary parts."""
        count = int(np.prod(shape))
        z = self.normal(2 * count).reshape(count, 2) * sigma
        return (z[:, 0] + 1j * z[:, 1]).reshape(shape)
