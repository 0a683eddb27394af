"""Exhaustive minimum-determinant search over lattice points.

By linearity the difference of two codewords is again a lattice point whose
coordinates lie in the constellation's difference set, so the search runs over
those points directly instead of over codeword pairs.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .codebook import Codebook, difference_set, parse_constellation
from .lattice import LatticeBasis
from .numeric import abs_squared, combine, working_precision

DESK_LIMIT = 5_000_000


@dataclass
class MinDetResult:
    delta_min: float
    exact: int | None
    argmin: tuple
    points: int
    certified: bool
    search: str
    float_at_argmin: float
    max_relative_gap: float | None
    sampled: bool = False
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "delta_min": self.delta_min,
            "exact": None if self.exact is None else str(self.exact),
            "certified": self.certified,
            "argmin": list(self.argmin),
            "points": self.points,
            "search": self.search,
            "float_at_argmin": self.float_at_argmin,
            "max_relative_gap": self.max_relative_gap,
            "sampled": self.sampled,
            "seconds": round(self.seconds, 3),
        }


def _digits(idx: np.ndarray, values: np.ndarray, k: int) -> np.ndarray:
    base = len(values)
    out = np.empty((len(idx), k), dtype=np.int64)
    rest = idx.copy()
    for pos in range(k - 1, -1, -1):
        out[:, pos] = values[rest % base]
        rest //= base
    return out


def _scan(basis: LatticeBasis, pts: np.ndarray, exact: bool, backend):
    pts = pts[np.any(pts != 0, axis=1)] if len(pts) else pts
    if not len(pts):
        return None
    mats = np.tensordot(pts.astype(np.float64), basis.mids, axes=(1, 0))
    fl = np.abs(np.linalg.det(mats)) ** 2
    if exact:
        ex = basis.integer_data.det_abs2(pts, backend)
        ex_arr = np.array([float(v) for v in ex])
        gap = float(np.max(np.abs(fl - ex_arr) / np.maximum(ex_arr, 1.0)))
        low = min(ex)
        j = min((t for t, v in enumerate(ex) if v == low), key=lambda t: _tie_key(pts[t]))
        return (ex[j], _tie_key(pts[j]), tuple(int(v) for v in pts[j]), float(fl[j]), gap, len(pts))
    j = int(np.argmin(fl))
    return (float(fl[j]), _tie_key(pts[j]), tuple(int(v) for v in pts[j]), float(fl[j]), None, len(pts))


def _tie_key(p):
    # among equal minima prefer the shortest point, then the lexicographically largest
    return (int(np.abs(p).sum()), tuple(-int(v) for v in p))


def min_determinant(
    target,
    bound: int | None = None,
    constellation=None,
    limit: int = DESK_LIMIT,
    sample: int | None = None,
    seed: int = 0,
    workers: int = 1,
    chunk: int = 1 << 15,
    exact: bool = True,
    backend: str | None = None,
) -> MinDetResult:
    """Minimum ``|det X|^2`` over nonzero lattice points.

    ``target`` is a :class:`LatticeBasis` or a :class:`Codebook`. Points have
    coordinates in ``-bound..bound`` or in the difference set of a
    constellation. With exact data attached the minimum is the exact norm.
    ``sample`` draws that many points at random, plus the basis vectors,
    instead of enumerating; the result is then an upper bound only.
    """
    t0 = time.perf_counter()
    if isinstance(target, Codebook):
        if target.basis is None:
            raise ValueError("codebook has no lattice basis; use min_det_matrices")
        basis = target.basis
        constellation = constellation or target.constellation
    else:
        basis = target
    if constellation is not None:
        if isinstance(constellation, str):
            constellation = parse_constellation(constellation)
        values = difference_set(constellation)
        label = f"differences of {{{', '.join(map(str, constellation))}}}"
    elif bound is not None:
        if bound < 1:
            raise ValueError("bound must be at least 1")
        values = tuple(range(-bound, bound + 1))
        label = f"coordinates in -{bound}..{bound}"
    else:
        raise ValueError("give a coordinate bound or a constellation")
    values = np.array(values, dtype=np.int64)
    k = basis.k
    total = len(values) ** k
    use_exact = exact and basis.exact_available
    if sample is None and total - 1 > limit:
        raise ValueError(
            f"{total - 1} lattice points exceed the desk limit {limit}; "
            "lower the bound or pass a sample size"
        )

    if sample is not None:
        rng = np.random.Generator(np.random.Philox(seed))
        pts = values[rng.integers(0, len(values), size=(sample, k))]
        # the basis vectors themselves are always probed
        pts = np.vstack([np.eye(k, dtype=np.int64), pts])
        sample = len(pts)
        parts = [(pts[s : s + chunk], s) for s in range(0, sample, chunk)]
    else:
        bounds = list(range(0, total, chunk))
        parts = [(None, s) for s in bounds]

    def work(part):
        pts, start = part
        if pts is None:
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            pts = _digits(idx, values, k)
        return _scan(basis, pts, use_exact, backend)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(work, parts))
    else:
        results = [work(p) for p in parts]
    results = [r for r in results if r is not None]
    if not results:
        raise ValueError("no nonzero lattice points in the search space")
    best = min(results, key=lambda r: (r[0], r[1]))
    gaps = [r[4] for r in results if r[4] is not None]
    count = sum(r[5] for r in results)
    ex = best[0] if use_exact else None
    return MinDetResult(
        delta_min=float(best[0]),
        exact=ex,
        argmin=best[2],
        points=count,
        certified=use_exact and sample is None,
        search=label + (f", {sample} samples (seed {seed})" if sample is not None else ""),
        float_at_argmin=best[3],
        max_relative_gap=max(gaps) if gaps else None,
        sampled=sample is not None,
        seconds=time.perf_counter() - t0,
    )


def min_det_matrices(matrices, differences: bool = False) -> float:
    """Minimum ``|det|^2`` over the given nonzero matrices (or their pairwise differences)."""
    m = np.asarray(matrices, dtype=np.complex128)
    if not len(m):
        raise ValueError("empty codebook")
    if differences:
        i, j = np.triu_indices(len(m), 1)
        m = m[i] - m[j]
    m = m[np.any(m != 0, axis=(1, 2))]
    if not len(m):
        raise ValueError("no nonzero points")
    return float(np.min(np.abs(np.linalg.det(m)) ** 2))


@dataclass
class DetCheck:
    point: tuple
    exact: int
    ball: object
    contained: bool


def certify_points(basis: LatticeBasis, points) -> list:
    """Ball ``|det|^2`` of each embedded point against its exact norm."""
    if not basis.exact_available:
        raise ValueError("exact |det|^2 is only available for block lattices or when L = F")
    points = np.asarray(points, dtype=np.int64)
    exact = basis.integer_data.det_abs2(points)
    out = []
    with working_precision(basis.precision):
        for p, e in zip(points, exact):
            ball = abs_squared(combine(p, basis.matrices, basis.precision).det())
            out.append(DetCheck(tuple(int(v) for v in p), e, ball, ball.contains(e)))
    return out
