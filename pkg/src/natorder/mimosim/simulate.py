"""Codeword error rates over a block Rayleigh channel.

For each SNR point the trial range is cut into fixed-size partitions. A
partition draws, in order, the transmitted codeword indices, the channel
matrices and the noise from its own counter stream, so the counts do not
depend on how partitions are scheduled.

SNR is ``E||HX||^2 / E||N||^2``. With ``E_s`` the mean codeword energy
``||X||_F^2`` and ``2 sigma_h^2`` the channel entry variance, the complex noise
variance per entry is ``N0 = 2 sigma_h^2 E_s / (T * SNR)``.
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import kernels
from .channel import DEFAULT_SIGMA_H, channel_sample
from .rng import CounterStream

MAX_CODEBOOK = 4096
MAX_TRIALS = 100_000
Z95 = 1.959963984540054


class SimulationError(ValueError):
    pass


@dataclass
class SimConfig:
    codebook: str
    snr_grid_db: list
    trials_per_point: int
    seed: int = 42
    n_r_antennas: int | None = None
    sigma_h: float = DEFAULT_SIGMA_H
    noise_scale: float = 1.0
    partition_size: int = 1000
    workers: int = 1

    def validate(self) -> None:
        if self.trials_per_point < 1:
            raise SimulationError("trials_per_point must be at least 1")
        if self.trials_per_point > MAX_TRIALS:
            raise SimulationError(
                f"trials_per_point {self.trials_per_point} exceeds the desk limit {MAX_TRIALS}; "
                "split the run over several seeds"
            )
        grid = list(self.snr_grid_db)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise SimulationError("snr_grid_db must be non-empty and strictly increasing")
        if self.partition_size < 1:
            raise SimulationError("partition_size must be positive")
        if self.sigma_h <= 0 or self.noise_scale < 0:
            raise SimulationError("sigma_h must be positive and noise_scale non-negative")

    @classmethod
    def from_dict(cls, doc: dict, base_dir: str = ".") -> "SimConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise SimulationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        doc = dict(doc)
        if not os.path.isabs(doc["codebook"]):
            doc["codebook"] = os.path.normpath(os.path.join(base_dir, doc["codebook"]))
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "SimConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), os.path.dirname(os.path.abspath(path)))


@dataclass
class ErrorRateRow:
    snr_db: float
    trials: int
    errors: int
    cwer: float
    ci95_halfwidth: float


@dataclass
class ErrorRateTable:
    rows: list
    header: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        out = io.StringIO()
        for key, val in self.header.items():
            out.write(f"# {key}: {val}\n")
        out.write("snr_db,trials,errors,cwer,ci95_halfwidth\n")
        for r in self.rows:
            out.write(f"{r.snr_db!r},{r.trials},{r.errors},{r.cwer!r},{r.ci95_halfwidth!r}\n")
        return out.getvalue()

    def write(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())


def wilson_halfwidth(errors: int, trials: int, z: float = Z95) -> float:
    p = errors / trials
    denom = 1 + z * z / trials
    return z / denom * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))


def _partition_errors(X, cfg, snr_index, snr_db, energy, part, count, n_rx, backend):
    n_t, T = X.shape[1], X.shape[2]
    stream = CounterStream(cfg.seed, snr_index, part)
    sent = stream.integers(count, len(X))
    H = channel_sample(stream, n_rx, n_t, cfg.sigma_h, count)
    n0 = 2 * cfg.sigma_h**2 * energy / (T * 10 ** (snr_db / 10))
    N = stream.complex_normal((count, n_rx, T), math.sqrt(n0 / 2) * cfg.noise_scale)
    Y = H @ X[sent] + N
    got = kernels.ml_decode(Y, H, X, backend)
    return int(np.count_nonzero(got != sent))


def simulate(cfg: SimConfig, codebook=None, backend: str | None = None) -> ErrorRateTable:
    """Monte Carlo codeword error rate for each SNR point of ``cfg``.

    ``codebook`` is a stack of matrices; when omitted the CSV named in the
    config is read.
    """
    from ..stlattice.codebook import read_codebook

    cfg.validate()
    meta = {}
    if codebook is None:
        loaded = read_codebook(cfg.codebook)
        X, meta = loaded.matrices, loaded.header
    else:
        X = np.asarray(codebook, dtype=np.complex128)
    if X.ndim != 3 or not len(X):
        raise SimulationError("empty codebook")
    if len(X) > MAX_CODEBOOK:
        raise SimulationError(
            f"codebook has {len(X)} words; exhaustive ML is capped at {MAX_CODEBOOK}. "
            "Use a smaller constellation"
        )
    n_t, T = X.shape[1], X.shape[2]
    if n_t != T:
        raise SimulationError("codewords must be square (T = n_t)")
    n_rx = cfg.n_r_antennas or n_t
    energy = float(np.mean(np.sum(np.abs(X) ** 2, axis=(1, 2))))
    P = cfg.partition_size
    rows = []
    for si, snr in enumerate(cfg.snr_grid_db):
        parts = [(p, min(P, cfg.trials_per_point - p * P)) for p in range(-(-cfg.trials_per_point // P))]

        def run(pc, si=si, snr=snr):
            return _partition_errors(X, cfg, si, snr, energy, pc[0], pc[1], n_rx, backend)

        if cfg.workers > 1:
            with ThreadPoolExecutor(cfg.workers) as pool:
                errs = sum(pool.map(run, parts))
        else:
            errs = sum(run(pc) for pc in parts)
        n = cfg.trials_per_point
        rows.append(ErrorRateRow(float(snr), n, errs, errs / n, wilson_halfwidth(errs, n)))

    header = {
        "codebook": os.path.basename(cfg.codebook),
        "codebook_setup": meta.get("setup", "inline"),
        "codebook_variant": meta.get("variant", "none"),
        "words": len(X),
        "n_t": n_t,
        "n_r_antennas": n_rx,
        "T": T,
        "average_energy": repr(energy),
        "snr_definition": "E||HX||^2/E||N||^2, N0 = 2*sigma_h^2*E_s/(T*SNR)",
        "sigma_h": repr(cfg.sigma_h),
        "noise_scale": repr(cfg.noise_scale),
        "seed": cfg.seed,
        "rng": "Philox4x64-10 key (seed, snr_index<<32|partition); uniform = (raw>>11)*2^-53; polar normals",
        "partition_size": P,
        "config": json.dumps({k: v for k, v in asdict(cfg).items() if k not in ("codebook", "workers")}, sort_keys=True),
    }
    return ErrorRateTable(rows, header)


def loglog_slope(table: ErrorRateTable, i: int = -2, j: int = -1) -> float:
    """``d log10(cwer) / d (snr_db / 10)`` between two rows; ``nan`` if either rate is zero."""
    a, b = table.rows[i], table.rows[j]
    if a.cwer <= 0 or b.cwer <= 0:
        return float("nan")
    return (math.log10(b.cwer) - math.log10(a.cwer)) / ((b.snr_db - a.snr_db) / 10)


def monotone_within_ci(table: ErrorRateTable) -> bool:
    """cwer never rises by more than the two 95% half-widths combined."""
    rows = table.rows
    return all(b.cwer <= a.cwer + a.ci95_halfwidth + b.ci95_halfwidth for a, b in zip(rows, rows[1:]))
