"""Finite codebooks carved from a lattice basis, and their CSV form."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeBasis

MAX_CODEBOOK = 1 << 20


def parse_constellation(text: str) -> tuple:
    """``int:m`` gives ``-m..m``; ``qam4`` is ``{-1, 1}``; ``qam16`` is ``{-3, -1, 1, 3}``."""
    text = text.strip().lower()
    if text == "qam4":
        return (-1, 1)
    if text == "qam16":
        return (-3, -1, 1, 3)
    if text.startswith("int:"):
        m = int(text[4:])
        if m < 1:
            raise ValueError("integer constellation needs m >= 1")
        return tuple(range(-m, m + 1))
    raise ValueError(f"unknown constellation {text!r} (use int:m, qam4 or qam16)")


def difference_set(points) -> tuple:
    return tuple(sorted({a - b for a in points for b in points}))


@dataclass
class Codebook:
    setup_id: str
    mode: str
    constellation: tuple
    coords: np.ndarray  # (M, k) integers
    matrices: np.ndarray  # (M, n, n) complex
    error_bound: float
    basis: LatticeBasis | None = field(default=None, repr=False)
    variant: str = ""

    def __len__(self):
        return len(self.coords)

    @property
    def average_energy(self) -> float:
        return float(np.mean(np.sum(np.abs(self.matrices) ** 2, axis=(1, 2))))

    def exact_element(self, index: int):
        if self.basis is None or not self.basis.elements:
            raise ValueError("codebook carries no exact elements")
        acc = None
        for b, c in zip(self.basis.elements, self.coords[index]):
            term = b * int(c)
            acc = term if acc is None else acc + term
        return acc


def points_to_matrices(basis: LatticeBasis, coords) -> np.ndarray:
    coords = np.asarray(coords)
    return np.tensordot(coords.astype(np.float64), basis.mids, axes=(1, 0))


def build_codebook(basis: LatticeBasis, constellation, limit: int = MAX_CODEBOOK) -> Codebook:
    """All ``|C|^k`` combinations ``sum_i c_i B_i`` with ``c_i`` in the constellation."""
    if isinstance(constellation, str):
        constellation = parse_constellation(constellation)
    constellation = tuple(constellation)
    size = len(constellation) ** basis.k
    if size > limit:
        raise ValueError(f"codebook would have {size} words (limit {limit}); use a smaller constellation")
    coords = np.array(list(itertools.product(constellation, repeat=basis.k)), dtype=np.int64)
    mats = points_to_matrices(basis, coords)
    # float error: entry roundoff of the basis plus one rounding per accumulated term
    span = float(np.abs(coords).sum(axis=1).max())
    err = span * (float(basis.rads.max()) + np.finfo(float).eps * float(np.abs(basis.mids).max()) * basis.k)
    return Codebook(basis.setup_id, basis.mode, constellation, coords, mats, err, basis)


def repeat_first_row(matrices) -> np.ndarray:
    """Rank-one baseline: every row replaced by the first row."""
    m = np.asarray(matrices)
    return np.repeat(m[:, :1, :], m.shape[1], axis=1)


# -- CSV --------------------------------------------------------------------------
def _fmt(x: float) -> str:
    return repr(float(x))


def codebook_csv(cb: Codebook, variant: str | None = None, extra_header: dict | None = None) -> str:
    """Rows ``index, x_0..x_{k-1}, re/im of each entry`` (row-major); ``#`` lines carry metadata."""
    mats = cb.matrices
    if variant == "repeat-row":
        mats = repeat_first_row(mats)
    elif variant:
        raise ValueError(f"unknown variant {variant!r}")
    M, n, _ = mats.shape
    k = cb.coords.shape[1]
    energy = float(np.mean(np.sum(np.abs(mats) ** 2, axis=(1, 2))))
    out = io.StringIO()
    header = {
        "setup": cb.setup_id,
        "mode": cb.mode,
        "variant": variant or "none",
        "constellation": " ".join(str(c) for c in cb.constellation),
        "words": M,
        "n": n,
        "k": k,
        "average_energy": _fmt(energy),
        "entry_error_bound": _fmt(cb.error_bound),
    }
    header.update(extra_header or {})
    for key, val in header.items():
        out.write(f"# {key}: {val}\n")
    w = csv.writer(out, lineterminator="\n")
    cols = ["index"] + [f"x{i}" for i in range(k)]
    for r in range(n):
        for c in range(n):
            cols += [f"re_{r}{c}", f"im_{r}{c}"]
    w.writerow(cols)
    for idx in range(M):
        row = [str(idx)] + [str(int(v)) for v in cb.coords[idx]]
        for z in mats[idx].reshape(-1):
            row += [_fmt(z.real), _fmt(z.imag)]
        w.writerow(row)
    return out.getvalue()


def write_codebook(cb: Codebook, path, variant: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(codebook_csv(cb, variant))


@dataclass
class LoadedCodebook:
    header: dict
    coords: np.ndarray
    matrices: np.ndarray

    @property
    def average_energy(self) -> float:
        return float(np.mean(np.sum(np.abs(self.matrices) ** 2, axis=(1, 2))))


def read_codebook(path) -> LoadedCodebook:
    header = {}
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            header[key.strip()] = val.strip()
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    cols, data = rows[0], rows[1:]
    if not data:
        raise ValueError(f"{path}: empty codebook")
    k = sum(1 for c in cols if c.startswith("x"))
    entries = (len(cols) - 1 - k) // 2
    n = int(round(entries**0.5))
    if n * n != entries:
        raise ValueError(f"{path}: matrix entries do not form a square")
    coords = np.array([[int(v) for v in r[1 : 1 + k]] for r in data], dtype=np.int64)
    vals = np.array([[float(v) for v in r[1 + k :]] for r in data])
    mats = (vals[:, 0::2] + 1j * vals[:, 1::2]).reshape(len(data), n, n)
    return LoadedCodebook(header, coords, mats)
