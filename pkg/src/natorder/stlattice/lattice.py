"""Lattice generator matrices from natural orders, Gram matrices and figures of merit."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from flint import arb, arb_mat

from ..cda.algebra import build_algebra, left_representation, natural_order_basis
from ..exactfield.field import QQ
from .integer import IntegerData
from .numeric import DEFAULT_PRECISION, ComplexMatrix, Embedding, working_precision

MODES = ("symmetric", "block")


class LatticeError(ValueError):
    pass


@dataclass
class LatticeBasis:
    matrices: list
    k: int
    n: int
    mode: str
    setup_id: str = ""
    elements: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    rank_over_base: int | None = None
    setup: object = field(default=None, repr=False)
    embedding: Embedding | None = field(default=None, repr=False)
    _integer: IntegerData | None = field(default=None, repr=False)

    @property
    def precision(self) -> int:
        return self.matrices[0].precision

    @property
    def mids(self) -> np.ndarray:
        return np.stack([m.mid for m in self.matrices])

    @property
    def rads(self) -> np.ndarray:
        return np.stack([m.rad for m in self.matrices])

    @property
    def integer_data(self) -> IntegerData | None:
        if self._integer is None and self.setup is not None:
            self._integer = IntegerData.from_algebra(build_algebra(self.setup), self.setup.F)
        return self._integer

    @property
    def exact_available(self) -> bool:
        """True when ``|det|^2`` of every lattice point is a norm we can compute exactly."""
        return self.setup is not None and (self.mode == "block" or self.setup.L is self.setup.F)


def _blocks(setup, emb, rep):
    blocks = [emb.matrix(rep)]
    tau_i = setup.tau
    for _ in range(1, setup.n):
        blocks.append(emb.matrix([[tau_i(x) for x in row] for row in rep]))
        tau_i = tau_i.compose(setup.tau)
    return blocks


def embedded_representation(setup, element, mode: str, emb: Embedding) -> ComplexMatrix:
    rep = left_representation(element)
    if mode == "symmetric":
        return emb.matrix(rep)
    return ComplexMatrix.block_diagonal(_blocks(setup, emb, rep))


def lattice_basis(setup, mode: str = "symmetric", precision: int = DEFAULT_PRECISION) -> LatticeBasis:
    """Embedded images of the natural order's Z-basis ``u^r e_j``.

    ``symmetric`` gives ``n_r x n_r`` matrices and needs ``L = F``; otherwise
    the embedded order is not discrete. ``block`` gives
    ``diag(rho(b), tau rho(b), ...)`` of size ``n_t``.
    """
    if mode not in MODES:
        raise LatticeError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    flags = []
    if mode == "block" and setup.n == 1:
        flags.append("block mode with a single block is the symmetric lattice")
        mode = "symmetric"
    if mode == "symmetric" and setup.L is not setup.F:
        raise LatticeError(
            f"{setup.id}: the centre is larger than the base field, so the symmetric "
            "embedding is not discrete; use block mode"
        )
    algebra = build_algebra(setup)
    elements = natural_order_basis(algebra, QQ)
    emb = Embedding(setup, precision)
    mats = [embedded_representation(setup, b, mode, emb) for b in elements]
    size = mats[0].rows
    k = len(mats)
    if k > 2 * size * size:
        raise LatticeError(f"rank {k} exceeds the real dimension {2 * size * size}")
    f_deg = 1 if setup.F is QQ else setup.F.absolute_degree
    return LatticeBasis(
        matrices=mats,
        k=k,
        n=size,
        mode=mode,
        setup_id=setup.id,
        elements=elements,
        flags=flags,
        rank_over_base=k // f_deg,
        setup=setup,
        embedding=emb,
    )


def basis_from_matrices(matrices, precision: int = DEFAULT_PRECISION) -> LatticeBasis:
    """Wrap plain complex matrices (no exact data attached)."""
    mats = [m if isinstance(m, ComplexMatrix) else ComplexMatrix.from_complex(m, precision) for m in matrices]
    if not mats:
        raise LatticeError("empty basis")
    return LatticeBasis(matrices=mats, k=len(mats), n=mats[0].rows, mode="explicit")


# -- Gram matrix and volume -----------------------------------------------------
@dataclass
class GramVolume:
    gram: np.ndarray
    gram_balls: arb_mat
    det: arb
    volume: arb
    min_eigenvalue: float
    eigen_tolerance: float

    @property
    def nu(self) -> float:
        return float(self.volume)

    @property
    def positive_definite(self) -> bool:
        return bool(self.min_eigenvalue > self.eigen_tolerance)

    def volume_consistent(self) -> bool:
        """``nu^2`` and ``det(gram)`` agree as balls."""
        with working_precision(256):
            return (self.volume * self.volume).overlaps(self.det)


def gram_and_volume(basis: LatticeBasis) -> GramVolume:
    """``G_ij = Re Tr(B_i B_j^H)`` in ball arithmetic, and ``nu = sqrt(det G)``."""
    if not basis.matrices:
        raise LatticeError("empty basis")
    prec = basis.precision
    k = basis.k
    with working_precision(prec):
        vecs = [[(e.real, e.imag) for e in m.entries()] for m in basis.matrices]
        g = arb_mat(k, k)
        for a in range(k):
            for b in range(a, k):
                s = arb(0)
                for (ra, ia), (rb, ib) in zip(vecs[a], vecs[b]):
                    s += ra * rb + ia * ib
                g[a, b] = s
                g[b, a] = s
        d = g.det()
        if d.contains(0) or d < 0:
            raise LatticeError(f"Gram matrix is numerically singular (det {d}); the basis is dependent")
        vol = d.sqrt()
        mid = np.array([[float(g[a, b]) for b in range(k)] for a in range(k)])
        rad = max(float(g[a, b].rad()) for a in range(k) for b in range(k))
    eig = float(np.linalg.eigvalsh(mid).min())
    # Weyl: eigenvalues move by at most the spectral norm of the perturbation
    tol = k * (rad + np.finfo(float).eps * float(np.abs(mid).max())) * 4
    return GramVolume(mid, g, d, vol, eig, tol)


# -- normalized figures of merit ----------------------------------------------
@dataclass
class LatticeMetrics:
    gram: np.ndarray | None
    nu: float
    delta_min: float
    delta: float
    mu: float
    k: int
    n: int
    delta_min_exact: object = None
    identity_error: float = 0.0
    volume_ratio: float | None = None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "nu": self.nu,
            "delta_min": self.delta_min,
            "delta_min_exact": None if self.delta_min_exact is None else str(self.delta_min_exact),
            "delta": self.delta,
            "mu": self.mu,
            "identity_relative_error": self.identity_error,
            "volume_ratio": self.volume_ratio,
        }


def normalized_metrics(delta_min, nu, k: int, n: int, gram=None, exact=None, tol: float = 1e-12) -> LatticeMetrics:
    """``delta = Delta / nu^(n/k)`` and ``mu = Delta^(k/n) / nu``; checks ``delta = mu^(n/k)``."""
    nu = float(nu)
    if not nu > 1e-300:
        raise LatticeError("lattice volume is zero")
    delta_min = float(delta_min)
    with working_precision(128):
        D, V = arb(delta_min), arb(nu)
        delta = D / V ** (arb(n) / k)
        mu = D ** (arb(k) / n) / V
        back = mu ** (arb(n) / k)
        err = float(abs(back - delta) / delta) if delta_min > 0 else 0.0
    if err > tol:
        raise ArithmeticError(f"delta and mu disagree: relative error {err:.3e}")
    return LatticeMetrics(gram, nu, delta_min, float(delta), float(mu), k, n, exact, err)
