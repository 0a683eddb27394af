"""Integer tables that let the batch kernels work on natural-order points.

A point is the integer coordinate vector of ``sum_r u^r c_r`` on the Z-basis
``u^r e_j`` where ``e_j`` runs over the absolute integral basis of ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import kernels
from ..exactfield.field import QQ, absolute_integral_basis, flat_coords
from ..exactfield.linalg import solve


def _coordinate_map(field):
    """Function sending an element of ``field`` to its integer Z-basis coordinates."""
    basis = absolute_integral_basis(field)
    n = len(basis)
    cols = [flat_coords(b) for b in basis]
    a = [[cols[j][i] for j in range(n)] for i in range(n)]
    inv_cols = [solve(a, [Fraction(int(r == c)) for r in range(n)]) for c in range(n)]

    def coords(x):
        v = flat_coords(field.coerce(x) if field is not QQ else x)
        out = []
        for r in range(n):
            s = sum(inv_cols[c][r] * v[c] for c in range(n) if v[c])
            if s.denominator != 1:
                raise ValueError(f"{x} is not integral in {getattr(field, 'name', 'Q')}")
            out.append(int(s))
        return out

    return basis, coords


def _structure_constants(field):
    if field is QQ:
        return np.ones((1, 1, 1), dtype=np.int64)
    basis, coords = _coordinate_map(field)
    d = len(basis)
    T = np.zeros((d, d, d), dtype=np.int64)
    for a in range(d):
        for b in range(a, d):
            T[a, b] = T[b, a] = coords(basis[a] * basis[b])
    return T


@dataclass
class IntegerData:
    T: np.ndarray  # (d, d, d) multiplication in O_E
    S: np.ndarray  # (n_r, d, d) sigma^j, column convention
    G: np.ndarray  # (d, d) multiplication by gamma
    T_L: np.ndarray  # multiplication in O_L
    n_r: int
    d: int
    d_L: int
    f_degree: int

    @classmethod
    def from_algebra(cls, algebra, F):
        E, L = algebra.E, algebra.L
        basis, coords = _coordinate_map(E)
        d = len(basis)
        T = np.zeros((d, d, d), dtype=np.int64)
        for a in range(d):
            for b in range(a, d):
                T[a, b] = T[b, a] = coords(basis[a] * basis[b])
        S = np.zeros((algebra.n, d, d), dtype=np.int64)
        for j in range(algebra.n):
            s = algebra.sigma_power(j)
            for b in range(d):
                S[j, :, b] = coords(s(basis[b]))
        G = np.zeros((d, d), dtype=np.int64)
        g = E.coerce(algebra.gamma)
        for b in range(d):
            G[:, b] = coords(g * basis[b])
        T_L = _structure_constants(L)
        f_degree = 1 if F is QQ else F.absolute_degree
        obj = cls(T, S, G, T_L, algebra.n, d, T_L.shape[0], f_degree)
        obj._coords = coords
        return obj

    @property
    def k(self) -> int:
        return self.n_r * self.d

    def point_of(self, element) -> np.ndarray:
        """Integer coordinates of a natural-order element."""
        out = []
        for c in element.coords:
            out.extend(self._coords(c))
        return np.array(out, dtype=np.int64)

    def reduced_norms(self, points, backend=None) -> np.ndarray:
        """``nr`` of each point as integer coordinates on the Z-basis of ``O_L``."""
        points = np.asarray(points)
        coeffs = points.reshape(points.shape[0], self.n_r, self.d)
        out = kernels.reduced_norms(self.T, self.S, self.G, coeffs, backend)
        # index 0 of E's basis is 1, so the L-part sits in the first d_L slots
        if np.any(out[:, self.d_L :] != 0):
            raise ArithmeticError("reduced norm left the centre")
        return out[:, : self.d_L]

    def norms(self, points, backend=None) -> list:
        """``N_{L/Q}(nr(c))`` for each point, as Python ints."""
        nrs = self.reduced_norms(points, backend)
        if not len(nrs):
            return []
        if nrs.dtype == object and all(abs(int(v)) < 2**62 for v in nrs.ravel()):
            nrs = nrs.astype(np.int64)
        return kernels.abs_norms(self.T_L, nrs, backend)

    def det_abs2(self, points, backend=None) -> list:
        """Exact ``|det|^2`` of the block-diagonal embedding of each point.

        Over ``Q`` this is ``N_{L/Q}(nr)^2``; over an imaginary quadratic base
        it is ``|N_{L/Q}(nr)|``.
        """
        norms = self.norms(points, backend)
        if self.f_degree == 1:
            return [v * v for v in norms]
        return [abs(v) for v in norms]
