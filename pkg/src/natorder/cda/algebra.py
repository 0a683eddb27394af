"""Cyclic algebras ``(E/L, sigma, gamma)`` and their natural orders.

An element is stored as ``(c_0, ..., c_{n-1})`` meaning
``c_0 + u c_1 + ... + u^{n-1} c_{n-1}`` with ``x u = u sigma(x)`` for ``x`` in
``E`` and ``u^n = gamma``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ..exactfield.field import (
    QQ,
    FieldElement,
    is_integral,
    relative_integral_basis,
    relative_trace,
)
from ..exactfield.linalg import det


class AlgebraError(ValueError):
    pass


class CyclicAlgebra:
    def __init__(self, E, L, sigma, n_r: int, gamma, name: str = ""):
        if sigma.field is not E:
            raise AlgebraError("sigma must act on E")
        if not sigma.fixes(L):
            raise AlgebraError("sigma must fix L pointwise")
        if sigma.order != n_r or E.relative_degree(L) != n_r:
            raise AlgebraError(f"sigma must generate a cyclic group of order {n_r} = [E:L]")
        gamma = L.coerce(gamma)
        if gamma == 0:
            raise AlgebraError("gamma must be nonzero")
        if not is_integral(gamma, L):
            raise AlgebraError("gamma is not integral; the natural order would not be closed")
        self.E, self.L, self.sigma, self.n, self.name = E, L, sigma, n_r, name
        self.gamma = gamma
        self._gamma_E = E.coerce(gamma)
        self._sigma_powers = [sigma.power(j) for j in range(n_r)]

    def sigma_power(self, j: int):
        return self._sigma_powers[j % self.n]

    def element(self, coords: Sequence) -> "AlgebraElement":
        coords = tuple(self.E.coerce(c) for c in coords)
        if len(coords) != self.n:
            raise AlgebraError(f"need {self.n} coordinates, got {len(coords)}")
        return AlgebraElement(self, coords)

    def scalar(self, x) -> "AlgebraElement":
        z = self.E.zero
        return AlgebraElement(self, (self.E.coerce(x),) + (z,) * (self.n - 1))

    @property
    def one(self):
        return self.scalar(1)

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def u(self):
        if self.n == 1:
            return self.scalar(self.gamma)
        coords = [self.E.zero] * self.n
        coords[1] = self.E.one
        return AlgebraElement(self, tuple(coords))

    def u_power(self, r: int, x=1) -> "AlgebraElement":
        """``u^r x`` for ``0 <= r < n``."""
        coords = [self.E.zero] * self.n
        coords[r] = self.E.coerce(x)
        return AlgebraElement(self, tuple(coords))

    def __repr__(self):
        return f"CyclicAlgebra({self.name or self.E.name}, index {self.n}, gamma={self.gamma})"


@dataclass(frozen=True)
class AlgebraElement:
    algebra: CyclicAlgebra
    coords: tuple

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise AlgebraError("elements of different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        A = self.algebra
        if not isinstance(other, AlgebraElement):
            # right multiplication by a field element scales every coordinate
            x = A.E.coerce(other)
            return AlgebraElement(A, tuple(c * x for c in self.coords))
        self._check(other)
        n = A.n
        out = [A.E.zero] * n
        for i, a in enumerate(self.coords):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coords):
                if b.is_zero():
                    continue
                term = A.sigma_power(j)(a) * b
                k = i + j
                if k >= n:
                    k -= n
                    term = term * A._gamma_E
                out[k] = out[k] + term
        return AlgebraElement(A, tuple(out))

    def __rmul__(self, other):
        # left multiplication by a field element x: x u^i c = u^i sigma^i(x) c
        A = self.algebra
        x = A.E.coerce(other)
        return AlgebraElement(A, tuple(A.sigma_power(i)(x) * c for i, c in enumerate(self.coords)))

    def __pow__(self, k: int):
        result = self.algebra.one
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if c.is_zero():
                continue
            s = str(c)
            parts.append(s if i == 0 else f"u^{i}*({s})" if i > 1 else f"u*({s})")
        return " + ".join(parts) if parts else "0"


def left_representation(c: AlgebraElement) -> list:
    """Matrix of ``x -> c x`` on coordinate columns.

    Column ``j`` holds ``sigma^j(c_i)`` in row ``(i + j) mod n``, multiplied
    by ``gamma`` when ``i + j >= n``.
    """
    A = c.algebra
    n = A.n
    m = [[A.E.zero] * n for _ in range(n)]
    for j in range(n):
        s = A.sigma_power(j)
        for i, ci in enumerate(c.coords):
            v = s(ci)
            row = i + j
            if row >= n:
                row -= n
                v = v * A._gamma_E
            m[row][j] = v
    return m


def reduced_norm(c: AlgebraElement):
    """``det rho(c)``, returned as an element of ``L``."""
    d = det(left_representation(c))
    return c.algebra.E.coerce(d).descend(c.algebra.L)


def reduced_trace(c: AlgebraElement):
    A = c.algebra
    t = A.E.zero
    for j in range(A.n):
        t = t + A.sigma_power(j)(c.coords[0])
    return t.descend(A.L)


def build_algebra(setup) -> CyclicAlgebra:
    return CyclicAlgebra(setup.E, setup.L, setup.sigma, setup.n_r, setup.gamma, setup.id)


def natural_order_basis(algebra: CyclicAlgebra, over=None) -> list:
    """``u^r e_j`` with ``e_j`` an ``O_over``-basis of ``O_E`` (default ``over = L``)."""
    over = algebra.L if over is None else over
    basis = relative_integral_basis(algebra.E, over)
    return [algebra.u_power(r, e) for r in range(algebra.n) for e in basis]


def random_order_element(algebra: CyclicAlgebra, rng: random.Random, bound: int = 3, over=None):
    """Integer combination of the natural-order Z-basis with coordinates in ``[-bound, bound]``."""
    over = QQ if over is None else over
    basis = natural_order_basis(algebra, over)
    acc = algebra.zero
    for b in basis:
        k = rng.randint(-bound, bound)
        if k:
            acc = acc + b * k
    return acc


def trace_gram(basis: Sequence[AlgebraElement], down_to=None) -> list:
    """``[Tr_{L/down_to}(trd(x_a x_b))]`` for the given basis."""
    A = basis[0].algebra
    down_to = A.L if down_to is None else down_to
    n = len(basis)
    g = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            t = reduced_trace(basis[a] * basis[b])
            if down_to is not A.L:
                t = relative_trace(t, down_to)
            g[a][b] = g[b][a] = t
    return g


def is_in_ring_of_integers(x, field) -> bool:
    if not isinstance(x, FieldElement):
        return x.denominator == 1
    return is_integral(x, field)
