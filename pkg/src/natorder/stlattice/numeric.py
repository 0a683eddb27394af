"""Complex embeddings of tower fields and ball-arithmetic matrices.

Every generator is sent to one root of its minimal polynomial, computed as an
``acb`` ball at the working precision. The root is chosen as the one nearest
the catalog's decimal approximation, and the choice is rejected if the balls
of distinct roots overlap or the approximation does not single one out.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
from flint import acb, acb_mat, acb_poly, arb, ctx

from ..exactfield.field import QQ, FieldElement

DEFAULT_PRECISION = 128


class EmbeddingError(ArithmeticError):
    pass


@contextmanager
def working_precision(bits: int):
    old = ctx.prec
    ctx.prec = bits
    try:
        yield
    finally:
        ctx.prec = old


def _rational_ball(q) -> acb:
    q = Fraction(q)
    return acb(arb(q.numerator) / q.denominator)


def _float_upper(x: arb) -> float:
    # float() rounds to nearest; nudge up so the result stays an upper bound
    v = float(x)
    return math.nextafter(v, math.inf) if v > 0 else 0.0


class Embedding:
    """Fixed embedding of every field in a setup's tower into ``C``."""

    def __init__(self, setup, precision: int = DEFAULT_PRECISION):
        self.setup_id = setup.id
        self.precision = precision
        self._roots = {}
        self.choices = {}
        chain = [f for f in setup.E.chain() if f is not QQ]
        with working_precision(precision):
            for field in reversed(chain):
                self._pin_root(field, setup.embeddings)

    def _pin_root(self, field, approximations):
        name = field.generator_name
        if name not in approximations:
            raise EmbeddingError(f"no embedding declared for generator {name}")
        re, im = approximations[name]
        target = acb(arb(re), arb(im))
        coeffs = [self._value(c) for c in field.min_poly]
        try:
            roots = acb_poly(coeffs).roots(tol=arb(2) ** (-(self.precision - 8)), maxprec=4 * self.precision)
        except ValueError as exc:
            raise EmbeddingError(f"precision {self.precision} too low to isolate the roots for {name}") from exc
        for a in range(len(roots)):
            for b in range(a + 1, len(roots)):
                if roots[a].overlaps(roots[b]):
                    raise EmbeddingError(
                        f"precision {self.precision} too low to separate the roots for {name}"
                    )
        dists = [(r - target).abs_upper() for r in roots]
        lowers = [(r - target).abs_lower() for r in roots]
        best = min(range(len(roots)), key=lambda j: float(dists[j]))
        for j in range(len(roots)):
            if j != best and not dists[best] < lowers[j]:
                raise EmbeddingError(f"approximation for {name} does not isolate a single root")
        self._roots[field] = roots[best]
        self.choices[name] = complex(roots[best])

    def _value(self, x) -> acb:
        if not isinstance(x, FieldElement):
            return _rational_ball(x)
        g = self._roots[x.field]
        acc = acb(0)
        for c in reversed(x.coords):
            acc = acc * g + self._value(c)
        return acc

    def __call__(self, x) -> acb:
        with working_precision(self.precision):
            return self._value(x)

    def matrix(self, entries) -> "ComplexMatrix":
        with working_precision(self.precision):
            balls = [[self._value(e) for e in row] for row in entries]
            return ComplexMatrix(acb_mat(balls), self.precision)


class ComplexMatrix:
    """Matrix of complex balls; ``mid`` and ``rad`` give a float view."""

    def __init__(self, balls: acb_mat, precision: int = DEFAULT_PRECISION):
        self.balls = balls
        self.precision = precision
        self.rows = balls.nrows()
        self.cols = balls.ncols()
        mid = np.empty((self.rows, self.cols), dtype=np.complex128)
        rad = np.empty((self.rows, self.cols))
        with working_precision(precision):
            for r in range(self.rows):
                for c in range(self.cols):
                    e = balls[r, c]
                    z = complex(e)
                    mid[r, c] = z
                    rad[r, c] = _float_upper((e - acb(z)).abs_upper())
        self.mid = mid
        self.rad = rad

    @classmethod
    def identity(cls, n: int, precision: int = DEFAULT_PRECISION):
        with working_precision(precision):
            return cls(acb_mat([[1 if r == c else 0 for c in range(n)] for r in range(n)]), precision)

    @classmethod
    def from_complex(cls, values, precision: int = DEFAULT_PRECISION):
        values = np.asarray(values, dtype=np.complex128)
        with working_precision(precision):
            rows = [[acb(complex(v)) for v in row] for row in values]
            return cls(acb_mat(rows), precision)

    @classmethod
    def block_diagonal(cls, blocks):
        prec = max(b.precision for b in blocks)
        n = sum(b.rows for b in blocks)
        with working_precision(prec):
            out = acb_mat(n, n)
            off = 0
            for b in blocks:
                for r in range(b.rows):
                    for c in range(b.cols):
                        out[off + r, off + c] = b.balls[r, c]
                off += b.rows
            return cls(out, prec)

    @property
    def error_bound(self) -> float:
        """Largest distance between an entry's float view and the exact value."""
        return float(self.rad.max()) if self.rad.size else 0.0

    def _wrap(self, balls):
        return ComplexMatrix(balls, self.precision)

    def __add__(self, other):
        with working_precision(self.precision):
            return self._wrap(self.balls + other.balls)

    def __sub__(self, other):
        with working_precision(self.precision):
            return self._wrap(self.balls - other.balls)

    def __matmul__(self, other):
        with working_precision(self.precision):
            return self._wrap(self.balls * other.balls)

    def scale(self, a):
        with working_precision(self.precision):
            s = a if isinstance(a, (acb, arb)) else _rational_ball(a) if isinstance(a, (int, Fraction)) else acb(a)
            return self._wrap(self.balls * s)

    def conj_transpose(self):
        with working_precision(self.precision):
            return self._wrap(self.balls.conjugate().transpose())

    def det(self) -> acb:
        with working_precision(self.precision):
            return self.balls.det()

    def trace(self) -> acb:
        with working_precision(self.precision):
            return self.balls.trace()

    def entries(self) -> list:
        return [self.balls[r, c] for r in range(self.rows) for c in range(self.cols)]

    def __repr__(self):
        return f"ComplexMatrix({self.rows}x{self.cols}, error_bound={self.error_bound:.2e})"


def combine(coords, matrices, precision: int = DEFAULT_PRECISION) -> ComplexMatrix:
    """``sum_i coords[i] * matrices[i]`` in ball arithmetic."""
    with working_precision(precision):
        acc = acb_mat(matrices[0].rows, matrices[0].cols)
        for c, m in zip(coords, matrices):
            c = int(c)
            if c:
                acc = acc + m.balls * c
        return ComplexMatrix(acc, precision)


def abs_squared(z: acb) -> arb:
    return z.real * z.real + z.imag * z.imag
