"""Positive integers kept as prime-exponent maps."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


def factorize(n: int) -> dict:
    """Trial division; the integers here are norms of small ideals."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Factored:
    """A positive integer with its factorization attached.

    Equality compares the value, so ``Factored(36) == Factored({2: 2, 3: 2})``.
    """

    __slots__ = ("exponents",)

    def __init__(self, value=1):
        if isinstance(value, Factored):
            exps = dict(value.exponents)
        elif isinstance(value, Mapping):
            exps = {}
            for p, e in value.items():
                p, e = int(p), int(e)
                if e < 0:
                    raise ValueError("negative exponent")
                if e:
                    for q, k in factorize(p).items():
                        exps[q] = exps.get(q, 0) + k * e
        else:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"{value} is not an integer")
                value = value.numerator
            exps = factorize(value)
        self.exponents = dict(sorted(exps.items()))

    @property
    def value(self) -> int:
        v = 1
        for p, e in self.exponents.items():
            v *= p**e
        return v

    def __int__(self):
        return self.value

    def __mul__(self, other):
        other = Factored(other)
        exps = dict(self.exponents)
        for p, e in other.exponents.items():
            exps[p] = exps.get(p, 0) + e
        return Factored(exps)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return Factored({p: e * k for p, e in self.exponents.items()})

    def divides(self, other) -> bool:
        other = Factored(other)
        return all(other.exponents.get(p, 0) >= e for p, e in self.exponents.items())

    def __eq__(self, other):
        if isinstance(other, Mapping):
            other = Factored(other)
        if isinstance(other, Factored):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        return self.value < int(Factored(other))

    def __le__(self, other):
        return self.value <= int(Factored(other))

    def __gt__(self, other):
        return self.value > int(Factored(other))

    def __ge__(self, other):
        return self.value >= int(Factored(other))

    def __hash__(self):
        return hash(self.value)

    def to_json(self) -> dict:
        return {str(p): e for p, e in self.exponents.items()}

    def __str__(self):
        if not self.exponents:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.exponents.items())

    def __repr__(self):
        return f"Factored({self})"
