"""Finite residue fields and reduction maps at designated primes.

``GF(p, modulus)`` is ``F_p[t]/(modulus)``. Elements are plain ints in
``[0, q)``: the base-``p`` digits of the int are the coefficients of
``1, t, t^2, ...``. A prime of a tower field is described by the images of
every generator in its residue field; reducing an element then amounts to
evaluating its power-basis coordinates at those images.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from .field import QQ, FieldElement, field_of


class NotIntegralError(ValueError):
    """The element has a denominator divisible by the residue characteristic."""


class GF:
    def __init__(self, p: int, modulus=(0, 1)):
        if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        modulus = [c % p for c in modulus]
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self.p = p
        self.f = len(modulus) - 1
        if self.f < 1:
            raise ValueError("modulus must have degree >= 1")
        self.modulus = tuple(modulus)
        self.q = p**self.f
        if self.f > 1 and not _irreducible_mod_p(self.modulus, p):
            raise ValueError(f"modulus {self.modulus} is reducible mod {p}")

    # -- encoding -------------------------------------------------------------
    def to_digits(self, a: int) -> list:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits) -> int:
        acc = 0
        for d in reversed(list(digits)):
            acc = acc * self.p + d % self.p
        return acc

    @property
    def gen(self) -> int:
        """Class of ``t`` (for ``f = 1`` this is the root of the linear modulus)."""
        if self.f == 1:
            return (-self.modulus[0]) % self.p
        return self.p

    # -- arithmetic -----------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        return self.from_digits(x + y for x, y in zip(self.to_digits(a), self.to_digits(b)))

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return self.from_digits(-x for x in self.to_digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p = self.p
        if self.f == 1:
            return a * b % p
        da, db = self.to_digits(a), self.to_digits(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        m = self.modulus
        for k in range(len(prod) - 1, self.f - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(self.f + 1):
                    prod[k - self.f + j] -= c * m[j]
        return self.from_digits(prod[: self.f])

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.f == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def from_rational(self, x) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise NotIntegralError(f"{x} is not integral at {self.p}")
        r = x.numerator * pow(x.denominator, -1, self.p) % self.p
        return r  # the prime subfield consists of the constant digit

    # -- group structure ------------------------------------------------------
    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.q - 1
        order = n
        for r in _prime_factors(n):
            while order % r == 0 and self.pow(a, order // r) == 1:
                order //= r
        return order

    def in_power_subgroup(self, a: int, m: int) -> bool:
        """Membership of ``a`` in the subgroup of ``m``-th powers (``m | q-1``)."""
        if (self.q - 1) % m:
            raise ValueError(f"{m} does not divide {self.q - 1}")
        return self.pow(a, (self.q - 1) // m) == 1

    def elements(self):
        return range(self.q)

    def poly_eval(self, coeffs, x: int) -> int:
        acc = 0
        for c in reversed(list(coeffs)):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_rem_mod_p(a, b, p):
    a = [c % p for c in a]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _irreducible_mod_p(m, p) -> bool:
    # desk-scale: try every monic divisor of degree <= deg/2
    f = len(m) - 1
    for d in range(1, f // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_rem_mod_p(list(m), list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class LocalPrimeData:
    """A prime of a tower field, fixed by the residues of the generators.

    ``images`` maps each generator name of ``field`` (and of every field
    below it) to an element of ``GF(p, modulus)``. ``extension_degree`` is the
    local degree ``[K:k]`` of the extension used in non-norm tests.
    """

    label: str
    field: object
    p: int
    modulus: tuple
    images: dict
    ramification_index: int = 1
    extension_degree: int = 1
    generator: object = None
    notes: str = ""
    gf: GF = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gf", GF(self.p, self.modulus))
        missing = [g for g in _tower_generators(self.field) if g not in self.images]
        if missing:
            raise ValueError(f"prime {self.label} lacks residues for {missing}")

    @property
    def residue_char(self) -> int:
        return self.p

    @property
    def residue_degree(self) -> int:
        return self.gf.f

    @property
    def residue_size(self) -> int:
        return self.gf.q

    def reduce(self, x) -> int:
        return residue_reduce(self, x)

    def is_valid(self) -> bool:
        """Every generator image is a root of its reduced minimal polynomial."""
        k = self.field
        while k is not QQ:
            coeffs = [self.reduce(c) for c in k.min_poly]
            if self.gf.poly_eval(coeffs, self.images[k.generator_name] % self.gf.q) != 0:
                return False
            k = k.base
        return True

    def restrict(self, sub) -> "LocalPrimeData":
        """The prime of ``sub`` lying below this one (same residue encoding)."""
        names = set(_tower_generators(sub))
        return LocalPrimeData(
            label=f"{self.label}|{sub.name}",
            field=sub,
            p=self.p,
            modulus=self.modulus,
            images={g: v for g, v in self.images.items() if g in names},
            ramification_index=1,
            extension_degree=1,
        )


def _tower_generators(field) -> list:
    return [f.generator_name for f in field.chain() if f is not QQ]


def residue_reduce(prime: LocalPrimeData, x) -> int:
    """Image of ``x`` in the residue field at ``prime`` as an int in ``[0, q)``."""
    k = field_of(x)
    if not prime.field.has_subfield(k):
        raise ValueError(f"{k.name} does not lie below {prime.field.name}")
    return _reduce(prime, x)


def _reduce(prime, x) -> int:
    gf = prime.gf
    if not isinstance(x, FieldElement):
        return gf.from_rational(x)
    g = prime.images[x.field.generator_name] % gf.q
    acc = 0
    for c in reversed(x.coords):
        acc = gf.add(gf.mul(acc, g), _reduce(prime, c))
    return acc
