"""Relative number-field towers with exact arithmetic.

A tower is built bottom up: :data:`QQ` at the root, then one
:class:`NumberField` per simple extension ``K = B[x]/(f)`` with ``f`` monic
over the base ``B``. Elements store their power-basis coordinates over the
immediate base, so equality is coordinate equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import poly
from .linalg import det


class FieldMismatchError(ValueError):
    """Operands live in fields that are not in a common tower."""


class RationalField:
    """The rational numbers, backed by :class:`fractions.Fraction`."""

    name = "Q"
    generator_name = None
    degree = 1
    absolute_degree = 1
    base = None
    integral_basis: tuple = (Fraction(1),)

    def __call__(self, x) -> Fraction:
        return self.coerce(x)

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return Fraction(x)
        if isinstance(x, str):
            from .parse import parse_element

            return parse_element(self, x)
        if isinstance(x, FieldElement):
            raise FieldMismatchError(f"element of {x.field.name} is not in Q")
        raise TypeError(f"cannot coerce {type(x).__name__} into Q")

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def chain(self) -> list:
        return [self]

    def has_subfield(self, other) -> bool:
        return other is self

    def relative_degree(self, sub) -> int:
        if sub is not self:
            raise FieldMismatchError(f"{sub.name} is not a subfield of Q")
        return 1

    def generators(self) -> dict:
        return {}

    def __repr__(self) -> str:
        return "Q"


QQ = RationalField()


def field_of(x):
    if isinstance(x, FieldElement):
        return x.field
    if isinstance(x, (int, Fraction)):
        return QQ
    raise TypeError(f"{type(x).__name__} is not a field element")


class NumberField:
    """Simple extension ``base[gen]/(min_poly)``.

    ``min_poly`` lists base-field coefficients lowest degree first and must be
    monic. Irreducibility is the caller's responsibility; a reducible
    polynomial shows up as a failed inversion.
    """

    def __init__(self, name: str, base, min_poly: Sequence, generator: str = "x"):
        self.name = name
        self.base = base
        self.generator_name = generator
        coeffs = [base.coerce(c) for c in min_poly]
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError(f"minimal polynomial of {name} is not monic")
        self.min_poly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.absolute_degree = self.degree * base.absolute_degree
        self.integral_basis: tuple = ()
        self._zero_base = base.zero
        self._build_reduction_table()
        self._power_traces = None

    # -- construction helpers -------------------------------------------------
    def _build_reduction_table(self):
        d = self.degree
        # x^d = -(c_0 + ... + c_{d-1} x^{d-1})
        row = [-c for c in self.min_poly[:-1]]
        table = [tuple(row)]
        for _ in range(d, 2 * d - 2):
            prev = table[-1]
            top = prev[-1]
            shifted = [self._zero_base] + list(prev[:-1])
            table.append(tuple(shifted[j] + top * row[j] for j in range(d)))
        self._reduction = table

    def set_integral_basis(self, basis: Iterable) -> None:
        elems = tuple(self.coerce(b) for b in basis)
        if len(elems) != self.degree:
            raise ValueError(
                f"integral basis of {self.name} needs {self.degree} elements, got {len(elems)}"
            )
        if det([[c for c in e.coords] for e in elems]) == 0:
            raise ValueError(f"integral basis of {self.name} is linearly dependent")
        self.integral_basis = elems

    # -- tower structure ------------------------------------------------------
    def chain(self) -> list:
        """Fields from ``self`` down to ``QQ``."""
        out, f = [], self
        while f is not None:
            out.append(f)
            f = f.base
        return out

    def has_subfield(self, other) -> bool:
        return any(f is other for f in self.chain())

    def generators(self) -> dict:
        gens = self.base.generators()
        gens[self.generator_name] = self.gen
        return gens

    def relative_degree(self, sub) -> int:
        if not self.has_subfield(sub):
            raise FieldMismatchError(f"{sub.name} is not a subfield of {self.name}")
        return self.absolute_degree // sub.absolute_degree

    # -- elements -------------------------------------------------------------
    def element(self, coords: Sequence) -> "FieldElement":
        coords = tuple(self.base.coerce(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError(f"{self.name} elements need {self.degree} coordinates")
        return FieldElement(self, coords)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (self._zero_base,) * self.degree)

    @property
    def one(self) -> "FieldElement":
        return self._embed_base(self.base.one)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, (-self.min_poly[0],))
        z = self._zero_base
        return FieldElement(self, (z, self.base.one) + (z,) * (self.degree - 2))

    def _embed_base(self, b) -> "FieldElement":
        return FieldElement(self, (b,) + (self._zero_base,) * (self.degree - 1))

    def __call__(self, x) -> "FieldElement":
        return self.coerce(x)

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is self:
                return x
            if self.has_subfield(x.field):
                return self._embed_base(self.base.coerce(x))
            raise FieldMismatchError(f"cannot coerce element of {x.field.name} into {self.name}")
        if isinstance(x, str):
            from .parse import parse_element

            return parse_element(self, x)
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return self._embed_base(self.base.coerce(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")

    # -- linear algebra over the base ----------------------------------------
    def _mul_coords(self, a, b):
        d = self.degree
        prod = [None] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                t = ai * bj
                prod[i + j] = t if prod[i + j] is None else prod[i + j] + t
        z = self._zero_base
        out = [z if c is None else c for c in prod[:d]]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c is None:
                continue
            row = self._reduction[k - d]
            for j in range(d):
                if row[j] != 0:
                    out[j] = out[j] + c * row[j]
        return tuple(out)

    def multiplication_matrix(self, x: "FieldElement") -> list:
        """Matrix of ``y -> x*y`` over the base, acting on power-basis columns."""
        cols = []
        cur = x.coords
        gen = self.gen.coords
        for j in range(self.degree):
            cols.append(cur)
            if j + 1 < self.degree:
                cur = self._mul_coords(cur, gen)
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def norm_to_base(self, x: "FieldElement"):
        return det(self.multiplication_matrix(x))

    def trace_to_base(self, x: "FieldElement"):
        if self._power_traces is None:
            traces = []
            cur = self.one.coords
            for _ in range(self.degree):
                m = self.multiplication_matrix(FieldElement(self, cur))
                t = m[0][0]
                for i in range(1, self.degree):
                    t = t + m[i][i]
                traces.append(t)
                cur = self._mul_coords(cur, self.gen.coords)
            self._power_traces = tuple(traces)
        acc = self._zero_base
        for c, t in zip(x.coords, self._power_traces):
            if c != 0:
                acc = acc + c * t
        return acc

    def __repr__(self) -> str:
        return f"NumberField({self.name!r} = {self.base.name}[{self.generator_name}])"


class FieldElement:
    """Immutable element of a :class:`NumberField`."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords
        self._hash = None

    # -- coercion -------------------------------------------------------------
    def _common(self, other):
        f = self.field
        if isinstance(other, FieldElement):
            g = other.field
            if g is f:
                return self, other
            if f.has_subfield(g):
                return self, f.coerce(other)
            if g.has_subfield(f):
                return g.coerce(self), other
            raise FieldMismatchError(f"{f.name} and {g.name} are not in a common tower")
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, f.coerce(other)
        return None

    def _scale(self, s):
        return FieldElement(self.field, tuple(s * c for c in self.coords))

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return FieldElement(a.field, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.coords))

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return FieldElement(a.field, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return FieldElement(a.field, tuple(y - x for x, y in zip(a.coords, b.coords)))

    def __mul__(self, other):
        f = self.field
        if isinstance(other, FieldElement) and other.field is not f and f.has_subfield(other.field):
            return self._scale(f.base.coerce(other))
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._scale(f.base.coerce(other))
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.field is not f:
            return a * b
        return FieldElement(f, f._mul_coords(a.coords, b.coords))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError(f"division by zero in {f.name}")
        g, s, _ = poly.xgcd(list(self.coords), list(f.min_poly))
        if len(g) != 1:
            raise ArithmeticError(f"minimal polynomial of {f.name} is reducible")
        ginv = g[0].inverse() if isinstance(g[0], FieldElement) else 1 / g[0]
        s = [f.base.coerce(c) * ginv for c in s]
        s += [f._zero_base] * (f.degree - len(s))
        return FieldElement(f, tuple(s))

    def __truediv__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._common(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparisons ----------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        if isinstance(other, FieldElement) and other.field is self.field:
            return self.coords == other.coords
        try:
            pair = self._common(other)
        except FieldMismatchError:
            return False
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coords == b.coords

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.name, self.coords))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- descent --------------------------------------------------------------
    def in_base(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def to_base(self):
        """Return the element as a member of the immediate base field."""
        if not self.in_base():
            raise ValueError(f"{self} does not lie in {self.field.base.name}")
        return self.coords[0]

    def descend(self, sub):
        """Rewrite the element in the subfield ``sub`` of its tower."""
        x = self
        while field_of(x) is not sub:
            if not isinstance(x, FieldElement):
                raise FieldMismatchError(f"{sub.name} is not below {self.field.name}")
            x = x.to_base()
        return x

    def lies_in(self, sub) -> bool:
        try:
            self.descend(sub)
        except ValueError:
            return False
        return True

    # -- printing -------------------------------------------------------------
    def monomials(self) -> dict:
        """Map exponent tuples (innermost generator first) to rational coefficients."""
        return _monomials(self)

    def __str__(self) -> str:
        from .parse import format_element

        return format_element(self)

    def __repr__(self) -> str:
        return f"<{self.field.name}: {self}>"


def _monomials(x) -> dict:
    if not isinstance(x, FieldElement):
        x = Fraction(x)
        return {(): x} if x != 0 else {}
    out = {}
    for k, c in enumerate(x.coords):
        for exps, q in _monomials(c).items():
            out[exps + (k,)] = q
    if not out:
        return {}
    # pad monomials of lower levels so all keys have equal length
    depth = len(x.field.chain()) - 1
    return {((0,) * (depth - len(e))) + e if len(e) < depth else e: q for e, q in out.items()}


# -- norms, traces, discriminants ---------------------------------------------
def relative_norm(x, sub):
    """``N_{K/sub}(x)`` by stacking multiplication-matrix determinants down the tower."""
    k = field_of(x)
    if not k.has_subfield(sub):
        raise FieldMismatchError(f"{sub.name} is not a subfield of {k.name}")
    while k is not sub:
        x = k.norm_to_base(x)
        k = k.base
    return x


def relative_trace(x, sub):
    k = field_of(x)
    if not k.has_subfield(sub):
        raise FieldMismatchError(f"{sub.name} is not a subfield of {k.name}")
    while k is not sub:
        x = k.trace_to_base(x)
        k = k.base
    return x


def absolute_norm(x) -> Fraction:
    return relative_norm(x, QQ) if isinstance(x, FieldElement) else Fraction(x)


def absolute_trace(x) -> Fraction:
    return relative_trace(x, QQ) if isinstance(x, FieldElement) else Fraction(x)


def trace_form_discriminant(basis: Sequence, sub):
    """``det[Tr_{K/sub}(b_i b_j)]`` for a ``sub``-basis of ``K``."""
    basis = list(basis)
    if not basis:
        raise ValueError("empty basis")
    k = field_of(basis[0])
    expected = k.relative_degree(sub)
    if len(basis) != expected:
        raise ValueError(f"basis of {k.name} over {sub.name} needs {expected} elements, got {len(basis)}")
    gram = [[relative_trace(b * c, sub) for c in basis] for b in basis]
    return det(gram)


def absolute_integral_basis(field) -> list:
    """Z-basis of the ring of integers from the stored relative bases.

    The outer loop runs over the top-level basis and the inner loop over the
    basis below it, so index 0 is ``1`` and index 1 is the first lower
    generator when the lower field has degree 2.
    """
    if field is QQ:
        return [Fraction(1)]
    if not field.integral_basis:
        raise ValueError(f"no integral basis stored for {field.name}")
    lower = absolute_integral_basis(field.base)
    return [e * field.coerce(b) for e in field.integral_basis for b in lower]


def relative_integral_basis(field, sub) -> list:
    """Basis of ``O_field`` as a module over ``O_sub`` (both stored relatively)."""
    if field is sub:
        return [field.one if isinstance(field, NumberField) else Fraction(1)]
    if not field.integral_basis:
        raise ValueError(f"no integral basis stored for {field.name}")
    lower = relative_integral_basis(field.base, sub)
    return [e * field.coerce(b) for e in field.integral_basis for b in lower]


# -- automorphisms ------------------------------------------------------------
class FieldAutomorphism:
    """Ring automorphism of a tower field.

    ``image`` is where the top generator goes. ``base_automorphism`` acts on
    the base field; ``None`` means the base is fixed pointwise.
    """

    def __init__(self, field: NumberField, image, base_automorphism=None, name: str = ""):
        self.field = field
        self.image = field.coerce(image)
        self.base_automorphism = base_automorphism
        self.name = name or "aut"
        if base_automorphism is not None and base_automorphism.field is not field.base:
            raise FieldMismatchError(
                f"base automorphism acts on {base_automorphism.field.name}, expected {field.base.name}"
            )

    def _on_base(self, c):
        if self.base_automorphism is None:
            return c
        return self.base_automorphism(c)

    def __call__(self, x):
        f = self.field
        if not isinstance(x, FieldElement) or x.field is not f:
            if isinstance(x, FieldElement) and f.has_subfield(x.field):
                return self.restrict(x.field)(x)
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            x = f.coerce(x)
        acc = None
        for c in reversed(x.coords):
            c = f.coerce(self._on_base(c))
            acc = c if acc is None else acc * self.image + c
        return acc

    def is_valid(self) -> bool:
        """The mapped minimal polynomial vanishes at the image, recursively."""
        f = self.field
        if self.base_automorphism is not None and not self.base_automorphism.is_valid():
            return False
        mapped = [f.coerce(self._on_base(c)) for c in f.min_poly]
        return poly.evaluate(mapped, self.image).is_zero()

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """``self o other``."""
        if other.field is not self.field:
            raise FieldMismatchError("automorphisms act on different fields")
        if self.base_automorphism is None and other.base_automorphism is None:
            base = None
        elif self.base_automorphism is None:
            base = other.base_automorphism
        elif other.base_automorphism is None:
            base = self.base_automorphism
        else:
            base = self.base_automorphism.compose(other.base_automorphism)
        return FieldAutomorphism(self.field, self(other.image), base, f"{self.name}*{other.name}")

    def power(self, k: int) -> "FieldAutomorphism":
        if k < 0:
            k %= self.order
        result = identity_automorphism(self.field)
        for _ in range(k):
            result = self.compose(result)
        return result

    def is_identity(self) -> bool:
        if self.image != self.field.gen:
            return False
        return self.base_automorphism is None or self.base_automorphism.is_identity()

    @property
    def order(self) -> int:
        bound = self.field.absolute_degree
        cur = self
        for k in range(1, bound + 1):
            if cur.is_identity():
                return k
            cur = self.compose(cur)
        raise ArithmeticError(f"automorphism {self.name} has no finite order up to {bound}")

    def fixes(self, sub) -> bool:
        """True when the automorphism is the identity on the subfield ``sub``."""
        aut = self
        while aut is not None and aut.field is not sub:
            aut = aut.base_automorphism
            if aut is None:
                return True
        return aut is None or aut.is_identity()

    def restrict(self, sub):
        aut = self
        while aut is not None and aut.field is not sub:
            aut = aut.base_automorphism
        return aut if aut is not None else identity_automorphism(sub)

    def __repr__(self) -> str:
        return f"FieldAutomorphism({self.field.name}: {self.field.generator_name} -> {self.image})"


def identity_automorphism(field) -> FieldAutomorphism:
    return FieldAutomorphism(field, field.gen, None, "id")


def galois_norm(x, aut: FieldAutomorphism, order: int | None = None):
    """Product of the conjugates ``aut^k(x)``; an independent check of the norm."""
    order = aut.order if order is None else order
    acc, cur = x, x
    for _ in range(order - 1):
        cur = aut(cur)
        acc = acc * cur
    return acc


def galois_trace(x, aut: FieldAutomorphism, order: int | None = None):
    order = aut.order if order is None else order
    acc, cur = x, x
    for _ in range(order - 1):
        cur = aut(cur)
        acc = acc + cur
    return acc


def flat_coords(x) -> list:
    """Rational coordinates of ``x`` on the absolute monomial basis of its field."""
    if not isinstance(x, FieldElement):
        return [Fraction(x)]
    out = []
    for c in x.coords:
        out.extend(flat_coords(c))
    # coords are ordered top generator major, lower generators inside
    return out


def integral_coordinates(x, field=None) -> list:
    """Coordinates of ``x`` on the absolute Z-basis of ``O_field``."""
    from .linalg import solve

    field = field_of(x) if field is None else field
    x = field.coerce(x) if field is not QQ else QQ.coerce(x)
    basis = absolute_integral_basis(field)
    cols = [flat_coords(b) for b in basis]
    n = len(cols)
    a = [[cols[j][i] for j in range(n)] for i in range(n)]
    return solve(a, flat_coords(x))


def is_integral(x, field=None) -> bool:
    return all(c.denominator == 1 for c in integral_coordinates(x, field))
