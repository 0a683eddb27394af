"""Certificates that an element of ``L`` is not a norm from ``E``.

Every method is one-sided. A certificate with ``conclusion=True`` proves the
element is not a norm; ``conclusion=False`` only means the method could not
decide. Nothing here ever claims that an element *is* a norm.

Methods
-------
residue-subgroup
    At a prime of ``L`` where ``E/L`` is totally and tamely ramified of
    degree ``m``, a unit is a local norm only if its residue is an ``m``-th
    power in the residue field.
mod-p-obstruction
    For ``E = Q(sqrt d)``, an odd prime ``p`` with ``p || d`` and
    ``p`` not dividing ``x``: if ``x`` is a rational norm then ``x`` is a
    square mod ``p``.
composite-factor / unit-square-argument
    Split ``x = N(f) * eps``; then ``x`` is a norm iff ``eps`` is. For a CM
    extension of a real quadratic field every norm is totally positive, so an
    ``eps`` that is negative somewhere is not a norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exactfield.field import QQ, FieldElement, absolute_norm, absolute_trace, relative_norm
from ..exactfield.parse import format_element
from ..exactfield.residue import GF, NotIntegralError
from ..catalog.formulas import quadratic_discriminant

KINDS = ("mod-p-obstruction", "residue-subgroup", "unit-square-argument", "composite-factor")


@dataclass
class NonNormEvidence:
    kind: str
    element: str
    prime: object
    data: dict
    conclusion: bool
    reason: str = ""
    sub: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "non-norm confirmed" if self.conclusion else "cannot conclude"

    def verify(self) -> bool:
        """Re-derive the conclusion from ``data`` alone."""
        return recheck(self) == self.conclusion

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "element": self.element,
            "prime": self.prime,
            "data": self.data,
            "conclusion": self.conclusion,
            "status": self.status,
            "reason": self.reason,
            "sub": [s.to_json() for s in self.sub],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "NonNormEvidence":
        return cls(
            kind=doc["kind"],
            element=doc["element"],
            prime=doc["prime"],
            data=dict(doc["data"]),
            conclusion=bool(doc["conclusion"]),
            reason=doc.get("reason", ""),
            sub=[cls.from_json(s) for s in doc.get("sub", [])],
        )


# -- individual methods ---------------------------------------------------------
def residue_subgroup(setup, x, prime_label: str) -> NonNormEvidence:
    from .discriminant import relative_field_discriminant
    from ..exactfield.residue import residue_reduce

    L = setup.L
    x = L.coerce(x)
    prime = setup.prime(prime_label)
    text = format_element(x)
    m = prime.extension_degree
    data = {
        "p": prime.p,
        "modulus": list(prime.modulus),
        "q": prime.residue_size,
        "local_degree": m,
        "global_degree": setup.n_r,
    }

    def fail(reason):
        return NonNormEvidence("residue-subgroup", text, prime_label, data, False, reason)

    if prime.field is not L:
        return fail(f"prime {prime_label} is not a prime of L")
    if m != setup.n_r:
        return fail("local extension is not totally ramified of full degree")
    if prime.p % m == 0:
        return fail("wild ramification; the tame criterion does not apply")
    disc = relative_field_discriminant(setup.E, L)
    data["disc_residue"] = residue_reduce(prime, disc)
    if data["disc_residue"] != 0:
        return fail(f"E/L is unramified at {prime_label}")
    try:
        r = prime.reduce(x)
    except NotIntegralError:
        return fail(f"{text} is not integral at {prime_label}")
    data["residue"] = r
    if r == 0:
        return fail(f"{text} is not a unit at {prime_label}")
    exp = (prime.residue_size - 1) // m
    power = prime.gf.pow(r, exp)
    data["exponent"] = exp
    data["power"] = power
    data["order"] = prime.gf.order(r)
    ok = power != 1
    what = {2: "square", 3: "cube"}.get(m, f"{m}th power")
    reason = (
        f"residue {r} is not a {what} in GF({prime.residue_size})"
        if ok
        else f"residue {r} is a {what} in GF({prime.residue_size})"
    )
    return NonNormEvidence("residue-subgroup", text, prime_label, data, ok, reason)


def mod_p_obstruction(setup, x, p: int, d: int) -> NonNormEvidence:
    from .discriminant import relative_field_discriminant

    text = format_element(x) if isinstance(x, FieldElement) else str(x)
    data = {"p": p, "d": d}

    def fail(reason):
        return NonNormEvidence("mod-p-obstruction", text, p, data, False, reason)

    if setup.L is not QQ or setup.n_r != 2:
        return fail("method needs a quadratic extension of Q")
    if relative_field_discriminant(setup.E, QQ) != quadratic_discriminant(d):
        return fail(f"E is not Q(sqrt {d})")
    x = Fraction(QQ.coerce(x) if not isinstance(x, FieldElement) else x.descend(QQ))
    if x.denominator != 1:
        return fail("element is not an integer")
    x = x.numerator
    data["x"] = x
    if p == 2 or d % p or d % (p * p) == 0 or x % p == 0:
        return fail("need an odd prime p dividing d exactly once and not dividing x")
    squares = sorted({k * k % p for k in range(1, p)})
    data["x_mod_p"] = x % p
    data["squares_mod_p"] = squares
    ok = x % p not in squares
    reason = f"{x} is not a square mod {p}" if ok else f"{x} is a square mod {p}"
    return NonNormEvidence("mod-p-obstruction", text, p, data, ok, reason)


def _is_real_quadratic(L) -> bool:
    if L is QQ or L.base is not QQ or L.degree != 2:
        return False
    c0, c1, _ = L.min_poly
    return c1 * c1 - 4 * c0 > 0


def unit_square_argument(setup, eps) -> NonNormEvidence:
    L, E = setup.L, setup.E
    eps = L.coerce(eps)
    text = format_element(eps)
    data = {}

    def fail(reason):
        return NonNormEvidence("unit-square-argument", text, None, data, False, reason)

    if not _is_real_quadratic(L) or E.base is not L or E.degree != 2:
        return fail("method needs a quadratic extension of a real quadratic field")
    c0, c1, _ = E.min_poly
    delta = c1 * c1 - 4 * c0
    data["delta"] = format_element(delta)
    data["delta_norm"] = str(absolute_norm(delta))
    data["delta_trace"] = str(absolute_trace(delta))
    data["unit_norm"] = str(absolute_norm(eps))
    data["unit_trace"] = str(absolute_trace(eps))
    ok = _recheck_sign(data)
    reason = (
        "E/L is totally imaginary, so norms are totally positive, and the unit is not"
        if ok
        else "sign test inconclusive"
    )
    return NonNormEvidence("unit-square-argument", text, None, data, ok, reason)


def composite_factor(setup, x, factor, unit) -> NonNormEvidence:
    L, E = setup.L, setup.E
    x = L.coerce(x)
    f = E.coerce(factor)
    eps = L.coerce(unit)
    nf = relative_norm(f, L)
    data = {
        "factor": format_element(f),
        "factor_norm": format_element(nf),
        "unit": format_element(eps),
        "product": format_element(nf * eps),
    }
    text = format_element(x)
    if nf * eps != x:
        return NonNormEvidence("composite-factor", text, None, data, False, "factorization does not match")
    sub = unit_square_argument(setup, eps)
    reason = f"{text} = N({data['factor']}) * ({data['unit']}); " + sub.reason
    return NonNormEvidence("composite-factor", text, None, data, sub.conclusion, reason, [sub])


# -- re-checking ----------------------------------------------------------------
def _recheck_sign(data) -> bool:
    dn, dt = Fraction(data["delta_norm"]), Fraction(data["delta_trace"])
    un, ut = Fraction(data["unit_norm"]), Fraction(data["unit_trace"])
    delta_totally_negative = dn > 0 and dt < 0
    unit_totally_positive = un > 0 and ut > 0
    return delta_totally_negative and not unit_totally_positive


def recheck(ev: NonNormEvidence) -> bool:
    d = ev.data
    if ev.kind == "residue-subgroup":
        if "power" not in d:
            return False
        gf = GF(d["p"], d["modulus"])
        m, r = d["local_degree"], d["residue"]
        if m != d["global_degree"] or d["p"] % m == 0 or (gf.q - 1) % m or d.get("disc_residue") != 0:
            return False
        return r % gf.q != 0 and gf.pow(r, (gf.q - 1) // m) != 1
    if ev.kind == "mod-p-obstruction":
        if "x" not in d:
            return False
        p, dd, x = d["p"], d["d"], d["x"]
        if p == 2 or dd % p or dd % (p * p) == 0 or x % p == 0:
            return False
        return x % p not in {k * k % p for k in range(1, p)}
    if ev.kind == "unit-square-argument":
        return "delta_norm" in d and _recheck_sign(d)
    if ev.kind == "composite-factor":
        try:
            product = Fraction(d["factor_norm"]) * Fraction(d["unit"])
            if product != Fraction(d["product"]) or Fraction(d["product"]) != Fraction(ev.element):
                return False
        except ValueError:
            pass
        return bool(ev.sub) and all(recheck(s) for s in ev.sub)
    raise ValueError(f"unknown evidence kind {ev.kind!r}")


# -- dispatch -------------------------------------------------------------------
def verify_non_norm(setup, x=None, kind=None) -> NonNormEvidence:
    spec = dict(setup.nonnorm)
    kind = kind or spec.get("kind")
    x = setup.gamma if x is None else setup.L.coerce(x)
    if kind == "residue-subgroup":
        return residue_subgroup(setup, x, spec["prime"])
    if kind == "mod-p-obstruction":
        return mod_p_obstruction(setup, x, int(spec["p"]), int(spec["d"]))
    if kind == "composite-factor":
        return composite_factor(setup, x, spec["factor"], spec["unit"])
    if kind == "unit-square-argument":
        return unit_square_argument(setup, x)
    raise ValueError(f"{setup.id}: unknown non-norm method {kind!r}")


def _prime_divisors(n: int) -> list:
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


def division_check(setup):
    """Check ``gamma^{n_r/p}`` for every prime ``p | n_r``; returns ``(ok, evidence)``."""
    evidence = []
    for p in _prime_divisors(setup.n_r):
        x = setup.gamma ** (setup.n_r // p)
        evidence.append(verify_non_norm(setup, x))
    return all(e.conclusion for e in evidence), evidence


def unit_candidates(setup, radius: int = 6):
    """Products ``g1^a1 * g2^a2 ...`` of the catalog's unit generators with ``|a_k| <= radius``.

    Torsion generators (roots of unity) use exponents ``0..order-1``.
    """
    from itertools import product

    gens = [setup.L.coerce(g) for g in setup.nonnorm.get("units", [])]
    ranges = []
    for g in gens:
        order = _root_of_unity_order(g)
        ranges.append(range(order) if order else range(-radius, radius + 1))
    for exps in product(*ranges):
        acc = setup.L.one
        for g, e in zip(gens, exps):
            acc = acc * g**e
        yield exps, acc


def _root_of_unity_order(g, limit: int = 24):
    cur = g
    for k in range(1, limit + 1):
        if cur == 1:
            return k
        cur = cur * g
    return None
