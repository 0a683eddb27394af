"""Natural-order discriminants by two independent routes, plus the size
bounds used to rank constructions.

Route one is the tower formula
``N(disc(O_nat/O_F)) = N(disc(E/F))^{n_r} * |N_{L/Q}(gamma)|^{n_r(n_r-1)}``
with ``disc(E/F)`` taken from the field trace form. Route two never looks at
``gamma`` directly: it builds the reduced-trace Gram matrix of an
``O_F``-basis of the natural order and takes its determinant.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..exactfield.field import (
    QQ,
    absolute_norm,
    relative_integral_basis,
    trace_form_discriminant,
)
from ..exactfield.linalg import det
from ..factored import Factored
from .algebra import build_algebra, natural_order_basis, trace_gram


class DiscriminantMismatchError(ArithmeticError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def _abs_norm(x) -> Factored:
    v = abs(absolute_norm(x))
    if v.denominator != 1:
        raise ArithmeticError(f"norm {v} is not an integer")
    return Factored(v.numerator)


def relative_field_discriminant(top, bottom):
    """Trace-form discriminant of ``O_top`` over ``O_bottom`` (an element of ``bottom``)."""
    if top is bottom:
        return 1
    return trace_form_discriminant(relative_integral_basis(top, bottom), bottom)


def field_disc_norm(top, bottom) -> Factored:
    return _abs_norm(relative_field_discriminant(top, bottom))


def gamma_norm(setup) -> Factored:
    return _abs_norm(setup.gamma)


def discriminant_formula(setup) -> Factored:
    """``|Nm(disc(O_nat/O_F))|`` via the tower formula."""
    n_r = setup.n_r
    return field_disc_norm(setup.E, setup.F) ** n_r * gamma_norm(setup) ** (n_r * (n_r - 1))


def discriminant_formula_over_L(setup) -> Factored:
    """``|Nm_{L/Q}(disc(O_nat/O_L))|`` via the same formula one level up."""
    n_r = setup.n_r
    return field_disc_norm(setup.E, setup.L) ** n_r * gamma_norm(setup) ** (n_r * (n_r - 1))


def discriminant_traceform(setup, over=None) -> Factored:
    """Determinant of the reduced-trace Gram matrix of the natural order over ``O_over``."""
    over = setup.F if over is None else over
    algebra = build_algebra(setup)
    basis = natural_order_basis(algebra, over)
    gram = trace_gram(basis, down_to=over)
    return _abs_norm(det(gram))


def minimal_disc_bound(prime_norms, n_r: int) -> Factored:
    """``Nm(p1 p2)^{n_r(n_r-1)}`` for the two smallest prime ideals of ``L``."""
    p1, p2 = prime_norms
    return Factored(p1 * p2) ** (n_r * (n_r - 1))


def lambda_bound(setup) -> Fraction:
    (_, a), (_, b) = setup.smallest_primes
    return Fraction((a * b) ** (setup.n_r - 1), field_disc_norm(setup.E, setup.L).value)


def balance_D(setup) -> Factored:
    """``Nm(disc(E/Q(i))) * Nm_{L/Q}(gamma)^{n_r-1}``; only defined over ``Q(i)``."""
    if setup.F is QQ or setup.F.absolute_degree != 2 or setup.F.generator_name != "i":
        raise ValueError(f"{setup.id}: balance quantity needs base field Q(i)")
    return field_disc_norm(setup.E, setup.F) * gamma_norm(setup) ** (setup.n_r - 1)


# -- report -------------------------------------------------------------------
@dataclass
class DiscriminantReport:
    setup_id: str
    formula_value: Factored
    traceform_value: Factored
    formula_over_L: Factored
    traceform_over_L: Factored
    bound_value: Factored
    lam: Fraction
    lambda_printed: str | None
    balance: Factored | None
    claimed_table: Factored | None
    claimed_theorem: Factored | None
    field_discs: dict
    nonnorm: list = field(default_factory=list)
    division: bool | None = None
    cited_checks: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def formula_equals_traceform(self) -> bool:
        return self.formula_value == self.traceform_value and self.formula_over_L == self.traceform_over_L

    @property
    def matches_table(self):
        return None if self.claimed_table is None else self.formula_value == self.claimed_table

    @property
    def matches_theorem(self):
        return None if self.claimed_theorem is None else self.formula_value == self.claimed_theorem

    @property
    def bound_ok(self) -> bool:
        return self.bound_value <= self.formula_over_L and self.bound_value <= self.formula_value

    @property
    def bound_tight(self) -> bool:
        return self.bound_value == self.formula_value

    @property
    def lambda_flag(self) -> str:
        return ">1" if self.lam > 1 else "<1" if self.lam < 1 else "=1"

    def to_json(self) -> dict:
        def fj(v):
            return None if v is None else {"value": str(v.value), "factored": v.to_json(), "text": str(v)}

        return {
            "setup": self.setup_id,
            "computed": fj(self.formula_value),
            "formula": fj(self.formula_value),
            "traceform": fj(self.traceform_value),
            "formula_over_L": fj(self.formula_over_L),
            "traceform_over_L": fj(self.traceform_over_L),
            "formula_equals_traceform": self.formula_equals_traceform,
            "claimed": {"table": fj(self.claimed_table), "theorem": fj(self.claimed_theorem)},
            "matches_table": self.matches_table,
            "matches_theorem": self.matches_theorem,
            "bound": fj(self.bound_value),
            "bound_ok": self.bound_ok,
            "bound_tight": self.bound_tight,
            "lambda": {"computed": str(self.lam), "printed": self.lambda_printed, "flag": self.lambda_flag},
            "balance_D": fj(self.balance),
            "field_discriminants": {k: fj(v) for k, v in self.field_discs.items()},
            "nonnorm": self.nonnorm,
            "division": self.division,
            "cited_checks": self.cited_checks,
            "seconds": round(self.seconds, 3),
        }


def verify_setup(setup, with_nonnorm: bool = True, raise_on_mismatch: bool = True) -> DiscriminantReport:
    from .nonnorm import division_check

    t0 = time.perf_counter()
    formula = discriminant_formula(setup)
    formula_L = discriminant_formula_over_L(setup)
    trace = discriminant_traceform(setup, setup.F)
    trace_L = discriminant_traceform(setup, setup.L)
    discs = {"E/F": field_disc_norm(setup.E, setup.F), "E/L": field_disc_norm(setup.E, setup.L)}
    if setup.L is not setup.F:
        discs["L/F"] = field_disc_norm(setup.L, setup.F)
    balance = None
    if setup.F is not QQ:
        balance = balance_D(setup)
    cited = {}
    if "disc_E_over_F_norm" in setup.cited:
        want = Factored({int(p): e for p, e in setup.cited["disc_E_over_F_norm"].items()})
        cited["disc_E_over_F_norm"] = {"cited": str(want), "computed": str(discs["E/F"]), "agrees": want == discs["E/F"]}
    if "competitor" in setup.cited and balance is not None:
        comp = Factored({int(p): e for p, e in setup.cited["competitor"]["disc_norm"].items()})
        cited["competitor"] = {
            "field": setup.cited["competitor"]["field"],
            "balance_D": str(comp),
            "ours": str(balance),
            "ours_smaller": balance < comp,
        }
    report = DiscriminantReport(
        setup_id=setup.id,
        formula_value=formula,
        traceform_value=trace,
        formula_over_L=formula_L,
        traceform_over_L=trace_L,
        bound_value=minimal_disc_bound([nm for _, nm in setup.smallest_primes], setup.n_r),
        lam=lambda_bound(setup),
        lambda_printed=setup.cited.get("lambda_printed"),
        balance=balance,
        claimed_table=setup.claimed_table,
        claimed_theorem=setup.claimed_theorem,
        field_discs=discs,
        cited_checks=cited,
    )
    if with_nonnorm:
        ok, evidence = division_check(setup)
        report.division = ok
        report.nonnorm = [e.to_json() for e in evidence]
    report.seconds = time.perf_counter() - t0
    if raise_on_mismatch and not report.formula_equals_traceform:
        raise DiscriminantMismatchError(
            f"{setup.id}: formula {formula} differs from trace form {trace}", report
        )
    return report
