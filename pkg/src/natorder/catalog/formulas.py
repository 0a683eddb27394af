"""Closed-form discriminants of quadratic and cyclic quartic fields, and the
desk-scale searches that rank them by the natural-order discriminant floor.

For an index-2 algebra over ``L`` the natural-order discriminant norm is
``disc(E/Q)^2 * |N_{L/Q}(gamma)|^2``. The non-norm element cannot be
arbitrarily small: its norm is at least ``ceil(lam)`` with
``lam = N(p1 p2) / N(disc(E/L))``, where ``p1, p2`` are the two prime
ideals of ``L`` of smallest norm. The searches below evaluate that floor for
every parameter choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..factored import Factored, factorize


class ParameterError(ValueError):
    pass


CASE_NOT_COVERED = "case not covered"


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def quadratic_discriminant(d: int) -> int:
    """Field discriminant of ``Q(sqrt d)`` for squarefree ``d``."""
    if d in (0, 1) or not is_squarefree(d):
        raise ParameterError(f"d = {d} is not a squarefree integer other than 0, 1")
    return d if d % 4 == 1 else 4 * d


def quartic_case(A: int, B: int, C: int, D: int) -> str:
    _check_quartic(A, B, C, D)
    if D % 2 == 0:
        return "i"
    if B % 2 == 1:
        return "ii"
    if (A + B) % 4 == 3:
        return "iii"
    if (A + B) % 4 == 1 and ((A - C) % 4 == 0 or (A + C) % 4 == 0):
        return "iv"
    return CASE_NOT_COVERED


_QUARTIC_POWER = {"i": 8, "ii": 6, "iii": 4, "iv": 0}


def quartic_cyclic_discriminant(A: int, B: int, C: int, D: int):
    """Discriminant of ``Q(sqrt(A(D + B sqrt D)))`` by the congruence case split.

    Returns the string ``"case not covered"`` if no branch applies.
    """
    case = quartic_case(A, B, C, D)
    if case == CASE_NOT_COVERED:
        return CASE_NOT_COVERED
    return 2 ** _QUARTIC_POWER[case] * A * A * D**3


def _check_quartic(A, B, C, D):
    if A % 2 == 0 or not is_squarefree(A):
        raise ParameterError(f"A = {A} must be odd and squarefree")
    if B <= 0 or C <= 0:
        raise ParameterError("B and C must be positive")
    if D != B * B + C * C:
        raise ParameterError(f"D = {D} differs from B^2 + C^2 = {B * B + C * C}")
    if not is_squarefree(D):
        raise ParameterError(f"D = {D} is not squarefree")
    if math.gcd(A, D) != 1:
        raise ParameterError(f"gcd(A, D) = {math.gcd(A, D)} != 1")


# -- prime ideals of small norm -----------------------------------------------
def _primes_upto(n: int):
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(n + 1) if sieve[p]]


def kronecker(disc: int, p: int) -> int:
    """Splitting symbol of the prime ``p`` in the quadratic field of discriminant ``disc``."""
    if disc % p == 0:
        return 0
    if p == 2:
        return 1 if disc % 8 in (1, 7) else -1
    r = pow(disc % p, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def smallest_prime_norms(disc: int | None, count: int = 2) -> list:
    """Norms of the ``count`` prime ideals of smallest norm (``None`` means Q)."""
    norms = []
    for p in _primes_upto(200):
        if disc is None:
            norms.append(p)
        else:
            k = kronecker(disc, p)
            norms.extend([p, p] if k == 1 else [p] if k == 0 else [p * p])
    return sorted(norms)[:count]


# -- minimality searches --------------------------------------------------------
@dataclass(frozen=True)
class Candidate:
    params: tuple
    case: str
    disc: int
    lam: Fraction
    gamma_floor: int
    bound: int

    def to_json(self) -> dict:
        return {
            "params": list(self.params),
            "case": self.case,
            "disc": self.disc,
            "lambda": str(self.lam),
            "gamma_norm_floor": self.gamma_floor,
            "bound": self.bound,
            "bound_factored": Factored(self.bound).to_json(),
        }


@dataclass
class MinimalityReport:
    family: str
    bound: int
    candidates: list
    winner: Candidate
    unique: bool
    field_agrees: bool
    bound_agrees: bool
    expected_params: tuple
    claimed_bound: int
    notes: list = field(default_factory=list)

    @property
    def claim_agrees(self) -> bool:
        return self.field_agrees

    def rejected(self) -> list:
        return [c for c in self.candidates if c is not self.winner]

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "search_bound": self.bound,
            "winner": self.winner.to_json(),
            "unique_minimizer": self.unique,
            "field_agrees": self.field_agrees,
            "bound_agrees": self.bound_agrees,
            "expected_params": list(self.expected_params),
            "claimed_bound": self.claimed_bound,
            "claimed_bound_factored": Factored(self.claimed_bound).to_json(),
            "candidates": [c.to_json() for c in self.candidates],
            "notes": self.notes,
        }


def _gamma_floor(lam: Fraction) -> int:
    return max(1, math.ceil(lam))


def _quadratic_case(d: int, disc: int) -> str:
    if d == -3:
        return "optimum"
    if d % 4 in (2, 3):
        return "i" if abs(disc) >= 8 else "i (|disc| = 4)"
    if abs(d) >= 7:
        return "ii"
    return "iii"


def enumerate_quadratic(bound: int = 50) -> MinimalityReport:
    """All ``Q(sqrt d)`` with squarefree ``|d| <= bound`` and integral non-norm ``gamma``."""
    if bound < 10:
        raise ParameterError("bound must be at least 10")
    p1, p2 = smallest_prime_norms(None)
    cands = []
    for d in range(-bound, bound + 1):
        if d in (0, 1) or not is_squarefree(d):
            continue
        disc = quadratic_discriminant(d)
        lam = Fraction(p1 * p2, abs(disc))
        g = _gamma_floor(lam)
        cands.append(Candidate((d,), _quadratic_case(d, disc), disc, lam, g, disc * disc * g * g))
    return _report("Q-2", bound, cands, expected=(-3,), claimed=36)


def enumerate_quartic(bound: int = 50) -> MinimalityReport:
    """Cyclic quartic ``E/Q`` with quadratic ``L = Q(sqrt D)``, ``|A|, D <= bound``."""
    if bound < 10:
        raise ParameterError("bound must be at least 10")
    cands = []
    notes = []
    for D in range(2, bound + 1):
        if not is_squarefree(D):
            continue
        reps = [(B, C) for B in range(1, D) for C in range(1, D) if B * B + C * C == D]
        if not reps:
            continue
        disc_L = D if D % 4 == 1 else 4 * D
        p1, p2 = smallest_prime_norms(disc_L)
        for A in range(-bound, bound + 1):
            if A % 2 == 0 or not is_squarefree(A) or math.gcd(A, D) != 1:
                continue
            for B, C in reps:
                disc = quartic_cyclic_discriminant(A, B, C, D)
                if disc == CASE_NOT_COVERED:
                    notes.append(f"(A,B,C,D)=({A},{B},{C},{D}): case not covered")
                    continue
                rel = Fraction(disc, disc_L * disc_L)
                lam = Fraction(p1 * p2) / rel
                g = _gamma_floor(lam)
                cands.append(
                    Candidate((A, B, C, D), quartic_case(A, B, C, D), disc, lam, g, disc * disc * g * g)
                )
    return _report("Q-2-2", bound, cands, expected=(-1, 2, 1, 5), claimed=2**4 * 5**6, notes=notes)


def _report(family, bound, cands, expected, claimed, notes=None) -> MinimalityReport:
    best = min(c.bound for c in cands)
    winners = [c for c in cands if c.bound == best]
    winner = winners[0]
    return MinimalityReport(
        family=family,
        bound=bound,
        candidates=cands,
        winner=winner,
        unique=len(winners) == 1,
        field_agrees=winner.params == expected and len(winners) == 1,
        bound_agrees=winner.bound == claimed,
        expected_params=expected,
        claimed_bound=claimed,
        notes=list(notes or []),
    )


def enumerate_minimality(family: str, bound: int = 50) -> MinimalityReport:
    if family == "Q-2":
        return enumerate_quadratic(bound)
    if family == "Q-2-2":
        return enumerate_quartic(bound)
    raise ParameterError(f"unknown family {family!r}; expected Q-2 or Q-2-2")
