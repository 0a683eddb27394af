from fractions import Fraction

import pytest

from natorder.exactfield.field import (
    QQ,
    FieldAutomorphism,
    FieldMismatchError,
    NumberField,
    absolute_norm,
    absolute_trace,
    galois_norm,
    integral_coordinates,
    is_integral,
    relative_norm,
    relative_trace,
    trace_form_discriminant,
)
from natorder.exactfield.linalg import det, solve
from natorder.exactfield.parse import ParseError, format_element, parse_element
from natorder.exactfield.poly import add, divmod_, mul, trim, xgcd
from natorder.exactfield.residue import GF, LocalPrimeData, NotIntegralError
from natorder.factored import Factored, factorize


@pytest.fixture
def tower():
    Qi = NumberField("Qi", QQ, [1, 0, 1], "i")
    Qi.set_integral_basis(["1", "i"])
    K = NumberField("K", Qi, [-2, 0, 1], "s")  # Q(i, sqrt 2)
    K.set_integral_basis(["1", "s"])
    return Qi, K


def test_eisenstein_cube_root_of_unity():
    E = NumberField("E", QQ, [1, 1, 1], "w")
    w = E.gen
    assert w**3 == 1
    assert w * w == -1 - w
    assert absolute_norm(w) == 1
    assert absolute_trace(w) == -1


def test_inverse_and_division(tower):
    Qi, K = tower
    x = K.coerce("1 + i + 3*s")
    assert x * x.inverse() == 1
    assert (x / x) == K.one
    with pytest.raises(ZeroDivisionError):
        K.zero.inverse()


def test_tower_norms_compose(tower):
    Qi, K = tower
    x = K.coerce("2 + i*s - 3*s")
    n_rel = relative_norm(x, Qi)
    assert absolute_norm(n_rel) == absolute_norm(x)
    assert relative_trace(K.coerce("s"), Qi) == 0
    assert relative_norm(K.coerce("s"), Qi) == -2


def test_descend_and_lies_in(tower):
    Qi, K = tower
    y = K.coerce("3 + 2*i")
    assert y.lies_in(Qi)
    assert y.descend(Qi) == Qi.coerce("3 + 2*i")
    assert not K.coerce("s").lies_in(Qi)


def test_cross_tower_arithmetic_is_rejected(tower):
    Qi, K = tower
    other = NumberField("M", QQ, [-5, 0, 1], "r")
    with pytest.raises(FieldMismatchError):
        _ = K.gen + other.gen


def test_parse_and_format_round_trip(tower):
    Qi, K = tower
    for text in ["1/2*i + 3*s", "0", "-1 - i*s", "(1+i)^3"]:
        x = parse_element(K, text)
        assert parse_element(K, format_element(x)) == x
    assert format_element(parse_element(Qi, "(1+i)^2")) == "2*i"
    with pytest.raises(ParseError):
        parse_element(K, "import os")
    with pytest.raises(ParseError):
        parse_element(K, "t + 1")


def test_automorphism_order_and_fixing(tower):
    Qi, K = tower
    conj = FieldAutomorphism(Qi, Qi.coerce("-i"), None, "c")
    neg_s = FieldAutomorphism(K, K.coerce("-s"), None, "n")
    both = FieldAutomorphism(K, K.coerce("s"), conj, "b")
    assert neg_s.is_valid() and both.is_valid()
    assert neg_s.order == 2
    assert neg_s.fixes(Qi)
    assert not both.fixes(Qi)
    assert galois_norm(K.coerce("1 + s"), neg_s) == -1


def test_invalid_automorphism_detected():
    Qi = NumberField("Qi", QQ, [1, 0, 1], "i")
    bad = FieldAutomorphism(Qi, Qi.coerce("2*i"), None, "bad")
    assert not bad.is_valid()


def test_integral_basis_coordinates():
    E = NumberField("E", QQ, [-5, 0, 1], "r")
    E.set_integral_basis(["1", "1/2 + 1/2*r"])
    half = E.coerce("1/2 + 1/2*r")
    assert integral_coordinates(half, E) == [0, 1]
    assert is_integral(half, E)
    assert not is_integral(E.coerce("1/2*r"), E)
    # Q(sqrt 5) has discriminant 5
    assert trace_form_discriminant([E.one, half], QQ) == 5


def test_linear_algebra_helpers():
    m = [[Fraction(2), Fraction(1), Fraction(0)], [Fraction(1), Fraction(3), Fraction(1)], [Fraction(0), Fraction(1), Fraction(4)]]
    assert det(m) == 18
    x = solve(m, [Fraction(1), Fraction(2), Fraction(3)])
    assert [sum(m[i][j] * x[j] for j in range(3)) for i in range(3)] == [1, 2, 3]
    big = [[Fraction(int(i == j) * 2 + (i + j) % 2) for j in range(5)] for i in range(5)]
    assert det(big) == det([list(r) for r in big])


def test_polynomial_xgcd():
    a = [Fraction(c) for c in [-1, 0, 1]]
    b = [Fraction(c) for c in [1, 1]]
    q, r = divmod_(a, b)
    assert r == [] or all(c == 0 for c in r)
    f1 = [Fraction(c) for c in [1, 0, 1]]
    f2 = [Fraction(c) for c in [2, 1]]
    g, s, t = xgcd(f1, f2)
    assert trim(add(mul(s, f1), mul(t, f2))) == trim(g)
    assert len(trim(g)) == 1  # coprime


def test_finite_field_arithmetic():
    F9 = GF(3, [1, 0, 1])
    assert F9.q == 9
    for a in range(1, 9):
        assert F9.mul(a, F9.inv(a)) == 1
    orders = sorted(F9.order(a) for a in range(1, 9))
    assert orders.count(8) == 4  # phi(8) generators
    g = next(a for a in range(1, 9) if F9.order(a) == 8)
    assert F9.in_power_subgroup(F9.pow(g, 2), 2)
    assert not F9.in_power_subgroup(g, 2)
    with pytest.raises(ValueError):
        GF(3, [2, 0, 1])  # x^2 + 2 = (x-1)(x+1) mod 3


def test_local_prime_reduction():
    Qi = NumberField("Qi", QQ, [1, 0, 1], "i")
    Qi.set_integral_basis(["1", "i"])
    p5 = LocalPrimeData("p5", Qi, 5, (0, 1), {"i": 2}, 1, 1, "2 - i")
    assert p5.is_valid()
    assert p5.reduce(Qi.coerce("3 + i")) == 0  # 3 + i = (1 + i)(2 - i)
    assert p5.reduce(Qi.coerce("i")) == 2
    with pytest.raises(NotIntegralError):
        p5.reduce(Qi.coerce("1/5"))


def test_factored_numbers():
    assert factorize(36) == {2: 2, 3: 2}
    f = Factored(2**6 * 3**12 * 13**8)
    assert str(f) == "2^6 * 3^12 * 13^8"
    assert f.to_json() == {"2": 6, "3": 12, "13": 8}
    assert Factored(6) ** 2 == Factored(36)
    assert Factored(6).divides(Factored(36))
    assert Factored(16) < Factored(17)
