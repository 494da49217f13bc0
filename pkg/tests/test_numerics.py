from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wgcalc.numerics import (
    N,
    PolynomialN,
    RationalFunctionN,
    evaluate_at,
    falling_factorial,
    parse_exact,
    poly_gcd,
    rising_factorial,
    to_exact_string,
)

small = st.integers(-6, 6)
polys = st.lists(small, min_size=0, max_size=4).map(PolynomialN)
nonzero_polys = st.builds(lambda cs, lead: PolynomialN(cs + [lead]), st.lists(small, max_size=3),
                          st.integers(1, 6) | st.integers(-6, -1))
rfs = st.builds(lambda a, b: RationalFunctionN(a, b), polys, nonzero_polys)


def test_polynomial_basics():
    p = PolynomialN([1, 2, 3])
    assert p.degree == 2 and p.lead == 3
    assert str(p) == "3*n^2 + 2*n + 1"
    assert PolynomialN([0, 0]).is_zero()
    assert p(2) == 17
    assert p.shift(1) == PolynomialN([6, 8, 3])


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == PolynomialN([])


@given(polys, nonzero_polys)
def test_divmod(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(nonzero_polys, nonzero_polys)
def test_gcd_divides(a, b):
    g = poly_gcd(a, b)
    assert g.lead == 1
    assert a.divmod(g)[1].is_zero() and b.divmod(g)[1].is_zero()


def test_gcd_example():
    assert poly_gcd(N * N - 1, N * N + 2 * N + 1) == N + 1


@given(rfs)
def test_normal_form(f):
    if f.num.is_zero():
        assert f.den == PolynomialN([1])
    else:
        assert f.den.lead == 1
        assert poly_gcd(f.num, f.den).degree == 0


@given(rfs, rfs, rfs)
def test_field_ops(a, b, c):
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * a.inverse() == 1


def test_cancellation_gives_structural_equality():
    f = RationalFunctionN(N + 1, N * N - 1)
    assert f == 1 / RationalFunctionN(N - 1)
    assert RationalFunctionN(N * 2, N) == 2
    assert RationalFunctionN(N, N) == Fraction(1)


@pytest.mark.parametrize(
    "f, text",
    [
        (-1 / (RationalFunctionN(N - 1) * N * (N + 1)), "-1/((n-1)*n*(n+1))"),
        (1 / RationalFunctionN((N - 1) * (N + 1)), "1/((n-1)*(n+1))"),
        (RationalFunctionN(N + 1) / 2, "1/2*(n+1)"),
        (RationalFunctionN(N * N - N + 2, N * N * (N + 1)), "(n^2-n+2)/(n^2*(n+1))"),
        (RationalFunctionN(2 * (N + 6), N * (N + 1) * (N + 2) * (N + 3) * (N + 4)),
         "2*(n+6)/(n*(n+1)*(n+2)*(n+3)*(n+4))"),
    ],
)
def test_rendering(f, text):
    assert to_exact_string(f) == text
    assert parse_exact(text) == f


@given(rfs)
def test_string_round_trip(f):
    assert parse_exact(to_exact_string(f)) == f


@given(st.fractions(max_denominator=50))
def test_fraction_round_trip(x):
    assert parse_exact(to_exact_string(x)) == x


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_exact("1/(n")
    with pytest.raises(ValueError):
        parse_exact("2*m")


def test_factorials():
    assert rising_factorial(N, 3) == N * (N + 1) * (N + 2)
    assert falling_factorial(5, 2) == 20
    assert rising_factorial(Fraction(1, 2), 2) == Fraction(3, 4)
    assert rising_factorial(7, 0) == 1
    assert rising_factorial(-2, 3) == 0


@given(st.integers(-5, 10), st.integers(0, 5))
def test_rising_falling_relation(a, k):
    # a^(up k) = (a+k-1)^(down k)
    assert rising_factorial(a, k) == falling_factorial(a + k - 1, k)


@given(rfs, st.integers(-5, 5))
def test_shift_commutes_with_evaluation(f, a):
    g = f.shift(a)
    for x in range(-3, 4):
        try:
            expected = evaluate_at(f, x + a)
        except ZeroDivisionError:
            continue
        assert evaluate_at(g, x) == expected


def test_pole_reported():
    with pytest.raises(ZeroDivisionError, match="pole at n=1"):
        evaluate_at(1 / RationalFunctionN(N - 1), 1)


def test_negate_arg():
    assert (1 / RationalFunctionN(N - 1)).negate_arg() == -1 / RationalFunctionN(N + 1)
