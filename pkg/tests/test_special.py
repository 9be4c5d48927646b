from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramasum.errors import DomainError, PoleError
from ramasum.numeric import PrecisionContext
from ramasum.special import (
    BernoulliCache,
    bernoulli_number,
    bernoulli_polynomial,
    digamma,
    ei_negative,
    euler_gamma,
    euler_gamma_em,
    harmonic_number,
    hurwitz_zeta,
    hurwitz_zeta_and_derivative,
    periodic_bernoulli,
    polygamma,
    polylog,
    zeta,
    zeta_and_derivative,
)

TOL = mpmath.mpf("1e-60")


def close(a, b, tol=TOL):
    return abs(mpmath.mpf(a) - mpmath.mpf(b)) < tol


def test_bernoulli_known_values():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(12) == Fraction(-691, 2730)
    assert bernoulli_number(13) == 0


def test_bernoulli_matches_mpmath():
    for n in range(0, 60, 3):
        with mpmath.workdps(80):
            ref = mpmath.bernoulli(n)
        assert close(Fraction(bernoulli_number(n)).numerator / mpmath.mpf(Fraction(bernoulli_number(n)).denominator), ref, mpmath.mpf("1e-40") * max(1, abs(ref)))


def test_bernoulli_cache_grows():
    cache = BernoulliCache()
    assert cache[20] == Fraction(-174611, 330)
    assert cache[4] == Fraction(-1, 30)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=40))
def test_bernoulli_recurrence(n):
    # sum_{k<n} C(n, k) B_k = 0 for n >= 2
    from math import comb

    assert sum(comb(n, k) * bernoulli_number(k) for k in range(n)) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.fractions(min_value=-3, max_value=3))
def test_bernoulli_polynomial_difference(n, x):
    # B_n(x + 1) - B_n(x) = n x^(n-1)
    assert bernoulli_polynomial(n, x + 1) - bernoulli_polynomial(n, x) == n * x ** (n - 1)


def test_periodic_bernoulli(ctx):
    assert close(periodic_bernoulli(2, "2.5", ctx), ctx.mpf(-1) / 12, mpmath.mpf("1e-70"))
    assert close(periodic_bernoulli(3, "7.25", ctx), ctx.mpf(bernoulli_polynomial(3, Fraction(1, 4))), mpmath.mpf("1e-70"))


def test_harmonic_numbers():
    assert harmonic_number(0) == 0
    assert harmonic_number(4) == Fraction(25, 12)
    assert harmonic_number(3, 2) == Fraction(49, 36)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=200), st.integers(min_value=1, max_value=4))
def test_harmonic_recurrence(n, j):
    assert harmonic_number(n + 1, j) - harmonic_number(n, j) == Fraction(1, (n + 1) ** j)


def test_euler_gamma_two_ways(ctx):
    assert close(euler_gamma_em(ctx), euler_gamma(ctx), mpmath.mpf("1e-70"))
    with mpmath.workdps(90):
        assert close(euler_gamma(ctx), mpmath.euler, mpmath.mpf("1e-70"))


@pytest.mark.parametrize("x", ["0.25", "1", "2.5", "17", "123.5"])
@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_polygamma_vs_mpmath(ctx, m, x):
    got = polygamma(m, x, ctx)
    with mpmath.workdps(90):
        ref = mpmath.polygamma(m, mpmath.mpf(x))
    assert close(got, ref, mpmath.mpf("1e-60") * max(1, abs(ref)))


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10), max_value=40))
def test_digamma_recurrence(q):
    ctx = PrecisionContext(192)
    x = ctx.mpf(q)
    assert abs(digamma(x + 1, ctx) - digamma(x, ctx) - 1 / x) < ctx.mpf("1e-45")


def test_digamma_poles(ctx):
    with pytest.raises((PoleError, DomainError)):
        digamma(-2, ctx)


@pytest.mark.parametrize("s,x", [("2", "1"), ("3", "2"), ("1.5", "0.5"), ("-1", "1"), ("-2.5", "3"), ("0.5", "1.25")])
def test_hurwitz_vs_mpmath(ctx, s, x):
    got = hurwitz_zeta(x, s, ctx)
    with mpmath.workdps(90):
        ref = mpmath.zeta(mpmath.mpf(s), mpmath.mpf(x))
    assert close(got, ref, mpmath.mpf("1e-55"))


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=Fraction(-3), max_value=Fraction(5)).filter(lambda s: s != 1),
       st.fractions(min_value=Fraction(1, 4), max_value=10))
def test_hurwitz_difference(s, x):
    # zeta(s, x) - zeta(s, x + 1) = x^-s
    ctx = PrecisionContext(160)
    s_, x_ = ctx.mpf(s), ctx.mpf(x)
    d = hurwitz_zeta(x_, s_, ctx) - hurwitz_zeta(x_ + 1, s_, ctx)
    assert abs(d - x_ ** (-s_)) < ctx.mpf("1e-35") * max(1, abs(d))


def test_zeta_derivatives(ctx):
    v, d = zeta_and_derivative(-1, ctx)
    assert close(v, mpmath.mpf(-1) / 12)
    with mpmath.workdps(90):
        ref = mpmath.zeta(-1, derivative=1)
    assert close(d, ref)
    assert str(mpmath.nstr(d, 14)) == "-0.16542114370045"
    v2, d2 = hurwitz_zeta_and_derivative("0.5", "0.5", ctx)
    with mpmath.workdps(90):
        assert close(d2, mpmath.zeta(0.5, 0.5, derivative=1), mpmath.mpf("1e-55"))
    with pytest.raises(PoleError):
        zeta(1, ctx)


def test_ei_negative(ctx):
    v = ei_negative(1, ctx)
    with mpmath.workdps(90):
        assert close(v, mpmath.ei(-1))
    assert mpmath.nstr(v, 14) == "-0.21938393439552"
    for z in ("0.1", "3", "40"):
        with mpmath.workdps(90):
            ref = mpmath.ei(-mpmath.mpf(z))
        assert close(ei_negative(z, ctx), ref, mpmath.mpf("1e-60") * max(1, abs(ref)))


@pytest.mark.parametrize("j", [1, 2, 3, 5])
@pytest.mark.parametrize("z", ["0.05", "0.3", "1", "3"])
def test_polylog_vs_mpmath(ctx, j, z):
    got = polylog(j, z, ctx)
    with mpmath.workdps(90):
        ref = mpmath.polylog(j, mpmath.exp(-mpmath.mpf(z)))
    assert close(got, ref, mpmath.mpf("1e-40"))


def test_polylog_examples(ctx):
    assert mpmath.nstr(polylog(1, 1, ctx), 14) == "0.45867514538708"
    with mpmath.workdps(90):
        assert close(polylog(2, 0, ctx), mpmath.pi**2 / 6)
    with pytest.raises(DomainError):
        polylog(1, 0, ctx)
    with pytest.raises(DomainError):
        polylog(2, -1, ctx)
