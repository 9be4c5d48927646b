from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramasum.errors import TruncationError
from ramasum.formal import (
    FormalSeries,
    bernoulli_gf,
    binomial_transform,
    corollary_rational,
    exp_series,
    formal_series,
    inv_one_minus_exp,
    lemma1_qpart,
    log_one_minus_exp_over_z,
    series_value,
)
from ramasum.special import bernoulli_number

K = 12


def test_exp_times_exp_neg():
    e = exp_series(K)
    neg = FormalSeries.from_function(lambda k: Fraction((-1) ** k, math.factorial(k)), K)
    assert e * neg == FormalSeries.constant(1, K)


def test_bernoulli_gf_is_z_over_expm1():
    z = FormalSeries(1, (1,), K + 1)
    expm1 = exp_series(K + 1) - FormalSeries.constant(1, K + 1)
    ratio = (z / expm1).truncate(K)
    assert ratio == bernoulli_gf(K)
    assert bernoulli_gf(K).coeff(2) == bernoulli_number(2) / 2


def test_laurent_inverse():
    inv = inv_one_minus_exp(K)
    assert inv.valuation() == -1
    assert inv.coeff(-1) == 1 and inv.coeff(0) == Fraction(1, 2)


def test_log_exp_roundtrip():
    s = exp_series(K) - FormalSeries.constant(0, K)
    assert s.log().exp() == s


def test_log_one_minus_exp_numeric(ctx):
    v = series_value(log_one_minus_exp_over_z(30), "0.3", ctx)
    with mpmath.workdps(60):
        z = mpmath.mpf("0.3")
        ref = mpmath.log((1 - mpmath.exp(-z)) / z)
    assert abs(v - ref) < mpmath.mpf("1e-25")


def test_corollary_rational_truncation():
    with pytest.raises(TruncationError):
        formal_series("corollary_rational", 2, k=1)
    r = formal_series("corollary_rational", 6, k=1)
    assert r.coeff(0) == corollary_rational(1)


def test_lemma1_upper_readings_agree():
    assert lemma1_qpart(10, "k") == lemma1_qpart(10, "k+1")


def test_binomial_transform_simple():
    assert binomial_transform([Fraction(1)] * 4) == [1, 0, 0, 0]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9), max_size=10))
def test_binomial_transform_involution(values):
    assert binomial_transform(binomial_transform(values)) == values


_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=20)
_series = st.lists(_fracs, min_size=1, max_size=6).map(lambda cs: FormalSeries(0, tuple(cs), 6))


@settings(max_examples=60, deadline=None)
@given(_series, _series, _series)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(_series.filter(lambda s: s.coeff(0) != 0))
def test_inverse(a):
    assert a * a.inverse() == FormalSeries.constant(1, 6)


@settings(max_examples=60, deadline=None)
@given(_series)
def test_derivative_of_integral(a):
    assert a.integral().derivative() == a.truncate(a.order)


def test_named_series_examples():
    assert log_one_minus_exp_over_z(K).coeff(1) == Fraction(-1, 2)
    inv = inv_one_minus_exp(K)
    assert [inv.coeff(k) for k in (-1, 0, 1)] == [1, Fraction(1, 2), Fraction(1, 12)]
    assert corollary_rational(0) == Fraction(-1, 2)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_corollary_rational_stable_in_K(k):
    assert len({corollary_rational(k, K) for K in range(k + 2, k + 8)}) == 1
