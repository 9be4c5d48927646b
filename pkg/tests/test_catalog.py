from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from ramasum.catalog import (
    ExpOverN,
    ExpTerm,
    LogOverPower,
    MonomialTimesHarmonic,
    PowerTerm,
    closed_form,
    monomial_sum,
    r_function,
)
from ramasum.errors import DomainError
from ramasum.special import bernoulli_number

TOL = mpmath.mpf("1e-45")


def val(out):
    return out[0] if isinstance(out, tuple) else out


@pytest.mark.parametrize("s", ["-3", "-1", "0", "0.5", "2", "3.5"])
def test_power_term(ctx, s):
    # sum^R n^-s = zeta(s) - 1/(s - 1) away from s = 1
    with mpmath.workdps(90):
        sv = mpmath.mpf(s)
        ref = mpmath.zeta(sv) - 1 / (sv - 1)
    assert abs(val(closed_form(PowerTerm(ctx.mpf(s)), ctx)) - ref) < TOL


def test_power_term_at_one_is_gamma(ctx):
    with mpmath.workdps(90):
        assert abs(val(closed_form(PowerTerm(1), ctx)) - mpmath.euler) < TOL


@pytest.mark.parametrize("s", ["-2", "0", "0.5", "2"])
def test_log_over_power(ctx, s):
    with mpmath.workdps(90):
        sv = mpmath.mpf(s)
        ref = -mpmath.zeta(sv, derivative=1) - 1 / (sv - 1) ** 2
    assert abs(val(closed_form(LogOverPower(ctx.mpf(s)), ctx)) - ref) < TOL


def test_log_over_power_at_one_is_stieltjes(ctx):
    with mpmath.workdps(90):
        ref = mpmath.stieltjes(1)
    assert abs(val(closed_form(LogOverPower(1), ctx)) - ref) < TOL


@pytest.mark.parametrize("z", ["-2", "-0.5", "0.5", "3"])
def test_exp_term(ctx, z):
    with mpmath.workdps(90):
        zv = mpmath.mpf(z)
        ref = mpmath.exp(zv) / (1 - mpmath.exp(zv)) + mpmath.exp(zv) / zv
    assert abs(val(closed_form(ExpTerm(ctx.mpf(z)), ctx)) - ref) < TOL


def test_exp_term_domain(ctx):
    with pytest.raises(DomainError):
        closed_form(ExpTerm(ctx.mpf(4)), ctx)
    # z = 0 degenerates to sum^R 1 = 1/2
    assert val(closed_form(ExpTerm(0), ctx)) == ctx.mpf(1) / 2


@pytest.mark.parametrize("z", ["0.3", "1", "2.5"])
def test_exp_over_n(ctx, z):
    with mpmath.workdps(90):
        zv = mpmath.mpf(z)
        ref = -mpmath.log(1 - mpmath.exp(-zv)) - mpmath.e1(zv)
    assert abs(val(closed_form(ExpOverN(ctx.mpf(z)), ctx)) - ref) < TOL


def test_monomial_sums():
    for k in range(1, 10):
        assert monomial_sum(k) == (1 - bernoulli_number(k + 1)) / (k + 1)
    assert monomial_sum(0) == Fraction(1, 2)


def test_n_times_harmonic(ctx):
    v = val(closed_form(MonomialTimesHarmonic(1, True), ctx))
    assert mpmath.nstr(v, 17) == "0.36198913753808355"


@pytest.mark.parametrize("x", ["1", "1.5", "3"])
def test_r_function_difference_equation(ctx, x):
    # R(x) - R(x + 1) = 1/x for the harmonic R-function
    key = PowerTerm(1)
    xv = ctx.mpf(x)
    d = val(r_function(key, xv, ctx)) - val(r_function(key, xv + 1, ctx))
    assert abs(d - 1 / xv) < TOL


def test_r_function_normalized(ctx):
    for key in (PowerTerm(1), PowerTerm(ctx.mpf("2.5")), ExpTerm(ctx.mpf("0.5"))):
        with mpmath.workdps(60):
            q = mpmath.quad(lambda t: val(r_function(key, t, ctx)), [1, 2])
        assert abs(q) < mpmath.mpf("1e-40")
