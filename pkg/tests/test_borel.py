from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramasum.borel import (
    BorelSeries,
    ClosedForm,
    LaplaceConfig,
    PadeDiagonal,
    TailModel,
    alternating_factorial_series,
    borel_sum,
    geometric_borel_series,
    laplace_transform,
    pade_continuation,
)
from ramasum.errors import (
    ContinuationError,
    DomainError,
    InsufficientCoefficientsError,
    TailBoundError,
)


def test_laplace_polynomial(ctx):
    r = laplace_transform(lambda x: x**2, "0.5", LaplaceConfig(tail_bound_model="power"), ctx)
    assert abs(r.value - 16) < mpmath.mpf("1e-25")


@pytest.mark.parametrize("z", ["0.5", "1", "2", "7"])
def test_laplace_shifted_reciprocal(ctx, z):
    r = laplace_transform(lambda x: 1 / (x + 1), z, None, ctx)
    with mpmath.workdps(90):
        zv = mpmath.mpf(z)
        ref = mpmath.exp(zv) * mpmath.e1(zv)
    assert abs(r.value - ref) < mpmath.mpf("1e-25")
    assert r.err < mpmath.mpf("1e-25")


def test_laplace_digamma(ctx):
    mp = ctx.mp
    r = laplace_transform(lambda x: mp.digamma(x + 1), 1, None, ctx)
    with mpmath.workdps(60):
        ref = mpmath.quad(lambda x: mpmath.exp(-x) * mpmath.digamma(x + 1), [0, 1, 10, 50, mpmath.inf])
    assert abs(r.value - ref) < mpmath.mpf("1e-25")


def test_laplace_graded_endpoint(ctx):
    # x^-1/2 endpoint singularity: L = sqrt(pi / z)
    mp = ctx.mp
    cfg = LaplaceConfig(graded_levels=20, tail_bound_model=TailModel("power", p=0))
    r = laplace_transform(lambda x: 1 / mp.sqrt(x), 1, cfg, ctx)
    assert abs(r.value - mp.sqrt(mp.pi)) < mpmath.mpf("1e-25")


def test_laplace_tail_failure(ctx128):
    mp = ctx128.mp
    cfg = LaplaceConfig(tail_bound_model=TailModel("exp", p=2), max_doublings=2)
    with pytest.raises(TailBoundError):
        laplace_transform(lambda x: mp.exp(2 * x), 1, cfg, ctx128)


def test_tail_model_validation():
    with pytest.raises(ValueError):
        TailModel("cubic")
    with pytest.raises(ValueError):
        LaplaceConfig(panel_order=2)


def test_alternating_factorial_closed_form(ctx):
    v = borel_sum(alternating_factorial_series(), 1, None, ctx)
    with mpmath.workdps(90):
        ref = mpmath.e * mpmath.e1(1)
    assert abs(v.value - ref) < mpmath.mpf("1e-25")


def test_pade_path_matches_closed_form(ctx):
    series = alternating_factorial_series()
    closed = borel_sum(series, "1.5", None, ctx).value
    pade = borel_sum(BorelSeries(series.coefficients, PadeDiagonal(10)), "1.5", None, ctx).value
    assert abs(closed - pade) < mpmath.mpf("1e-20")


def test_geometric_series(ctx):
    v = borel_sum(geometric_borel_series(Fraction(1, 2)), 2, None, ctx)
    assert abs(v.value - ctx.mpf(1) / ctx.mpf("1.5")) < mpmath.mpf("1e-25")


def test_pole_on_path_is_reported(ctx128):
    # c_n = n! has Borel transform 1/(1 - x), a pole on the positive axis
    series = BorelSeries(lambda n: math.factorial(n), PadeDiagonal(4))
    with pytest.raises(ContinuationError):
        borel_sum(series, 1, None, ctx128)


def test_not_borel_summable(ctx128):
    series = BorelSeries(lambda n: math.factorial(n) ** 2, PadeDiagonal(8))
    with pytest.raises(DomainError):
        borel_sum(series, 1, None, ctx128)


def test_insufficient_coefficients(ctx128):
    with pytest.raises(InsufficientCoefficientsError):
        pade_continuation([1, 2, 3], 2, ctx128)


def test_pade_exact_rational(ctx):
    a = [Fraction((-1) ** n) for n in range(11)]
    p = pade_continuation(a, 5, ctx)
    for x in ("0.3", "4", "17"):
        assert abs(p(x, ctx) - 1 / (1 + ctx.mpf(x))) < mpmath.mpf("1e-70")
    assert p.real_poles(0, 100, ctx) == []


def test_pade_of_digamma_taylor(ctx):
    mp = ctx.mp
    # psi(x + 1) = -gamma + sum_{k>=1} (-1)^(k+1) zeta(k+1) x^k
    a = [-mp.euler] + [(-1) ** (k + 1) * mp.zeta(k + 1) for k in range(1, 21)]
    p = pade_continuation(a, 10, ctx)
    for x in ("0.5", "2", "3"):
        assert abs(p(x, ctx) - mp.digamma(ctx.mpf(x) + 1)) < mpmath.mpf("1e-10")


_roots = st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=3)


@settings(max_examples=30, deadline=None)
@given(_roots, st.integers(min_value=-5, max_value=5).filter(lambda c: c != 0))
def test_pade_recovers_rational_functions(roots, c):
    from ramasum.numeric import PrecisionContext

    ctx = PrecisionContext(192)
    # g(x) = c / prod (1 + x/r): Taylor coefficients are exact rationals
    m = len(roots)
    K = 2 * m + 1
    coeffs = [Fraction(0)] * K
    coeffs[0] = Fraction(c)
    for r in roots:
        nxt = [Fraction(0)] * K
        for i in range(K):
            for j in range(i + 1):
                nxt[i] += coeffs[j] * Fraction(-1, r) ** (i - j)
        coeffs = nxt
    p = pade_continuation(coeffs, m, ctx)
    x = ctx.mpf("0.7")
    exact = ctx.mpf(c)
    for r in roots:
        exact /= 1 + x / r
    assert abs(p(x, ctx) - exact) < mpmath.mpf("1e-50")
