from __future__ import annotations

import mpmath
import pytest

from ramasum.engine import (
    EulerMaclaurinConfig,
    Strategy,
    euler_sum_h,
    interpolation_integral,
    ramanujan_sum,
    residue_h,
    run_strategy,
    sum_via_cgt,
    sum_via_euler_maclaurin,
    sum_via_taylor_coefficients,
    translate_shift,
)
from ramasum.errors import (
    ConvergenceError,
    DomainError,
    InadmissibleError,
    MissingParameterError,
    PoleError,
)
from ramasum.expr import parse
from ramasum.numeric import PrecisionContext


def convergent_oracle(f, dps=60):
    """sum f(n) - int_1^inf f for geometrically decaying f."""
    with mpmath.workdps(dps):
        s = mpmath.nsum(f, [1, mpmath.inf])
        i = mpmath.quad(f, [1, 2, 4, 8, 16, 32, 64, mpmath.inf])
        return s - i


def _z():
    return mpmath.mpf("0.7")


CONVERGENT = {
    "exp(-n*z)/n": lambda n: mpmath.exp(-n * _z()) / n,
    "H(n)*exp(-n*z)": lambda n: (mpmath.digamma(n + 1) + mpmath.euler) * mpmath.exp(-n * _z()),
    "log(n)*exp(-n*z)": lambda n: mpmath.log(n) * mpmath.exp(-n * _z()),
    "H(n,2)*exp(-n*z)": lambda n: (mpmath.zeta(2) - mpmath.zeta(2, n + 1)) * mpmath.exp(-n * _z()),
    "n^2*exp(-n*z)": lambda n: n**2 * mpmath.exp(-n * _z()),
}


@pytest.mark.parametrize("text", sorted(CONVERGENT))
def test_convergent_terms_vs_oracle(ctx, text):
    r = ramanujan_sum(parse(text), "0.7", ctx)
    ref = convergent_oracle(CONVERGENT[text])
    assert abs(r.value.value - ref) < mpmath.mpf("1e-25")


@pytest.mark.parametrize("text", sorted(CONVERGENT))
def test_strategies_agree(ctx, text):
    expr = parse(text)
    a = sum_via_cgt(expr, "0.7", ctx).value.value
    b = sum_via_euler_maclaurin(expr, "0.7", None, ctx).value.value
    assert abs(a - b) < mpmath.mpf("1e-25")


def test_classic_constants(ctx):
    with mpmath.workdps(90):
        g = +mpmath.euler
        h = 1.5 * g + mpmath.mpf(1) / 2 - mpmath.log(mpmath.sqrt(2 * mpmath.pi))
        lg = -1 + mpmath.log(mpmath.sqrt(2 * mpmath.pi))
    for text, ref in (("1/n", g), ("H(n)", h), ("log(n)", lg)):
        r = sum_via_euler_maclaurin(parse(text), None, EulerMaclaurinConfig(), ctx)
        assert abs(r.value.value - ref) < mpmath.mpf("1e-30")
        assert r.strategy == Strategy.EULER_MACLAURIN


def test_em_error_estimate_is_honest(ctx128):
    with mpmath.workdps(60):
        ref = mpmath.euler
    r = sum_via_euler_maclaurin(parse("1/n"), None, EulerMaclaurinConfig(M=8, N=6, adaptive_order=False), ctx128)
    assert abs(r.value.value - ref) <= r.err * 4 + mpmath.mpf("1e-35")


def test_catalog_and_cross_check(ctx):
    r = ramanujan_sum(parse("H(n)*exp(-n*z)"), "0.5", ctx)
    assert r.strategy == Strategy.CLOSED_FORM
    assert "cross_check" in r.diagnostics


def test_taylor_path_matches_closed_form(ctx128):
    expr = parse("exp(n*z)*H(n)")
    a = sum_via_taylor_coefficients(expr, "0.5", None, ctx128).value.value
    b = sum_via_euler_maclaurin(expr, "0.5", None, ctx128).value.value
    assert abs(a - b) < mpmath.mpf("1e-14")


def test_taylor_inadmissible(ctx128):
    with pytest.raises(InadmissibleError):
        sum_via_taylor_coefficients(parse("exp(n*z)"), "3.2", None, ctx128)


def test_cgt_rejects_divergent(ctx128):
    with pytest.raises(ConvergenceError):
        sum_via_cgt(parse("n"), None, ctx128)


def test_missing_z(ctx128):
    with pytest.raises(MissingParameterError):
        ramanujan_sum(parse("exp(-n*z)"), None, ctx128)


def test_log_over_n_is_stieltjes(ctx):
    r = ramanujan_sum(parse("log(n)/n"), None, ctx)
    assert r.strategy == Strategy.CLOSED_FORM
    with mpmath.workdps(90):
        assert abs(r.value.value - mpmath.stieltjes(1)) < mpmath.mpf("1e-30")


def test_run_strategy_dispatch(ctx128):
    r = run_strategy(Strategy.EULER_MACLAURIN, parse("1/n^2"), None, ctx128)
    with mpmath.workdps(60):
        assert abs(r.value.value - (mpmath.zeta(2) - 1)) < mpmath.mpf("1e-14")


def test_translation_property(ctx):
    r = translate_shift(parse("1/n"), 1, None, ctx)
    with mpmath.workdps(90):
        ref = mpmath.euler - 1 + mpmath.log(2)
    assert abs(r.value.value - ref) < mpmath.mpf("1e-30")


def test_linearity(ctx):
    a = ramanujan_sum(parse("log(n)"), None, ctx).value.value
    b = ramanujan_sum(parse("H(n)"), None, ctx).value.value
    c = ramanujan_sum(parse("3*log(n) - 2*H(n)"), None, ctx, use_catalog=False).value.value
    assert abs(c - (3 * a - 2 * b)) < mpmath.mpf("1e-25")


@pytest.mark.parametrize("s,ref", [(2, lambda: 2 * mpmath.zeta(3)), (3, lambda: mpmath.mpf(5) / 4 * mpmath.zeta(4)),
                                   (4, lambda: 3 * mpmath.zeta(5) - mpmath.zeta(2) * mpmath.zeta(3))])
def test_euler_sums(ctx, s, ref):
    with mpmath.workdps(90):
        expect = ref()
    assert abs(euler_sum_h(s, ctx).value - expect) < mpmath.mpf("1e-60")


def test_h_direct_and_continuation_agree(ctx128):
    a = euler_sum_h("1.5", ctx128, method="direct").value
    b = euler_sum_h("1.5", ctx128, method="continuation").value
    assert abs(a - b) < mpmath.mpf("1e-14")


def test_h_poles_and_domains(ctx128):
    with pytest.raises(PoleError):
        euler_sum_h(1, ctx128)
    with pytest.raises(PoleError):
        euler_sum_h(-1, ctx128)
    with pytest.raises(DomainError):
        euler_sum_h("0.5", ctx128, method="direct")


def test_interpolation_integral(ctx128):
    v, e = interpolation_integral("1.5", ctx128)
    with mpmath.workdps(60):
        s = mpmath.mpf("1.5")
        ref = -mpmath.pi / mpmath.sin(mpmath.pi * s) * mpmath.zeta(s)
        # independent quadrature of the same integral
        q = mpmath.quad(lambda x: x ** (-s) * (mpmath.digamma(x + 1) + mpmath.euler), [0, 1, mpmath.inf])
    assert abs(v - ref) < mpmath.mpf("1e-10")
    assert abs(q - ref) < mpmath.mpf("1e-10")


def test_residue(ctx128):
    v = residue_h(1, "1e-3", ctx128)
    v = v.value if hasattr(v, "value") else v
    assert abs(v + mpmath.mpf(1) / 12) < mpmath.mpf("1e-4")


@pytest.mark.parametrize("kw", [{"M": 1}, {"N": 15}, {"N": 66, "max_order": 66}, {"max_order": 14}, {"max_order": 33}])
def test_em_config_validation(kw):
    with pytest.raises(ValueError):
        EulerMaclaurinConfig(**kw)
