from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramasum.errors import DomainError, PrecisionError
from ramasum.numeric import (
    BigReal,
    PrecisionContext,
    compare_within,
    evaluate_elementary,
    format_decimal,
)


def test_context_defaults():
    ctx = PrecisionContext()
    assert ctx.bits == 256
    assert ctx.digits == 77
    assert ctx.target_tol == ctx.mpf("1e-30")


def test_context_rejects_bad_values():
    with pytest.raises(PrecisionError):
        PrecisionContext(8)
    with pytest.raises(PrecisionError):
        PrecisionContext(64, "1e-40")
    with pytest.raises(PrecisionError):
        PrecisionContext(128, 0)


def test_context_derivations():
    ctx = PrecisionContext(128, "1e-20")
    assert ctx.with_guard(32).bits == 160
    assert ctx.with_tol("1e-10").target_tol == ctx.mpf("1e-10")
    assert ctx.with_bits(512).target_tol == ctx.target_tol
    assert PrecisionContext.for_tolerance("1e-30").bits >= 256


def test_mpf_conversion_forms(ctx):
    third = ctx.mpf(Fraction(1, 3))
    assert ctx.mpf("1/3") == third
    assert ctx.mpf(BigReal(third, 0)) == third
    assert ctx.mpf(2) == 2


def test_exp_of_zero_is_exact(ctx):
    r = evaluate_elementary("exp", [0], ctx)
    assert r.value == 1 and r.err == 0


@pytest.mark.parametrize(
    "name,args,ref",
    [
        ("exp", ["1.25"], lambda: mpmath.exp(mpmath.mpf("1.25"))),
        ("log", ["7"], lambda: mpmath.log(7)),
        ("sin", ["0.3"], lambda: mpmath.sin(mpmath.mpf("0.3"))),
        ("atan", ["2"], lambda: mpmath.atan(2)),
        ("pow", ["2", "0.5"], lambda: mpmath.sqrt(2)),
        ("pi", [], lambda: +mpmath.pi),
        ("const_e", [], lambda: +mpmath.e),
    ],
)
def test_elementary_against_mpmath(ctx, name, args, ref):
    r = evaluate_elementary(name, args, ctx)
    with mpmath.workdps(100):
        expect = ref()
    assert abs(r.value - expect) <= r.err + mpmath.mpf("1e-75")


def test_elementary_errors(ctx):
    with pytest.raises(DomainError):
        evaluate_elementary("log", [0], ctx)
    with pytest.raises(DomainError):
        evaluate_elementary("pow", ["-2", "0.5"], ctx)
    with pytest.raises(ValueError):
        evaluate_elementary("cosh", [1], ctx)
    with pytest.raises(TypeError):
        evaluate_elementary("exp", [1, 2], ctx)


def test_error_radius_propagates(ctx):
    x = BigReal(ctx.mpf(1), ctx.mpf("1e-10"))
    r = evaluate_elementary("exp", [x], ctx)
    assert r.err > ctx.mpf("2.7e-10")


def test_bigreal_arithmetic(ctx):
    a = BigReal(ctx.mpf(2), ctx.mpf("1e-20"))
    b = BigReal(ctx.mpf(3), ctx.mpf("2e-20"))
    s = a + b
    assert s.value == 5 and s.err >= ctx.mpf("3e-20")
    assert (a - b).value == -1
    assert (a * b).value == 6
    assert float(a / b) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        BigReal(1, -1)


def test_compare_within():
    c = compare_within(1.0, 1.5, 0.1)
    assert not c.ok and c.diff == -0.5
    assert compare_within(BigReal(1.0, 0.3), 1.5, 0.25).ok


def test_format_decimal_scientific(ctx):
    s = format_decimal(ctx.mpf(1) / 3, 10)
    assert s == "3.333333333e-1"


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=Fraction(1, 100), max_value=50))
def test_exp_log_roundtrip(q):
    ctx = PrecisionContext(192)
    lg = evaluate_elementary("log", [q], ctx)
    back = evaluate_elementary("exp", [lg], ctx)
    assert compare_within(back, ctx.mpf(q), ctx.mpf("1e-50")).ok
