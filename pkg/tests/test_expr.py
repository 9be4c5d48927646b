from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramasum.errors import MissingParameterError, SeriesSyntaxError, UnknownFunctionError
from ramasum.expr import (
    Const,
    ConvergentDecaying,
    Div,
    Exp,
    ExponentialGrowing,
    Harmonic,
    Mul,
    Neg,
    ParamZ,
    PolynomialBounded,
    Pow,
    VarN,
    classify_growth,
    derivatives,
    differentiate,
    evaluate,
    parse,
    to_text,
)
from ramasum.numeric import PrecisionContext

N, Z = VarN(), ParamZ()


def test_parse_structure():
    assert parse("H(n)*exp(-n*z)") == Mul(Harmonic(1, N), Exp(Neg(Mul(N, Z))))
    assert parse("1/n^2") == Div(Const(1), Pow(N, Fraction(2)))
    assert parse("n^2^3") == Pow(N, Fraction(8))
    assert parse("3/4") == Const(Fraction(3, 4))
    assert parse("  n *  z ") == Mul(N, Z)


def test_unary_minus_binds_power_first():
    assert parse("-n^2") == Neg(Pow(N, Fraction(2)))
    assert parse("n*-z") == Mul(N, Neg(Z))


@pytest.mark.parametrize(
    "text,col",
    [("n++", 2), ("", 1), ("(n", 3), ("n)", 2), ("2n", 2), ("n^z", 3), ("n $ 2", 3)],
)
def test_syntax_errors(text, col):
    with pytest.raises(SeriesSyntaxError) as info:
        parse(text)
    assert info.value.column == col
    assert f"column {col}" in str(info.value)


def test_unknown_function():
    with pytest.raises(UnknownFunctionError) as info:
        parse("n + sinh(n)")
    assert info.value.name == "sinh" and info.value.column == 5


def test_evaluate_harmonic_interpolates(ctx):
    v = evaluate(parse("H(n)"), "2.5", None, ctx)
    with mpmath.workdps(90):
        ref = mpmath.digamma(3.5) + mpmath.euler
    assert abs(v.value - ref) < mpmath.mpf("1e-60")
    assert mpmath.nstr(v.value, 6) == "1.68037"


def test_evaluate_needs_z(ctx):
    with pytest.raises(MissingParameterError):
        evaluate(parse("exp(-n*z)"), 1, None, ctx)


def test_differentiate_product():
    assert to_text(differentiate(parse("n^2*log(n)"))) == "2 * n * log(n) + n"


def test_differentiate_harmonic_is_trigamma(ctx):
    d = differentiate(parse("H(n)"))
    v = evaluate(d, "1.5", None, ctx).value
    with mpmath.workdps(90):
        ref = mpmath.polygamma(1, 2.5)
    assert abs(v - ref) < mpmath.mpf("1e-60")


_REFS = {
    "log(n)/n^2": lambda x, z: mpmath.log(x) / x**2,
    "H(n)*exp(-n*z)": lambda x, z: (mpmath.digamma(x + 1) + mpmath.euler) * mpmath.exp(-x * z),
    "n^(3/2)*exp(n*z)": lambda x, z: x ** mpmath.mpf(1.5) * mpmath.exp(x * z),
    "H(n,3)/(n+1)": lambda x, z: (mpmath.zeta(3) - mpmath.zeta(3, x + 1)) / (x + 1),
}


@pytest.mark.parametrize("text", sorted(_REFS))
def test_jets_match_mpmath_diff(ctx, text):
    ds = derivatives(parse(text), "2.75", "0.4", 4, ctx)
    with mpmath.workdps(60):
        x, z = mpmath.mpf("2.75"), mpmath.mpf("0.4")
        for k in range(5):
            ref = mpmath.diff(lambda t: _REFS[text](t, z), x, k)
            assert abs(ds[k] - ref) < mpmath.mpf("1e-40") * max(1, abs(ref))


def test_symbolic_and_jet_derivative_agree(ctx):
    expr = parse("log(n)*H(n)/n")
    sym = evaluate(differentiate(expr), 3, None, ctx).value
    jet = derivatives(expr, 3, None, 1, ctx)[1]
    assert abs(sym - jet) < mpmath.mpf("1e-70")


def test_growth_classes(ctx):
    g = classify_growth(parse("H(n)*exp(-n*z)"), "0.5", ctx)
    assert isinstance(g, ConvergentDecaying) and g.rate == 0.5
    assert isinstance(classify_growth(parse("n^2 + 1"), None, ctx), PolynomialBounded)
    assert isinstance(classify_growth(parse("exp(n*z)"), 1, ctx), ExponentialGrowing)


# random expressions inside the grammar
_leaf = st.one_of(
    st.just("n"),
    st.just("z"),
    st.integers(min_value=1, max_value=9).map(str),
    st.tuples(st.integers(1, 9), st.integers(1, 9)).map(lambda t: f"{t[0]}/{t[1]}"),
)


def _grow(inner):
    return st.one_of(
        st.tuples(inner, st.sampled_from("+-*/"), inner).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        inner.map(lambda a: f"-{a}"),
        inner.map(lambda a: f"exp({a})"),
        inner.map(lambda a: f"log({a})"),
        st.tuples(inner, st.integers(-3, 3)).map(lambda t: f"({t[0]})^({t[1]})"),
        st.just("H(n)"),
        st.just("H(n,2)"),
    )


exprs = st.recursive(_leaf, _grow, max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_print_parse_roundtrip(text):
    tree = parse(text)
    assert parse(to_text(tree)) == tree
