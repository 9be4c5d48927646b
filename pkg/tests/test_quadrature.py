from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from ramasum.quadrature import gauss_legendre, geometric_points, graded_points, integrate, integrate_panels


def test_gauss_legendre_polynomial_exact(ctx):
    f = lambda x: 7 * x**9 - 3 * x**4 + 1
    v = gauss_legendre(f, 0, 2, ctx, 8)
    assert abs(v - ctx.mpf(Fraction(7 * 2**10, 10) - Fraction(3 * 2**5, 5) + 2)) < mpmath.mpf("1e-70")


def test_integrate_smooth(ctx):
    r = integrate(lambda x: ctx.mp.exp(-x) * ctx.mp.sin(x), 0, 10, ctx)
    with mpmath.workdps(90):
        ref = mpmath.quad(lambda x: mpmath.exp(-x) * mpmath.sin(x), [0, 10])
    assert abs(r.value - ref) < mpmath.mpf("1e-28")


def test_panels_and_points(ctx):
    pts = geometric_points(1, 100, ctx, max_width=16)
    assert pts[0] == 1 and pts[-1] == 100
    assert all(b - a <= 16 for a, b in zip(pts, pts[1:]))
    g = graded_points(0, 1, ctx, 5)
    assert g[-1] == 1 and min(g) > 0
    r = integrate_panels(lambda x: 1 / x, pts, ctx)
    assert abs(r.value - ctx.mp.log(100)) < mpmath.mpf("1e-28")
