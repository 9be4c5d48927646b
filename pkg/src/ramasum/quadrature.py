"""Adaptive Gauss-Legendre panel quadrature at arbitrary precision.

Nodes and weights come from mpmath's Gauss-Legendre generator (cached per
degree and precision).  Each panel is integrated with a high and a low order
rule; panels whose two estimates disagree by more than their share of the
tolerance are bisected.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from mpmath.calculus.quadrature import GaussLegendre

from .errors import ConvergenceError
from .numeric import PrecisionContext

_node_cache: dict[tuple[int, int], list] = {}
_node_lock = threading.Lock()


def _rule_degrees(bits: int) -> tuple[int, int]:
    # mpmath degree d gives 3 * 2**(d - 1) nodes
    if bits <= 160:
        return 4, 3
    if bits <= 320:
        return 5, 4
    return 6, 5


def gl_nodes(degree: int, ctx: PrecisionContext) -> list:
    key = (degree, ctx.bits)
    nodes = _node_cache.get(key)
    if nodes is None:
        with _node_lock:
            nodes = _node_cache.get(key)
            if nodes is None:
                gl = GaussLegendre(ctx.mp)
                nodes = [(ctx.mp.mpf(x), ctx.mp.mpf(w)) for x, w in gl.calc_nodes(degree, ctx.bits + 10)]
                _node_cache[key] = nodes
    return nodes


def gauss_legendre(f: Callable, a, b, ctx: PrecisionContext, degree: int | None = None):
    """Single-panel Gauss-Legendre rule on [a, b]."""
    if degree is None:
        degree = _rule_degrees(ctx.bits)[0]
    half = (b - a) / 2
    mid = (a + b) / 2
    total = ctx.mp.zero
    for x, w in gl_nodes(degree, ctx):
        total += w * f(mid + half * x)
    return total * half


@dataclass(frozen=True)
class QuadResult:
    value: Any
    err: Any
    panels: int


def integrate(
    f: Callable,
    a,
    b,
    ctx: PrecisionContext,
    tol=None,
    *,
    max_depth: int = 48,
) -> QuadResult:
    """Integrate ``f`` over the finite interval [a, b] to absolute ``tol``."""
    mp = ctx.mp
    a, b = ctx.mpf(a), ctx.mpf(b)
    tol = ctx.target_tol if tol is None else ctx.mpf(tol)
    if a == b:
        return QuadResult(mp.zero, mp.zero, 0)
    hi, lo = _rule_degrees(ctx.bits)
    total = mp.zero
    err = mp.zero
    panels = 0
    stack = [(a, b, tol, 0)]
    while stack:
        lo_x, hi_x, ptol, depth = stack.pop()
        fine = gauss_legendre(f, lo_x, hi_x, ctx, hi)
        coarse = gauss_legendre(f, lo_x, hi_x, ctx, lo)
        diff = abs(fine - coarse)
        if diff <= ptol or depth >= max_depth:
            if diff > ptol:
                raise ConvergenceError(
                    f"quadrature did not converge on [{mp.nstr(lo_x, 8)}, {mp.nstr(hi_x, 8)}]"
                )
            total += fine
            err += diff
            panels += 1
            continue
        mid = (lo_x + hi_x) / 2
        stack.append((mid, hi_x, ptol / 2, depth + 1))
        stack.append((lo_x, mid, ptol / 2, depth + 1))
    return QuadResult(total, err, panels)


def integrate_panels(f: Callable, points: Sequence, ctx: PrecisionContext, tol=None) -> QuadResult:
    """Integrate over consecutive breakpoints, sharing ``tol`` evenly."""
    tol = ctx.target_tol if tol is None else ctx.mpf(tol)
    n = max(1, len(points) - 1)
    total = ctx.mp.zero
    err = ctx.mp.zero
    panels = 0
    for a, b in zip(points[:-1], points[1:]):
        r = integrate(f, a, b, ctx, tol / n)
        total += r.value
        err += r.err
        panels += r.panels
    return QuadResult(total, err, panels)


def geometric_points(a, b, ctx: PrecisionContext, ratio: int = 2, max_width=None) -> list:
    """Breakpoints from ``a`` to ``b`` growing geometrically, widths capped at ``max_width``.

    Used for integrands whose nearest singularity lies left of ``a``: each
    panel then sees the singularity at a fixed relative distance.
    """
    a, b = ctx.mpf(a), ctx.mpf(b)
    pts = [a]
    x = a
    while x < b:
        width = max(x * (ratio - 1), ctx.mpf(1))
        if max_width is not None:
            width = min(width, ctx.mpf(max_width))
        x = min(b, x + width)
        pts.append(x)
    return pts


def graded_points(a, b, ctx: PrecisionContext, levels: int) -> list:
    """Breakpoints on (a, b] halving toward ``a``.

    For an integrable endpoint singularity at ``a``; the first point is
    ``a + (b - a) / 2**levels`` and the caller owns the piece next to ``a``.
    """
    a, b = ctx.mpf(a), ctx.mpf(b)
    width = b - a
    pts = [a + width / ctx.mpf(2) ** k for k in range(levels, 0, -1)]
    return pts + [b]


def chain(*parts: Iterable) -> list:
    out: list = []
    for part in parts:
        for p in part:
            if not out or p > out[-1]:
                out.append(p)
    return out
