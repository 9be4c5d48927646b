"""Ramanujan summation of series terms given as expressions.

Four strategies are available and :func:`ramanujan_sum` dispatches between
them: the closed-form catalog, the shadow formula sum - integral for
convergent series, the Euler-Maclaurin constant, and coefficientwise
summation of an exponential generating function.
"""

from __future__ import annotations

import enum
import math
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import catalog as cat
from .errors import ConvergenceError, DomainError, InadmissibleError, InternalConsistencyError, PoleError
from .expr import (
    ConvergentDecaying,
    Div,
    Exp,
    ExponentialGrowing,
    Harmonic,
    Log,
    Mul,
    Neg,
    Node,
    PolynomialBounded,
    Pow,
    Sub,
    Add,
    VarN,
    classify_growth,
    eval_mpf,
    jet,
    parse,
    poly_coeffs,
    uses_n,
    uses_z,
)
from .numeric import BigReal, PrecisionContext
from .quadrature import geometric_points, integrate_panels
from .special import _b_over_fact, bernoulli_over_factorial, euler_gamma, polygamma, zeta, zeta_and_derivative
from .catalog import CatalogKey


class Strategy(str, enum.Enum):
    CLOSED_FORM = "ClosedForm"
    SHADOW_CGT = "ShadowCGT"
    EULER_MACLAURIN = "EulerMaclaurin"
    TAYLOR_COEFFICIENT = "TaylorCoefficient"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RamanujanResult:
    value: BigReal
    error_estimate: BigReal
    strategy: Strategy
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.error_estimate.value < 0:
            raise ValueError("error estimate must be non-negative")

    @property
    def err(self):
        return self.error_estimate.value

    def decimal(self, digits: int | None = None) -> str:
        return self.value.decimal(digits)


def _result(value, err, strategy: Strategy, ctx: PrecisionContext, **diag) -> RamanujanResult:
    v = ctx.mpf(value)
    e = ctx.mpf(abs(err)) + ctx.mp.ldexp(abs(v), 2 - ctx.bits)
    return RamanujanResult(BigReal(v, e), BigReal(e, ctx.mp.zero), strategy, diag)


@dataclass(frozen=True)
class EulerMaclaurinConfig:
    """Expansion point M, correction order N and the M-doubling stop tolerance.

    ``N`` is the starting order; with ``adaptive_order`` the order used at each
    M is the even N <= ``max_order`` minimizing the remainder bound.
    """

    M: int = 32
    N: int = 16
    tail_tol: Any = None
    max_M: int = 1 << 14
    max_order: int = 64
    adaptive_order: bool = True

    def __post_init__(self) -> None:
        if self.M < 2:
            raise ValueError("M must be >= 2")
        if self.N % 2 or not 2 <= self.N <= 64:
            raise ValueError("N must be even with 2 <= N <= 64")
        if self.max_order < self.N or self.max_order % 2:
            raise ValueError("max_order must be even and >= N")
        if self.max_M < self.M:
            raise ValueError("max_M must be >= M")


def _as_expr(expr) -> Node:
    return parse(expr) if isinstance(expr, str) else expr


def _ztuple(z, ctx):
    return None if z is None else ctx.mpf(z)


def _tail_tol(ctx: PrecisionContext):
    return ctx.target_tol / 64


# --------------------------------------------------------------------------
# shadow formula


def sum_via_cgt(expr, z=None, ctx: PrecisionContext | None = None) -> RamanujanResult:
    """sum a(n) - int_1^inf a(x) dx for convergent series."""
    ctx = ctx or PrecisionContext()
    expr = _as_expr(expr)
    growth = classify_growth(expr, z, ctx)
    if not isinstance(growth, ConvergentDecaying):
        raise ConvergenceError(f"shadow formula needs a convergent series, term is {growth}")
    zv = _ztuple(z, ctx)
    if growth.rate == 0:
        # algebraic decay: the tail sum minus tail integral is the E-M bracket at M
        em = _em_core(expr, zv, EulerMaclaurinConfig(), ctx)
        return _result(em["value"], em["err"], Strategy.SHADOW_CGT, ctx, tail="euler_maclaurin_bracket", **em["diag"])
    wctx = ctx.with_guard(24)
    mp = wctx.mp
    tol = _tail_tol(ctx)
    r = wctx.mpf(growth.rate)
    q = mp.exp(-r)
    f = lambda x: eval_mpf(expr, x, zv, wctx)
    total = mp.zero
    n = 1
    hump = max(2, int(2 * (abs(growth.degree) + 1) / float(r)) + 2)
    while True:
        a = f(mp.mpf(n))
        total += a
        # beyond the polynomial hump the terms are dominated by a geometric series
        tail = abs(a) * q / (1 - q) * 2
        if n > hump and tail < tol / 4:
            break
        n += 1
        if n > 10**6:
            raise ConvergenceError("partial sums did not reach tolerance")
    A = mp.mpf(n + 1)
    while abs(f(A)) / r * 4 > tol / 4:
        A *= 2
    pts = geometric_points(1, A, wctx, max_width=max(4, 8 / float(r)))
    integ = integrate_panels(f, pts, wctx, tol / 4)
    int_tail = abs(f(A)) / r * 4
    value = total - integ.value
    err = tail + integ.err + int_tail
    return _result(value, err, Strategy.SHADOW_CGT, ctx, terms=n, cut=float(A), panels=integ.panels,
                   sum_tail_bound=float(tail), integral_tail_bound=float(int_tail))


# --------------------------------------------------------------------------
# Euler-Maclaurin


def _remainder_bound(N: int, d_prev, mp):
    """2 zeta(N)/(2 pi)^N |f^{(N-1)}(M)|, the periodic-Bernoulli remainder bound."""
    return 2 * mp.zeta(N) / (2 * mp.pi) ** N * abs(d_prev)


def _em_corrections(derivs: list, cfg: EulerMaclaurinConfig, exp_growth: bool, mp, bits: int, tol):
    """Choose the order N; return (sum_{k<=N} B_k/k! f^{(k-1)}(M), remainder bound, N).

    ``derivs[k]`` is f^{(k)}(M).
    """
    top = len(derivs)
    partial = mp.zero
    cum = [mp.zero]
    for k in range(1, top + 1):
        partial += _b_over_fact(k, bits) * derivs[k - 1]
        cum.append(partial)
    best = None
    start = cfg.N if not cfg.adaptive_order else 2
    stop = cfg.N if not cfg.adaptive_order else top
    for N in range(start, stop + 1, 2):
        bound = _remainder_bound(N, derivs[N - 1], mp)
        if exp_growth:
            # the correction series converges geometrically; the last term bounds the rest
            bound = max(bound, abs(cum[N] - cum[N - 2]))
        if best is None or bound < best[1]:
            best = (cum[N], bound, N)
        if bound < tol and N >= cfg.N:
            break
    return best


def _em_core(expr: Node, zv, cfg: EulerMaclaurinConfig, ctx: PrecisionContext) -> dict:
    growth = classify_growth(expr, zv, ctx)
    exp_rate = float(growth.rate) if isinstance(growth, ExponentialGrowing) else 0.0
    tail_tol = ctx.mpf(cfg.tail_tol) if cfg.tail_tol is not None else _tail_tol(ctx)
    max_order = cfg.max_order
    max_M = cfg.max_M
    if exp_rate > 0:
        # correction terms fall like e^{rate M} (rate/2pi)^k; keep M small to limit cancellation
        max_M = min(max_M, max(cfg.M, 64))
        need = (math.log(2) * ctx.bits + exp_rate * max_M) / math.log(2 * math.pi / exp_rate)
        max_order = max(max_order, min(256, 2 * (int(need) // 2) + 16))
    guard = 32 + int(exp_rate * max_M / math.log(2)) if exp_rate > 0 else 32
    wctx = ctx.with_guard(guard)
    mp = wctx.mp
    zw = None if zv is None else wctx.mpf(zv)
    f = lambda x: eval_mpf(expr, x, zw, wctx)

    M = cfg.M
    partial = mp.zero
    next_n = 1
    integral = mp.zero
    int_err = mp.zero
    lo = mp.one
    prev = None
    history = []
    while True:
        for n in range(next_n, M):
            partial += f(mp.mpf(n))
        next_n = M
        if M > lo:
            pts = geometric_points(lo, M, wctx)
            q = integrate_panels(f, pts, wctx, tail_tol / 16)
            integral += q.value
            int_err += q.err
            lo = mp.mpf(M)
        derivs = [c * math.factorial(k) for k, c in enumerate(jet(expr, M, zw, max_order, wctx))]
        corr, bound, N = _em_corrections(derivs, cfg, exp_rate > 0, mp, wctx.bits, tail_tol / 4)
        value = partial - integral - corr
        history.append((M, N, float(bound)))
        if prev is not None:
            diff = abs(value - prev)
            if diff < tail_tol and bound < tail_tol:
                err = bound + int_err + diff
                return {
                    "value": +ctx.mp.mpf(value),
                    "err": ctx.mpf(err),
                    "diag": {"M": M, "N": N, "remainder_bound": float(bound), "quad_err": float(int_err),
                             "successive_diff": float(diff), "history": history, "guard_bits": guard},
                }
        prev = value
        if M * 2 > max_M:
            raise ConvergenceError(
                f"Euler-Maclaurin did not reach {mp.nstr(tail_tol, 3)} by M = {M} (bound {mp.nstr(bound, 3)})"
            )
        M *= 2


def sum_via_euler_maclaurin(expr, z=None, config: EulerMaclaurinConfig | None = None,
                            ctx: PrecisionContext | None = None) -> RamanujanResult:
    """R(1) = sum_{k<M} f(k) - int_1^M f - sum_{k<=N} B_k/k! f^{(k-1)}(M), with M doubling."""
    ctx = ctx or PrecisionContext()
    expr = _as_expr(expr)
    zv = _ztuple(z, ctx)
    res = _em_core(expr, zv, config or EulerMaclaurinConfig(), ctx)
    return _result(res["value"], res["err"], Strategy.EULER_MACLAURIN, ctx, **res["diag"])


# --------------------------------------------------------------------------
# Taylor coefficients of exponential generating functions


@dataclass(frozen=True)
class _ExpShape:
    coef: Any        # constant multiplier, includes e^{intercept}
    rate: Any        # a(n) = coef * g(n) * e^{rate n}
    g: str           # "one", "log" or "harmonic"


def _exp_shape(expr: Node, zv, ctx: PrecisionContext) -> _ExpShape | None:
    terms = _product_terms(expr, zv, ctx)
    if terms is None or len(terms) != 1:
        return None
    coef, sig = terms[0]
    power, logs, harm, rate = sig
    if power != 0:
        return None
    if logs == 0 and not harm:
        return _ExpShape(coef, rate, "one")
    if logs == 1 and not harm:
        return _ExpShape(coef, rate, "log")
    if logs == 0 and harm == (1,):
        return _ExpShape(coef, rate, "harmonic")
    return None


def _moment(kind: str, k: int, ctx: PrecisionContext):
    if kind == "one":
        q = cat.monomial_sum(k)
        return ctx.mp.mpf(q.numerator) / q.denominator
    if kind == "log":
        return cat.log_moment(k, ctx)
    return cat.harmonic_moment(k, ctx)


def sum_via_taylor_coefficients(expr, z=None, K: int | None = None,
                                ctx: PrecisionContext | None = None) -> RamanujanResult:
    """sum_k w^k/k! sum^R n^k g(n) for a(n) = c g(n) e^{wn}, g in {1, log n, H_n}."""
    ctx = ctx or PrecisionContext()
    expr = _as_expr(expr)
    zv = _ztuple(z, ctx)
    shape = _exp_shape(expr, zv, ctx)
    if shape is None:
        raise DomainError("Taylor strategy needs a term c*g(n)*exp(w*n) with g in {1, log(n), H(n)}")
    mp = ctx.mp
    w = ctx.mpf(shape.rate)
    if abs(w) >= mp.pi:
        raise InadmissibleError(f"|rate| = {mp.nstr(abs(w), 6)} is not below pi")
    tol = _tail_tol(ctx)
    ratio = abs(w) / mp.pi
    limit = K if K is not None else 2000
    total = mp.zero
    term = mp.zero
    wk = mp.one
    k = 0
    small = 0
    while k <= limit:
        if k:
            wk = wk * w / k
        term = wk * _moment(shape.g, k, ctx)
        total += term
        if K is None:
            small = small + 1 if abs(term) * (1 + ratio / (1 - ratio)) < tol else 0
            if small >= 3 and k > 4:
                break
        k += 1
    else:
        if K is None:
            raise ConvergenceError("Taylor coefficient series did not converge")
    err = abs(term) * ratio / (1 - ratio) if ratio < 1 else mp.inf
    value = shape.coef * total
    return _result(value, abs(shape.coef) * err, Strategy.TAYLOR_COEFFICIENT, ctx, K=k, g=shape.g,
                   rate=float(w), ratio=float(ratio))


# --------------------------------------------------------------------------
# catalog matching


def _flatten(node: Node, sign: int, out: list, positive: bool = True) -> bool:
    """Collect (factor, exponent sign) pairs of a product tree."""
    if isinstance(node, Mul):
        return _flatten(node.left, sign, out) and _flatten(node.right, sign, out)
    if isinstance(node, Div):
        return _flatten(node.left, sign, out) and _flatten(node.right, -sign, out)
    out.append((node, sign))
    return True


def _product_terms(expr: Node, zv, ctx: PrecisionContext):
    """Split into sum of coef * n^p * log(n)^l * prod H_j(n) * e^{rate n}; None if impossible."""
    mp = ctx.mp
    if isinstance(expr, (Add, Sub)):
        a = _product_terms(expr.left, zv, ctx)
        b = _product_terms(expr.right, zv, ctx)
        if a is None or b is None:
            return None
        if isinstance(expr, Sub):
            b = [(-c, s) for c, s in b]
        return a + b
    if isinstance(expr, Neg):
        a = _product_terms(expr.arg, zv, ctx)
        return None if a is None else [(-c, s) for c, s in a]
    factors: list = []
    _flatten(expr, 1, factors)
    coef = mp.one
    power = Fraction(0)
    logs = 0
    harm: list[int] = []
    rate = mp.zero
    for node, sgn in factors:
        if not uses_n(node):
            v = eval_mpf(node, None, zv, ctx)
            if sgn < 0 and v == 0:
                return None
            coef = coef * v if sgn > 0 else coef / v
        elif isinstance(node, VarN):
            power += sgn
        elif isinstance(node, Pow) and isinstance(node.base, VarN):
            power += sgn * node.exponent
        elif isinstance(node, Log) and isinstance(node.arg, VarN) and sgn > 0:
            logs += 1
        elif isinstance(node, Harmonic) and isinstance(node.arg, VarN) and sgn > 0:
            harm.append(node.j)
        elif isinstance(node, Exp):
            pc = poly_coeffs(node.arg, zv, ctx)
            if pc is None or len(pc) > 2 and any(c != 0 for c in pc[2:]):
                return None
            slope = pc[1] if len(pc) > 1 else mp.zero
            coef = coef * mp.exp(sgn * pc[0])
            rate += sgn * slope
        elif isinstance(node, Neg):
            inner = _product_terms(node.arg, zv, ctx)
            if inner is None or len(inner) != 1 or sgn < 0:
                return None
            c, (p2, l2, h2, r2) = inner[0]
            coef, power, logs, harm, rate = -coef * c, power + p2, logs + l2, harm + list(h2), rate + r2
        elif isinstance(node, (Add, Sub)) and sgn > 0:
            inner = _product_terms(node, zv, ctx)
            if inner is None or len(inner) != 1:
                return None
            c, (p2, l2, h2, r2) = inner[0]
            coef, power, logs, harm, rate = coef * c, power + p2, logs + l2, harm + list(h2), rate + r2
        else:
            return None
    return [(coef, (power, logs, tuple(sorted(harm)), rate))]


def match_catalog(expr, z=None, ctx: PrecisionContext | None = None):
    """Linear combination [(coef, CatalogKey), ...] equal to the term, or None."""
    ctx = ctx or PrecisionContext()
    expr = _as_expr(expr)
    zv = _ztuple(z, ctx)
    terms = _product_terms(expr, zv, ctx)
    if terms is None:
        return None
    mp = ctx.mp
    out = []
    for coef, (power, logs, harm, rate) in terms:
        key = _key_for(power, logs, harm, rate, mp)
        if key is None:
            return None
        out.append((coef, key))
    return out


def _key_for(power: Fraction, logs: int, harm: tuple, rate, mp) -> CatalogKey | None:
    if rate == 0:
        if logs == 0 and not harm:
            return cat.PowerTerm(-power)
        if logs == 1 and not harm:
            return cat.LogOverPower(-power)
        if logs == 0 and harm == (1,) and power >= 0 and power.denominator == 1:
            return cat.MonomialTimesHarmonic(int(power))
        return None
    if abs(rate) >= mp.pi:
        return None
    if power == 0 and logs == 0 and not harm:
        return cat.ExpTerm(rate)
    if power == 0 and logs == 1 and not harm:
        return cat.ExpLog(rate)
    if power == 0 and logs == 0 and harm == (1,):
        return cat.ExpHarmonic(-rate)
    if rate < 0 and power == -1 and logs == 0 and not harm:
        return cat.ExpOverN(-rate)
    if rate < 0 and power == 0 and logs == 0 and len(harm) == 1:
        return cat.ExpHarmonicJ(-rate, harm[0])
    return None


def catalog_sum(key: CatalogKey, ctx: PrecisionContext | None = None) -> RamanujanResult:
    """Closed-form value of a catalog entry."""
    ctx = ctx or PrecisionContext()
    value, err = cat.closed_form(key, ctx)
    return _result(value, err, Strategy.CLOSED_FORM, ctx, key=repr(key))


def catalog_R_function(key: CatalogKey, x, ctx: PrecisionContext | None = None) -> BigReal:
    ctx = ctx or PrecisionContext()
    v = cat.r_function(key, x, ctx)
    return BigReal(v, ctx.mp.ldexp(abs(v) + 1, 8 - ctx.bits))


def _catalog_combination(pairs, ctx: PrecisionContext) -> RamanujanResult:
    mp = ctx.mp
    total = mp.zero
    err = mp.zero
    for coef, key in pairs:
        v, e = cat.closed_form(key, ctx)
        total += coef * v
        err += abs(coef) * e
    return _result(total, err, Strategy.CLOSED_FORM, ctx, keys=[repr(k) for _, k in pairs])


# --------------------------------------------------------------------------
# dispatch

_cache: dict = {}
_cache_lock = threading.Lock()


def _strategies_for(expr: Node, zv, growth, ctx) -> list[Strategy]:
    if isinstance(growth, ConvergentDecaying):
        return [Strategy.SHADOW_CGT, Strategy.EULER_MACLAURIN]
    if isinstance(growth, PolynomialBounded):
        return [Strategy.EULER_MACLAURIN]
    out = []
    if _exp_shape(expr, zv, ctx) is not None:
        out.append(Strategy.TAYLOR_COEFFICIENT)
    out.append(Strategy.EULER_MACLAURIN)
    return out


def run_strategy(strategy: Strategy, expr, z=None, ctx: PrecisionContext | None = None) -> RamanujanResult:
    ctx = ctx or PrecisionContext()
    expr = _as_expr(expr)
    if strategy is Strategy.CLOSED_FORM:
        pairs = match_catalog(expr, z, ctx)
        if pairs is None:
            raise DomainError("term is not in the catalog")
        return _catalog_combination(pairs, ctx)
    if strategy is Strategy.SHADOW_CGT:
        return sum_via_cgt(expr, z, ctx)
    if strategy is Strategy.EULER_MACLAURIN:
        return sum_via_euler_maclaurin(expr, z, None, ctx)
    return sum_via_taylor_coefficients(expr, z, None, ctx)


def ramanujan_sum(expr, z=None, ctx: PrecisionContext | None = None, *, use_catalog: bool = True,
                  cross_check: bool = True) -> RamanujanResult:
    """sum^R_{n>=1} a(n) by the first applicable strategy, optionally cross-checked by the next."""
    ctx = ctx or PrecisionContext()
    expr = _as_expr(expr)
    zv = _ztuple(z, ctx)
    if uses_z(expr) and zv is None:
        from .errors import MissingParameterError

        raise MissingParameterError("expression uses z but no value was given")
    key = (expr, zv if uses_z(expr) else None, ctx.bits, ctx.target_tol, use_catalog, cross_check)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    growth = classify_growth(expr, zv, ctx)
    order = _strategies_for(expr, zv, growth, ctx)
    if use_catalog and match_catalog(expr, zv, ctx) is not None:
        order = [Strategy.CLOSED_FORM] + order
    t0 = time.perf_counter()
    primary = run_strategy(order[0], expr, zv, ctx)
    diag = dict(primary.diagnostics)
    diag["growth"] = repr(growth)
    diag["runtime_s"] = time.perf_counter() - t0
    if cross_check and len(order) > 1:
        secondary = None
        for strat in order[1:]:
            try:
                secondary = run_strategy(strat, expr, zv, ctx)
                break
            except (ConvergenceError, DomainError):
                continue
        if secondary is not None:
            diff = primary.value.value - secondary.value.value
            allowed = primary.err + secondary.err + ctx.target_tol
            diag["cross_check"] = {"strategy": str(secondary.strategy), "diff": float(diff)}
            if abs(diff) > allowed:
                raise InternalConsistencyError(
                    f"{primary.strategy} and {secondary.strategy} disagree by {ctx.mp.nstr(diff, 5)}"
                )
    result = RamanujanResult(primary.value, primary.error_estimate, primary.strategy, diag)
    with _cache_lock:
        _cache[key] = result
    return result


def translate_shift(expr, N: int, z=None, ctx: PrecisionContext | None = None, **kw) -> RamanujanResult:
    """sum^R a(n + N) = sum^R a(n) - [a(1) + ... + a(N)] + int_1^{N+1} a."""
    if N < 0:
        raise ValueError("N must be non-negative")
    ctx = ctx or PrecisionContext()
    expr = _as_expr(expr)
    base = ramanujan_sum(expr, z, ctx, **kw)
    if N == 0:
        return base
    zv = _ztuple(z, ctx)
    wctx = ctx.with_guard(16)
    f = lambda x: eval_mpf(expr, x, None if zv is None else wctx.mpf(zv), wctx)
    head = sum((f(wctx.mpf(n)) for n in range(1, N + 1)), wctx.mp.zero)
    pts = [wctx.mpf(k) for k in range(1, N + 2)]
    q = integrate_panels(f, pts, wctx, _tail_tol(ctx))
    value = base.value.value - head + q.value
    return _result(value, base.err + q.err, base.strategy, ctx, shift=N, base=base.value.decimal(30))


# --------------------------------------------------------------------------
# Euler sums h(s) = sum H_n n^-s and their continuation


def _h_tail_integral(M, s, ctx: PrecisionContext):
    """int_M^inf x^-s (psi(x+1) + gamma) dx from the asymptotic expansion of psi(x+1)."""
    mp = ctx.mp
    M = ctx.mpf(M)
    s = ctx.mpf(s)
    g = euler_gamma(ctx)
    lM = mp.log(M)
    a = M ** (1 - s)
    total = a * (lM / (s - 1) + 1 / (s - 1) ** 2) + g * a / (s - 1)
    total += a / M / (2 * s)  # (1/2) int x^{-s-1}
    eps = ctx.eps
    k = 1
    Mp = M ** (-2)
    p = a * Mp
    prev = None
    while True:
        b = bernoulli_over_factorial(2 * k, ctx) * math.factorial(2 * k)
        t = -b / (2 * k) * p / (s + 2 * k - 1)
        if prev is not None and abs(t) > abs(prev):
            raise ConvergenceError("asymptotic tail diverging; increase M")
        total += t
        if abs(t) < eps * abs(total):
            break
        prev = t
        p *= Mp
        k += 1
    return total


def _h_direct(s, ctx: PrecisionContext):
    """sum_{n<M} H_n n^-s + E-M tail with the integral done analytically (s > 1)."""
    wctx = ctx.with_guard(32)
    mp = wctx.mp
    s = wctx.mpf(s)
    M = 64
    expr = Mul(Harmonic(1, VarN()), Pow(VarN(), -_fraction_of(s)))
    total = mp.zero
    H = mp.zero
    for n in range(1, M):
        H += mp.one / n
        total += H / mp.mpf(n) ** s
    derivs = [c * math.factorial(k) for k, c in enumerate(jet(expr, M, None, 64, wctx))]
    corr, bound, N = _em_corrections(derivs, EulerMaclaurinConfig(), False, mp, wctx.bits, wctx.eps)
    tail = _h_tail_integral(M, s, wctx) - corr
    return +ctx.mp.mpf(total + tail), ctx.mpf(bound) + ctx.mp.ldexp(abs(total) + 1, 8 - ctx.bits)


def psi_power_integral_01(s, ctx: PrecisionContext):
    """int_0^1 x^-s (psi(x+1) + gamma) dx for s < 2.

    [0, 1/2] from psi(x+1) + gamma = sum (-1)^(n+1) zeta(n+1) x^n, [1/2, 1] by quadrature.
    """
    mp = ctx.mp
    s = ctx.mpf(s)
    if s >= 2:
        raise DomainError("integral diverges at 0 for s >= 2")
    half = mp.mpf(1) / 2
    total = mp.zero
    n = 1
    while True:
        e = n + 1 - s
        t = (-1) ** (n + 1) * zeta(n + 1, ctx) * half**e / e
        total += t
        if abs(t) < ctx.eps * max(abs(total), 1) and n > 4:
            break
        n += 1
    g = euler_gamma(ctx)
    q = integrate_panels(lambda x: x ** (-s) * (polygamma(0, x + 1, ctx) + g), [half, mp.one], ctx,
                         _tail_tol(ctx) / 16)
    return total + q.value, q.err


def _fraction_of(x) -> Fraction:
    man, exp = x.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def _is_pole(s, mp) -> bool:
    if abs(s - 1) < 1e-6 or abs(s) < 1e-6:
        return True
    r = mp.nint(s)
    return r < 0 and int(r) % 2 == 1 and abs(s - r) < 1e-6


def euler_sum_h(s, ctx: PrecisionContext | None = None, method: str | None = None):
    """h(s) = sum H_n n^-s for s > 1, continued to s < 1 through

    h(s) = -(pi / sin(pi s)) zeta(s) - int_0^1 x^-s (psi(x+1) + gamma) dx + sum^R n^-s H_n.
    """
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    s = ctx.mpf(s)
    if _is_pole(s, mp):
        raise PoleError(f"h has a pole near s = {mp.nstr(s, 8)}")
    if method is None:
        method = "direct" if s > 1 else "continuation"
    if method == "direct":
        if s <= 1:
            raise DomainError("direct Euler sum needs s > 1")
        v, e = _h_direct(s, ctx)
        return BigReal(v, e)
    if method != "continuation":
        raise ValueError(f"unknown method {method!r}")
    if s >= 2:
        raise DomainError("continuation formula needs s < 2")
    wctx = ctx.with_guard(32)
    wm = wctx.mp
    sw = wctx.mpf(s)
    r = wm.nint(sw)
    if sw == r and r < 0 and int(r) % 2 == 0:
        _, dz = zeta_and_derivative(sw, wctx)
        first = -dz
    else:
        first = -wm.pi / wm.sin(wm.pi * sw) * zeta(sw, wctx)
    integral, ierr = psi_power_integral_01(sw, wctx)
    expr = Mul(Pow(VarN(), -_fraction_of(sw)), Harmonic(1, VarN()))
    rs = sum_via_euler_maclaurin(expr, None, None, wctx)
    v = first - integral + rs.value.value
    err = ierr + rs.err + ctx.mp.ldexp(abs(first) + 1, 8 - ctx.bits)
    return BigReal(+mp.mpf(v), ctx.mpf(err))


def interpolation_integral(s, ctx: PrecisionContext | None = None):
    """(value, err) of int_0^inf x^-s (psi(x+1) + gamma) dx for 1 < s < 2."""
    ctx = ctx or PrecisionContext()
    wctx = ctx.with_guard(32)
    mp = wctx.mp
    s = wctx.mpf(s)
    if not 1 < s < 2:
        raise DomainError("interpolation integral needs 1 < s < 2")
    head, e1 = psi_power_integral_01(s, wctx)
    M = mp.mpf(64)
    g = euler_gamma(wctx)
    f = lambda x: x ** (-s) * (polygamma(0, x + 1, wctx) + g)
    pts = geometric_points(1, M, wctx)
    mid = integrate_panels(f, pts, wctx, _tail_tol(ctx) / 16)
    tail = _h_tail_integral(M, s, wctx)
    v = head + mid.value + tail
    return +ctx.mp.mpf(v), ctx.mpf(e1 + mid.err)


def residue_h(q: int = 1, delta="1e-3", ctx: PrecisionContext | None = None):
    """Average of (s - p) h(s) at s = p +- delta with p = 1 - 2q (estimates zeta(1 - 2q))."""
    ctx = ctx or PrecisionContext()
    p = 1 - 2 * q
    d = ctx.mpf(delta)
    vals = []
    for sgn in (1, -1):
        s = p + sgn * d
        vals.append((s - p) * euler_sum_h(s, ctx).value)
    return (vals[0] + vals[1]) / 2


__all__ = [
    "Strategy", "RamanujanResult", "EulerMaclaurinConfig", "ramanujan_sum", "catalog_sum",
    "catalog_R_function", "sum_via_cgt", "sum_via_euler_maclaurin", "sum_via_taylor_coefficients",
    "translate_shift", "euler_sum_h", "match_catalog", "run_strategy", "interpolation_integral",
    "residue_h", "psi_power_integral_01",
]
