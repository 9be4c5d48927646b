"""Bernoulli numbers, harmonic numbers and the classical special functions.

Exact sequences are returned as :class:`fractions.Fraction`.  Real-valued
functions take a :class:`~ramasum.numeric.PrecisionContext` and return an
mpf at that context's precision, accurate to well inside ``ctx.target_tol``.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .errors import DomainError, InternalConsistencyError, PoleError
from .numeric import PrecisionContext
from .quadrature import geometric_points, integrate_panels

# --------------------------------------------------------------------------
# exact sequences


class BernoulliCache:
    """Monotonically extended table of B_n with B_1 = -1/2."""

    def __init__(self) -> None:
        self._table: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("Bernoulli index must be non-negative")
        if n >= len(self._table):
            self._extend(n)
        return self._table[n]

    def __len__(self) -> int:
        return len(self._table)

    def _extend(self, n: int) -> None:
        with self._lock:
            table = self._table
            # sum_{k=0}^{m} C(m+1, k) B_k = 0
            for m in range(len(table), n + 1):
                if m > 1 and m % 2:
                    table.append(Fraction(0))
                    continue
                acc = Fraction(0)
                binom = 1
                for k in range(m):
                    acc += binom * table[k]
                    binom = binom * (m + 1 - k) // (k + 1)
                table.append(-acc / (m + 1))


BERNOULLI = BernoulliCache()
BERNOULLI[256]


def bernoulli_number(n: int) -> Fraction:
    """B_n from z/(e^z - 1) = sum B_n z^n / n!  (so B_1 = -1/2)."""
    return BERNOULLI[n]


def bernoulli_polynomial(n: int, x: Any, ctx: PrecisionContext | None = None):
    """B_n(x) = sum_m C(n, m) B_m x^(n-m); exact for int/Fraction ``x``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        total = Fraction(0)
    else:
        if ctx is None:
            raise TypeError("a PrecisionContext is required for real arguments")
        x = ctx.mpf(x)
        total = ctx.mp.zero
    # Horner in x, highest power first
    for m in range(n + 1):
        total = total * x + math.comb(n, m) * BERNOULLI[m]
    return total


def periodic_bernoulli(N: int, t: Any, ctx: PrecisionContext):
    """b_N(t) = B_N(t - floor(t))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if isinstance(t, (int, Fraction)):
        frac = Fraction(t) - math.floor(Fraction(t))
        return ctx.mpf(bernoulli_polynomial(N, frac))
    t = ctx.mpf(t)
    return bernoulli_polynomial(N, t - ctx.mp.floor(t), ctx)


def harmonic_number(n: int, j: int = 1) -> Fraction:
    """H_n^{(j)} = sum_{m<=n} m^-j exactly, with H_0 = 0."""
    if n < 0 or j < 1:
        raise ValueError("need n >= 0 and j >= 1")
    return _harmonic(n, j)


@lru_cache(maxsize=4096)
def _harmonic(n: int, j: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    if n > 64:
        return _harmonic(n - 64, j) + sum((Fraction(1, m**j) for m in range(n - 63, n + 1)), Fraction(0))
    return sum((Fraction(1, m**j) for m in range(1, n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def _b_over_fact(k: int, bits: int):
    """B_k / k! as an mpf at ``bits`` precision."""
    from .numeric import mp_for

    mp = mp_for(bits)
    b = BERNOULLI[k]
    return mp.mpf(b.numerator) / (b.denominator * math.factorial(k))


def bernoulli_over_factorial(k: int, ctx: PrecisionContext):
    return _b_over_fact(k, ctx.bits)


# --------------------------------------------------------------------------
# digamma and polygamma


def polygamma(m: int, x: Any, ctx: PrecisionContext):
    """psi^{(m)}(x) for real x > 0.

    Shifts x upward with psi^{(m)}(x) = psi^{(m)}(x+1) - (-1)^m m!/x^{m+1}
    until the Bernoulli asymptotic series reaches working precision.
    """
    if m < 0:
        raise ValueError("polygamma order must be non-negative")
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError("polygamma needs x > 0")
    return _polygamma(m, x, ctx.bits)


@lru_cache(maxsize=8192)
def _polygamma(m: int, x, bits: int):
    from .numeric import mp_for

    work = bits + 24
    mp = mp_for(work)
    y = mp.mpf(x)
    xmin = 0.25 * bits + m + 4
    shift = mp.zero
    while y < xmin:
        shift += 1 / y ** (m + 1)
        y += 1
    fact_m = math.factorial(m)
    eps = mp.ldexp(1, -work)
    if m == 0:
        total = mp.log(y) - 1 / (2 * y)
        y2 = y * y
        p = y2
        k = 1
        while True:
            term = _b_over_fact(2 * k, work) * math.factorial(2 * k - 1) / p
            total -= term
            if abs(term) < eps * abs(total):
                break
            p *= y2
            k += 1
        result = total - shift
    else:
        total = mp.mpf(math.factorial(m - 1)) / y**m + mp.mpf(fact_m) / (2 * y ** (m + 1))
        y2 = y * y
        p = y ** (m + 2)
        k = 1
        while True:
            term = _b_over_fact(2 * k, work) * math.factorial(2 * k + m - 1) / p
            total += term
            if abs(term) < eps * abs(total):
                break
            p *= y2
            k += 1
        sign = 1 if m % 2 else -1
        result = sign * total - (-1) ** m * fact_m * shift
    return +mp_for(bits).mpf(result)


def digamma(x: Any, ctx: PrecisionContext):
    return polygamma(0, x, ctx)


def euler_gamma(ctx: PrecisionContext):
    """Euler-Mascheroni constant, defined as -psi(1)."""
    return -polygamma(0, 1, ctx)


def euler_gamma_em(ctx: PrecisionContext, M: int | None = None):
    """gamma = H_M - log M - 1/(2M) + sum_k B_2k / (2k M^2k), an independent route."""
    mp = ctx.mp
    if M is None:
        M = max(16, int(0.3 * ctx.bits))
    total = mp.zero
    for n in range(1, M + 1):
        total += mp.one / n
    total -= mp.log(M) + mp.one / (2 * M)
    M2 = mp.mpf(M) ** 2
    p = M2
    k = 1
    eps = ctx.eps
    while True:
        b = BERNOULLI[2 * k]
        term = mp.mpf(b.numerator) / (b.denominator * 2 * k) / p
        total += term
        if abs(term) < eps:
            break
        p *= M2
        k += 1
    return total


# --------------------------------------------------------------------------
# Hurwitz zeta and its s-derivative


def hurwitz_zeta(x: Any, s: Any, ctx: PrecisionContext):
    """zeta(x, s) = sum_{n>=0} (n + x)^-s, continued to all real s != 1."""
    return hurwitz_zeta_and_derivative(x, s, ctx)[0]


def hurwitz_zeta_and_derivative(x: Any, s: Any, ctx: PrecisionContext):
    """(zeta(x, s), d/ds zeta(x, s)) by one Euler-Maclaurin expansion.

    The s-derivative is taken term by term in closed form, so both values
    share the same truncation.
    """
    x, s = ctx.mpf(x), ctx.mpf(s)
    if x <= 0:
        raise DomainError("Hurwitz zeta needs x > 0")
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    z, dz = _hurwitz_em(x, s, ctx.bits)
    mp = ctx.mp
    return +mp.mpf(z), +mp.mpf(dz)


@lru_cache(maxsize=8192)
def _hurwitz_em(x, s, bits: int):
    from .numeric import mp_for

    sf = float(s)
    a_min = 0.2 * bits + max(0.0, -sf) / 2 + 4
    N = max(0, math.ceil(a_min - float(x)))
    guard = 32
    if sf < 1:
        # partial sum terms reach a^(1-s); the result can be far smaller
        guard += int((1 - sf) * math.log2(a_min + float(x) + 1)) + 8
    work = bits + guard
    mp = mp_for(work)
    x, s = mp.mpf(x), mp.mpf(s)
    total = mp.zero
    dtotal = mp.zero
    for n in range(N):
        b = n + x
        t = b ** (-s)
        total += t
        dtotal -= mp.log(b) * t
    a = N + x
    la = mp.log(a)
    a1s = a ** (1 - s)
    total += a1s / (s - 1)
    dtotal += -la * a1s / (s - 1) - a1s / (s - 1) ** 2
    a_s = a1s / a
    total += a_s / 2
    dtotal -= la * a_s / 2
    P = s  # rising factorial (s)_{2k-1}
    dP = mp.one
    power = a_s / a  # a^(-s-2k+1) for k = 1
    inv_a2 = 1 / (a * a)
    eps = mp.ldexp(1, -work)
    scale = max(abs(total), abs(dtotal), mp.one)
    prev = None
    k = 1
    while True:
        c = _b_over_fact(2 * k, work)
        t = c * P * power
        dt = c * (dP - P * la) * power
        total += t
        dtotal += dt
        size = max(abs(t), abs(dt))
        if size < eps * scale:
            break
        if prev is not None and size > prev and k > 8:
            raise AssertionError("Euler-Maclaurin terms diverging; shift too small")
        prev = size
        # (s)_{2k+1} = (s)_{2k-1} (s + 2k - 1)(s + 2k)
        f1, f2 = s + 2 * k - 1, s + 2 * k
        dP = dP * f1 * f2 + P * (f1 + f2)
        P = P * f1 * f2
        power *= inv_a2
        k += 1
    return total, dtotal


def zeta(s: Any, ctx: PrecisionContext):
    return hurwitz_zeta_and_derivative(1, s, ctx)[0]


def zeta_and_derivative(s: Any, ctx: PrecisionContext):
    """(zeta(s), zeta'(s)) for real s != 1."""
    return hurwitz_zeta_and_derivative(1, s, ctx)


def zeta_or_gamma(j: int, ctx: PrecisionContext):
    """zeta(j) for j >= 2, with the convention zeta(1) = gamma."""
    return euler_gamma(ctx) if j == 1 else zeta(j, ctx)


# --------------------------------------------------------------------------
# exponential integral and polylogarithm


def ei_negative(z: Any, ctx: PrecisionContext, method: str | None = None):
    """Ei(-z) for real z > 0.

    ``method`` is ``"series"`` (gamma + log z + sum (-1)^n z^n/(n n!)),
    ``"quadrature"`` (-e^-z * int_0^inf e^-t/(t + z) dt) or ``None`` to pick
    the series for z <= 2 and quadrature beyond.
    """
    z = ctx.mpf(z)
    if z <= 0:
        raise DomainError("ei_negative needs z > 0")
    if method is None:
        method = "series" if z <= 2 else "quadrature"
    if method == "series":
        return _ei_series(z, ctx)
    if method == "quadrature":
        return _ei_quadrature(z, ctx)
    raise ValueError(f"unknown method {method!r}")


def _ei_series(z, ctx: PrecisionContext):
    guard = int(float(z) * 1.45) + 16
    wctx = ctx.with_guard(guard)
    mp = wctx.mp
    z = mp.mpf(z)
    total = euler_gamma(wctx) + mp.log(z) + entire_ei_part(z, wctx)
    return +ctx.mp.mpf(total)


def entire_ei_part(z, ctx: PrecisionContext):
    """sum_{n>=1} (-1)^n z^n / (n n!), an entire function of real z."""
    mp = ctx.mp
    z = ctx.mpf(z)
    total = mp.zero
    term = mp.one  # (-z)^n / n!
    eps = ctx.eps
    n = 1
    while True:
        term = term * (-z) / n
        piece = term / n
        total += piece
        if abs(piece) < eps * max(abs(total), eps) and n > abs(z):
            break
        n += 1
    return total


def _ei_quadrature(z, ctx: PrecisionContext):
    mp = ctx.mp
    tol = ctx.eps * 64
    # e^-t/(t+z) <= e^-t/z, so the tail beyond A is below e^-A/z
    A = mp.mpf(ctx.bits) * mp.ln2 + 10 - mp.log(z)
    pts = geometric_points(0, A, ctx, max_width=4)
    res = integrate_panels(lambda t: mp.exp(-t) / (t + z), pts, ctx, tol)
    return -mp.exp(-z) * res.value


def polylog(j: int, z: Any, ctx: PrecisionContext, method: str | None = None):
    """Li_j(e^-z) for 0 < z < pi, plus the endpoint z = 0 when j >= 2.

    The direct series is the primary value; for z < 0.5 the Bernoulli
    expansion is also evaluated and the two must agree.
    """
    z = ctx.mpf(z)
    if j < 1:
        raise ValueError("j must be >= 1")
    if z == 0 and j >= 2:
        return ctx.mp.zeta(j)
    if z <= 0:
        raise DomainError("polylog(j, z) needs z > 0")
    if method == "series":
        return _polylog_series(j, z, ctx)
    if method == "expansion":
        return polylog_expansion(j, z, ctx)
    if method is not None:
        raise ValueError(f"unknown method {method!r}")
    if z >= 0.5:
        return _polylog_series(j, z, ctx)
    exp_val = polylog_expansion(j, z, ctx)
    if ctx.bits * 0.7 / float(z) > 200_000:
        return exp_val
    direct = _polylog_series(j, z, ctx)
    if abs(direct - exp_val) > ctx.target_tol:
        raise InternalConsistencyError(
            f"Li_{j}(e^-z) series and expansion disagree by {ctx.mp.nstr(direct - exp_val, 5)}"
        )
    return direct


def _polylog_series(j: int, z, ctx: PrecisionContext):
    wctx = ctx.with_guard(16)
    mp = wctx.mp
    z = mp.mpf(z)
    q = mp.exp(-z)
    denom = 1 - q
    eps = wctx.eps
    total = mp.zero
    qn = mp.one
    n = 1
    while True:
        qn *= q
        total += qn / mp.mpf(n) ** j
        # remaining tail <= q^(n+1) / ((n+1)^j (1 - q))
        if qn * q / (denom * mp.mpf(n + 1) ** j) < eps * total:
            break
        n += 1
    return +ctx.mp.mpf(total)


def polylog_expansion(j: int, z: Any, ctx: PrecisionContext):
    """Li_j(e^-z) from its expansion in Bernoulli numbers (|z| < 2 pi).

    sum_{m<j-1} zeta(j-m) (-z)^m/m! + (-1)^j z^(j-1)/(j-1)! (log z - H_{j-1})
      + (-1)^j sum_{n>=1} B_n/n * z^(n+j-1) / (n! (n+1)...(n+j-1))
    """
    wctx = ctx.with_guard(16)
    mp = wctx.mp
    z = wctx.mpf(z)
    if z <= 0:
        raise DomainError("expansion needs z > 0")
    total = mp.zero
    for m in range(j - 1):
        total += zeta(j - m, wctx) * (-z) ** m / math.factorial(m)
    sign = -1 if j % 2 else 1
    h = harmonic_number(j - 1)
    total += sign * z ** (j - 1) / math.factorial(j - 1) * (mp.log(z) - mp.mpf(h.numerator) / h.denominator)
    eps = wctx.eps
    series = mp.zero
    n = 1
    zpow = z**j  # z^(n+j-1) at n = 1
    small = 0
    while True:
        b = BERNOULLI[n]
        if b:
            rising = math.prod(range(n + 1, n + j))
            term = mp.mpf(b.numerator) / (b.denominator * n * math.factorial(n) * rising) * zpow
            series += term
            small = small + 1 if abs(term) < eps * max(abs(total), mp.one) else 0
            if small >= 2:
                break
        zpow *= z
        n += 1
    total += sign * series
    return +ctx.mp.mpf(total)
