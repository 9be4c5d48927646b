"""Closed forms for Ramanujan sums of the standard families.

Each key names a family of terms a(n); :func:`closed_form` returns the value
together with an error radius that accounts for quadrature and series
truncation.  The exponential generating-function entries use a single
quadrature of psi(x + 1) e^{-zx} over [0, 1] and exact rational series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Union

from .errors import ConvergenceError, DomainError
from .formal import _mono_sum, corollary_rational, lemma1_qpart
from .numeric import PrecisionContext
from .quadrature import integrate
from .special import (
    bernoulli_number,
    ei_negative,
    entire_ei_part,
    euler_gamma,
    harmonic_number,
    hurwitz_zeta,
    polygamma,
    polylog,
    zeta,
    zeta_and_derivative,
    zeta_or_gamma,
)

# --------------------------------------------------------------------------
# keys


@dataclass(frozen=True)
class PowerTerm:
    """a(n) = n^-s."""

    s: Any


@dataclass(frozen=True)
class LogOverPower:
    """a(n) = log(n) n^-s."""

    s: Any


@dataclass(frozen=True)
class ExpTerm:
    """a(n) = e^{nz}, |z| < pi."""

    z: Any


@dataclass(frozen=True)
class ExpOverN:
    """a(n) = e^{-nz}/n, 0 < z < pi."""

    z: Any


@dataclass(frozen=True)
class ExpHarmonic:
    """a(n) = e^{-nz} H_n, 0 < |z| < pi."""

    z: Any


@dataclass(frozen=True)
class ExpLog:
    """a(n) = e^{nz} log n, 0 < |z| < pi."""

    z: Any


@dataclass(frozen=True)
class ExpHarmonicJ:
    """a(n) = e^{-nz} H_n^{(j)}, 0 < z < pi, j >= 2."""

    z: Any
    j: int


@dataclass(frozen=True)
class MonomialTimesHarmonic:
    """a(n) = n^k H_n, or plain n^k when ``with_harmonic`` is False."""

    k: int
    with_harmonic: bool = True


CatalogKey = Union[PowerTerm, LogOverPower, ExpTerm, ExpOverN, ExpHarmonic, ExpLog, ExpHarmonicJ, MonomialTimesHarmonic]


def _ulps(v, ctx: PrecisionContext, n: int = 16):
    return ctx.mp.ldexp(abs(v) + 1, n.bit_length() - ctx.bits)


def _mpq(q: Fraction, ctx: PrecisionContext):
    return ctx.mp.mpf(q.numerator) / q.denominator


def _check_z(z, ctx: PrecisionContext, positive: bool = False, nonzero: bool = True):
    z = ctx.mpf(z)
    if abs(z) >= ctx.mp.pi:
        raise DomainError("need |z| < pi")
    if positive and z <= 0:
        raise DomainError("need z > 0")
    if nonzero and z == 0:
        raise DomainError("need z != 0")
    return z


# --------------------------------------------------------------------------
# shared building blocks


def psi_exp_integral(z, ctx: PrecisionContext):
    """(value, err) of int_0^1 psi(x + 1) e^{-zx} dx."""
    mp = ctx.mp
    z = ctx.mpf(z)
    r = integrate(lambda x: polygamma(0, x + 1, ctx) * mp.exp(-z * x), 0, 1, ctx, ctx.target_tol / 1024)
    return r.value, r.err + _ulps(r.value, ctx)


def laplace_inv_shift(z, ctx: PrecisionContext):
    """L(1/(x+1))(z) = -e^z Ei(-z) for z > 0."""
    z = ctx.mpf(z)
    if z <= 0:
        raise DomainError("Laplace transform needs z > 0")
    v = -ctx.mp.exp(z) * ei_negative(z, ctx)
    return v, _ulps(v, ctx)


def laplace_psi(z, ctx: PrecisionContext):
    """L(psi(x+1))(z) via e^z/(e^z-1) int_0^1 e^{-yz} psi(y+1) dy + L(1/(x+1))(z)/(e^z-1)."""
    mp = ctx.mp
    z = ctx.mpf(z)
    i01, e1 = psi_exp_integral(z, ctx)
    l1, e2 = laplace_inv_shift(z, ctx)
    ez = mp.exp(z)
    v = ez / (ez - 1) * i01 + l1 / (ez - 1)
    return v, (ez * e1 + e2) / abs(ez - 1) + _ulps(v, ctx)


@lru_cache(maxsize=64)
def _lemma1_coeffs(K: int) -> tuple:
    fs = lemma1_qpart(K)
    return tuple(fs.coeff(k) for k in range(K))


def _rational_series(coeff_fn, z, ctx: PrecisionContext, what: str):
    """sum_k c_k z^k for coefficients decaying like (2 pi)^-k."""
    mp = ctx.mp
    z = ctx.mpf(z)
    tol = ctx.eps * 4
    K = 32
    while K <= 4096:
        coeffs = coeff_fn(K)
        total = mp.zero
        small = 0
        zk = mp.one
        for k, c in enumerate(coeffs):
            if c:
                term = _mpq(c, ctx) * zk
                total += term
                small = small + 1 if abs(term) < tol * max(abs(total), 1) else 0
            zk *= z
            if small >= 4 and k > 8:
                return total, ctx.mp.ldexp(max(abs(total), 1), 8 - ctx.bits)
        K *= 2
    raise ConvergenceError(f"{what} series did not converge at z = {mp.nstr(z, 8)}")


def lemma1_qpart_value(z, ctx: PrecisionContext):
    return _rational_series(_lemma1_coeffs, z, ctx, "lemma1 rational")


def lemma2_qpart_value(z, ctx: PrecisionContext):
    """1/(1 - e^-z) [log(z/(1 - e^-z)) + sum (-1)^n z^n/(n n!)]."""
    mp = ctx.mp
    z = ctx.mpf(z)
    q = 1 - mp.exp(-z)
    v = (mp.log(z / q) + entire_ei_part(z, ctx)) / q
    return v, _ulps(v, ctx, 64)


def ei_entire_value(z, ctx: PrecisionContext):
    return entire_ei_part(z, ctx)


# --------------------------------------------------------------------------
# the individual closed forms


def power_term(s, ctx: PrecisionContext):
    """zeta(s) - 1/(s - 1), gamma at s = 1, exact rationals at s = 0, -1, -2, ..."""
    mp = ctx.mp
    sv = ctx.mpf(s)
    if sv == 1:
        g = euler_gamma(ctx)
        return g, _ulps(g, ctx)
    if sv <= 0 and sv == int(sv):
        return _mpq(_mono_sum(int(-sv)), ctx), mp.zero
    v = zeta(sv, ctx) - 1 / (sv - 1)
    return v, _ulps(v, ctx, 64)


def log_over_power(s, ctx: PrecisionContext):
    """-zeta'(s) - 1/(s - 1)^2, and the Stieltjes constant gamma_1 at s = 1."""
    sv = ctx.mpf(s)
    if sv == 1:
        v = ctx.mp.stieltjes(1)
        return v, _ulps(v, ctx, 64)
    _, dz = zeta_and_derivative(sv, ctx)
    v = -dz - 1 / (sv - 1) ** 2
    return v, _ulps(v, ctx, 64)


def exp_term(z, ctx: PrecisionContext):
    """e^z/(1 - e^z) + e^z/z, and 1/2 at z = 0."""
    z = _check_z(z, ctx, nonzero=False)
    mp = ctx.mp
    if z == 0:
        return mp.mpf(1) / 2, mp.zero
    ez = mp.exp(z)
    v = ez / (1 - ez) + ez / z
    # both pieces are O(1/z); cancellation costs log2(1/|z|) bits
    return v, _ulps(v, ctx, 64) * (1 + 1 / abs(z))


def exp_over_n(z, ctx: PrecisionContext):
    """-log(1 - e^-z) + Ei(-z)."""
    z = _check_z(z, ctx, positive=True)
    mp = ctx.mp
    v = -mp.log(1 - mp.exp(-z)) + ei_negative(z, ctx)
    return v, _ulps(v, ctx, 64)


def exp_over_n_series_form(z, ctx: PrecisionContext):
    """log(z/(1 - e^-z)) + gamma + sum (-1)^n z^n/(n n!)."""
    z = _check_z(z, ctx, positive=True)
    mp = ctx.mp
    v = mp.log(z / (1 - mp.exp(-z))) + euler_gamma(ctx) + entire_ei_part(z, ctx)
    return v, _ulps(v, ctx, 64)


def exp_harmonic(z, ctx: PrecisionContext):
    """Closed form of sum^R e^{-nz} H_n with one [0, 1] quadrature."""
    z = _check_z(z, ctx)
    mp = ctx.mp
    q2, e2 = lemma2_qpart_value(z, ctx)
    g = euler_gamma(ctx)
    i01, ei = psi_exp_integral(z, ctx)
    em1 = mp.expm1(z)
    v = q2 + g * (1 / (1 - mp.exp(-z)) - mp.exp(-z) / z) - i01 / em1
    return v, e2 + ei / abs(em1) + _ulps(v, ctx, 64) / min(1, abs(z))


def exp_log(z, ctx: PrecisionContext):
    """Closed form of sum^R e^{nz} log n with one [0, 1] quadrature."""
    z = _check_z(z, ctx)
    mp = ctx.mp
    i01, ei = psi_exp_integral(z, ctx)
    q1, e1 = lemma1_qpart_value(z, ctx)
    ez = mp.exp(z)
    v = ez / (ez - 1) * i01 + q1
    return v, e1 + ei * abs(ez / (ez - 1)) + _ulps(v, ctx, 64) / min(1, abs(z))


def exp_harmonic_j(z, j: int, ctx: PrecisionContext):
    """sum^R e^{-nz} H_n^{(j)} for j >= 2 and 0 < z < pi.

    Li_j(e^-z)/(1 - e^-z) - zeta(j) e^-z / z
      - c_j e^-z z^(j-1) [L(psi(x+1))(z) + L(1/(x+1))(z)]
      + e^-z sum_{m=1}^{j-1} z^(m-1) (j-m-1)!/(j-1)! [(-1)^(m-1) zeta(j-m) + (-1)^m]
    with c_j = (-1)^(j-1)/(j-1)! and zeta(1) read as gamma.
    """
    if j < 2:
        raise DomainError("use ExpHarmonic for j = 1")
    z = _check_z(z, ctx, positive=True)
    mp = ctx.mp
    emz = mp.exp(-z)
    lp, e1 = laplace_psi(z, ctx)
    l1, e2 = laplace_inv_shift(z, ctx)
    cj = mp.mpf((-1) ** (j - 1)) / math.factorial(j - 1)
    v = polylog(j, z, ctx) / (1 - emz) - zeta(j, ctx) * emz / z
    v -= cj * emz * z ** (j - 1) * (lp + l1)
    fj = math.factorial(j - 1)
    for m in range(1, j):
        w = mp.mpf(math.factorial(j - m - 1)) / fj
        v += emz * z ** (m - 1) * w * ((-1) ** (m - 1) * zeta_or_gamma(j - m, ctx) + (-1) ** m)
    err = abs(cj) * emz * z ** (j - 1) * (e1 + e2) + _ulps(v, ctx, 256)
    return v, err


def monomial_sum(k: int) -> Fraction:
    """sum^R n^k exactly."""
    if k < 0:
        raise DomainError("k must be non-negative")
    return _mono_sum(k)


def log_moment(k: int, ctx: PrecisionContext):
    """A_k = sum^R n^k log n = -zeta'(-k) - 1/(k+1)^2."""
    _, dz = zeta_and_derivative(-k, ctx)
    return -dz - ctx.mp.one / (k + 1) ** 2


def harmonic_moment(k: int, ctx: PrecisionContext):
    """X_k = sum^R n^k H_n from A_i, gamma and the exact rational parts.

    Y_i = sum^R (1 - n)^i H_n = gamma B_{i+1}(2)/(i+1) + r_i - A_i and X_k is the
    binomial transform of Y.  The gamma part transforms exactly into
    3/2 (k = 0) or (1 - B_{k+1})/(k+1); the alternating A-sum needs guard bits.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    wctx = ctx.with_guard(2 * k + 16)
    mp = wctx.mp
    gamma_part = Fraction(3, 2) if k == 0 else _mono_sum(k)
    rational = sum(
        (math.comb(k, i) * (-1) ** i * corollary_rational(i, k + 2) for i in range(k + 1)), Fraction(0)
    )
    a_part = mp.zero
    for i in range(k + 1):
        a_part += math.comb(k, i) * (-1) ** i * log_moment(i, wctx)
    v = euler_gamma(wctx) * _mpq(gamma_part, wctx) + _mpq(rational, wctx) - a_part
    return +ctx.mp.mpf(v)


def monomial_times_harmonic(k: int, with_harmonic: bool, ctx: PrecisionContext):
    if not with_harmonic:
        return _mpq(monomial_sum(k), ctx), ctx.mp.zero
    v = harmonic_moment(k, ctx)
    return v, _ulps(v, ctx, 1 << (k + 8))


def closed_form(key: CatalogKey, ctx: PrecisionContext):
    """(value, err) for a catalog key."""
    if isinstance(key, PowerTerm):
        return power_term(key.s, ctx)
    if isinstance(key, LogOverPower):
        return log_over_power(key.s, ctx)
    if isinstance(key, ExpTerm):
        return exp_term(key.z, ctx)
    if isinstance(key, ExpOverN):
        return exp_over_n(key.z, ctx)
    if isinstance(key, ExpHarmonic):
        return exp_harmonic(key.z, ctx)
    if isinstance(key, ExpLog):
        return exp_log(key.z, ctx)
    if isinstance(key, ExpHarmonicJ):
        if key.j == 1:
            return exp_harmonic(key.z, ctx)
        return exp_harmonic_j(key.z, key.j, ctx)
    if isinstance(key, MonomialTimesHarmonic):
        return monomial_times_harmonic(key.k, key.with_harmonic, ctx)
    raise TypeError(f"not a catalog key: {key!r}")


def r_function(key: CatalogKey, x, ctx: PrecisionContext):
    """R_a(x) with R(x) - R(x + 1) = a(x) and int_1^2 R = 0."""
    mp = ctx.mp
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError("R_a needs x > 0")
    if isinstance(key, PowerTerm):
        s = ctx.mpf(key.s)
        if s == 1:
            return -polygamma(0, x, ctx)
        return hurwitz_zeta(x, s, ctx) - 1 / (s - 1)
    if isinstance(key, ExpTerm):
        z = _check_z(key.z, ctx)
        ez = mp.exp(z)
        return mp.exp(x * z) / (1 - ez) + ez / z
    raise DomainError("R_a is available for PowerTerm and ExpTerm only")


__all__ = [
    "PowerTerm", "LogOverPower", "ExpTerm", "ExpOverN", "ExpHarmonic", "ExpLog", "ExpHarmonicJ",
    "MonomialTimesHarmonic", "CatalogKey", "closed_form", "r_function", "laplace_psi",
    "laplace_inv_shift", "psi_exp_integral", "log_moment", "harmonic_moment", "monomial_sum",
    "exp_over_n_series_form", "lemma1_qpart_value", "lemma2_qpart_value",
]
