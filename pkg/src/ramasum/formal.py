"""Truncated formal Laurent series with exact rational coefficients.

A :class:`FormalSeries` knows its coefficients for powers ``offset`` up to
``order - 1``; everything from ``order`` on is unknown.  Arithmetic keeps the
truncation honest, and asking for an unknown coefficient raises
:class:`~ramasum.errors.TruncationError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import TruncationError
from .special import bernoulli_number, harmonic_number


@dataclass(frozen=True)
class FormalSeries:
    offset: int
    coefficients: tuple
    order: int

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        # drop trailing entries beyond the truncation point
        coeffs = coeffs[: max(0, self.order - self.offset)]
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_function(cls, fn: Callable[[int], Fraction], order: int, offset: int = 0) -> "FormalSeries":
        return cls(offset, tuple(fn(k) for k in range(offset, order)), order)

    @classmethod
    def constant(cls, c, order: int) -> "FormalSeries":
        return cls(0, (Fraction(c),), order)

    def coeff(self, k: int) -> Fraction:
        """Coefficient of z^k."""
        if k >= self.order:
            raise TruncationError(f"coefficient z^{k} requested but series known only below z^{self.order}")
        idx = k - self.offset
        if idx < 0 or idx >= len(self.coefficients):
            return Fraction(0)
        return self.coefficients[idx]

    def __getitem__(self, k: int) -> Fraction:
        return self.coeff(k)

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coefficients):
            if c:
                return self.offset + i
        return None

    def normalized(self) -> "FormalSeries":
        """Strip leading zeros so ``offset`` is the true valuation."""
        v = self.valuation()
        if v is None:
            return FormalSeries(self.order, (), self.order)
        return FormalSeries(v, self.coefficients[v - self.offset :], self.order)

    def truncate(self, order: int) -> "FormalSeries":
        return FormalSeries(self.offset, self.coefficients, min(order, self.order))

    def _dense(self, lo: int, hi: int) -> list:
        return [self.coeff(k) if k < self.order else Fraction(0) for k in range(lo, hi)]

    def __add__(self, other) -> "FormalSeries":
        other = _lift(other, self.order)
        lo = min(self.offset, other.offset)
        hi = min(self.order, other.order)
        return FormalSeries(lo, [self.coeff(k) + other.coeff(k) for k in range(lo, hi)], hi)

    __radd__ = __add__

    def __neg__(self) -> "FormalSeries":
        return FormalSeries(self.offset, [-c for c in self.coefficients], self.order)

    def __sub__(self, other) -> "FormalSeries":
        return self + (-_lift(other, self.order))

    def __rsub__(self, other) -> "FormalSeries":
        return _lift(other, self.order) - self

    def __mul__(self, other) -> "FormalSeries":
        if isinstance(other, (int, Fraction)):
            return FormalSeries(self.offset, [c * other for c in self.coefficients], self.order)
        a, b = self.normalized(), other.normalized()
        off = a.offset + b.offset
        order = min(a.order + b.offset, b.order + a.offset)
        out = [Fraction(0)] * max(0, order - off)
        for i, ca in enumerate(a.coefficients):
            if not ca:
                continue
            for j, cb in enumerate(b.coefficients):
                k = i + j
                if k >= len(out):
                    break
                out[k] += ca * cb
        return FormalSeries(off, out, order)

    __rmul__ = __mul__

    def shift(self, m: int) -> "FormalSeries":
        """Multiply by z^m."""
        return FormalSeries(self.offset + m, self.coefficients, self.order + m)

    def inverse(self) -> "FormalSeries":
        """1/f for f with a nonzero leading coefficient (Laurent allowed)."""
        a = self.normalized()
        if not a.coefficients:
            raise ZeroDivisionError("inverse of a zero series")
        n = a.order - a.offset
        c0 = a.coefficients[0]
        out: list[Fraction] = []
        for k in range(n):
            s = Fraction(1) if k == 0 else Fraction(0)
            for i in range(1, k + 1):
                if i < len(a.coefficients):
                    s -= a.coefficients[i] * out[k - i]
            out.append(s / c0)
        return FormalSeries(-a.offset, out, n - a.offset)

    def __truediv__(self, other) -> "FormalSeries":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * other.inverse()

    def derivative(self) -> "FormalSeries":
        return FormalSeries(
            self.offset - 1,
            [c * (self.offset + i) for i, c in enumerate(self.coefficients)],
            self.order - 1,
        )

    def integral(self) -> "FormalSeries":
        """Antiderivative with zero constant term (needs no z^-1 term)."""
        if self.offset < 0 and self.coeff(-1):
            raise ValueError("series has a z^-1 term")
        lo = max(self.offset, 0)
        coeffs = [self.coeff(k) / (k + 1) for k in range(lo, self.order)]
        return FormalSeries(lo + 1, coeffs, self.order + 1)

    def compose(self, g: "FormalSeries") -> "FormalSeries":
        """f(g(z)) for a power series f and g with zero constant term."""
        if self.offset < 0:
            raise ValueError("outer series must be a power series")
        gn = g.normalized()
        if gn.offset < 1:
            raise ValueError("inner series must have zero constant term")
        order = self.order if self.order <= 0 else min(g.order, gn.offset * self.order)
        # Horner from the top coefficient
        result = FormalSeries.constant(0, order)
        for k in range(self.order - 1, -1, -1):
            result = result * gn + FormalSeries.constant(self.coeff(k), order)
            result = result.truncate(order)
        return result

    def log(self) -> "FormalSeries":
        """log f for a power series with constant term 1."""
        if self.offset < 0 or self.coeff(0) != 1:
            raise ValueError("log needs constant term 1")
        return (self.derivative() / self).integral().truncate(self.order)

    def exp(self) -> "FormalSeries":
        """exp f for a power series with zero constant term."""
        if self.offset < 0 or self.coeff(0) != 0:
            raise ValueError("exp needs zero constant term")
        return exp_series(self.order).compose(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        lo = min(self.offset, other.offset)
        return all(self.coeff(k) == other.coeff(k) for k in range(lo, self.order))

    def __hash__(self) -> int:
        return hash((self.order, tuple(self.coeff(k) for k in range(min(self.offset, 0), self.order))))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{self.offset + i}" for i, c in enumerate(self.coefficients) if c]
        return f"FormalSeries({' + '.join(terms) or '0'} + O(z^{self.order}))"


def _lift(x, order: int) -> FormalSeries:
    if isinstance(x, FormalSeries):
        return x
    return FormalSeries.constant(x, order)


# --------------------------------------------------------------------------
# named series


def exp_series(K: int) -> FormalSeries:
    return FormalSeries.from_function(lambda k: Fraction(1, math.factorial(k)), K)


def bernoulli_gf(K: int) -> FormalSeries:
    """z/(e^z - 1) = sum B_n z^n/n!."""
    return FormalSeries.from_function(lambda k: bernoulli_number(k) / math.factorial(k), K)


def log_one_minus_exp_over_z(K: int) -> FormalSeries:
    """log((1 - e^-z)/z) = sum_{n>=1} B_n z^n / (n n!)."""
    return FormalSeries.from_function(
        lambda k: Fraction(0) if k == 0 else bernoulli_number(k) / (k * math.factorial(k)), K
    )


def inv_one_minus_exp(K: int) -> FormalSeries:
    """1/(1 - e^-z) = z^-1 sum (-1)^n B_n z^n/n!, known below z^K."""
    return FormalSeries.from_function(
        lambda k: (-1) ** (k + 1) * bernoulli_number(k + 1) / math.factorial(k + 1), K, offset=-1
    )


def ei_entire_part(K: int) -> FormalSeries:
    """sum_{n>=1} (-1)^n z^n / (n n!)."""
    return FormalSeries.from_function(
        lambda k: Fraction(0) if k == 0 else Fraction((-1) ** k, k * math.factorial(k)), K
    )


def _mono_sum(k: int) -> Fraction:
    """Ramanujan sum of n^k: 1/2 at k = 0, else (1 - B_{k+1})/(k+1)."""
    if k == 0:
        return Fraction(1, 2)
    return (1 - bernoulli_number(k + 1)) / (k + 1)


def lemma1_qpart(K: int, upper: str = "k") -> FormalSeries:
    """Rational part of the e^{nz} log n generating function.

    sum_{k>=1} z^k H_k/k! (1 - B_{k+1})/(k+1)
      + sum_{k>=1} z^k sum_{m=1}^{k or k+1} B_m/m! H_{k-m+1}/(k-m+1)!
    """
    if upper not in ("k", "k+1"):
        raise ValueError("upper must be 'k' or 'k+1'")
    extra = 1 if upper == "k+1" else 0

    def coeff(k: int) -> Fraction:
        if k == 0:
            return Fraction(0)
        c = harmonic_number(k) / math.factorial(k) * _mono_sum(k)
        for m in range(1, k + 1 + extra):
            r = k - m + 1
            c += bernoulli_number(m) / math.factorial(m) * harmonic_number(r) / math.factorial(r)
        return c

    return FormalSeries.from_function(coeff, K)


def lemma2_qpart(K: int) -> FormalSeries:
    """1/(1 - e^-z) [log(z/(1 - e^-z)) + sum (-1)^n z^n/(n n!)]."""
    bracket = ei_entire_part(K) - log_one_minus_exp_over_z(K)
    return inv_one_minus_exp(K) * bracket


def theorem1_qpart(K: int) -> FormalSeries:
    """Q[[z]] part of sum^R e^{nz} log n + e^z sum^R e^{-nz} H_n."""
    return lemma1_qpart(K) + exp_series(K) * lemma2_qpart(K)


def corollary_rational(k: int, K: int | None = None) -> Fraction:
    """Rational constant r_k = k! [z^k] of the theorem-1 rational part.

    With A_k = sum^R n^k log n and Y_k = sum^R (1 - n)^k H_n this gives
    A_k + Y_k = gamma B_{k+1}(2)/(k+1) + r_k.  Needs K >= k + 2.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if K is None:
        K = k + 2
    return theorem1_qpart(K).coeff(k) * math.factorial(k)


_KINDS = {
    "exp": exp_series,
    "bernoulli_gf": bernoulli_gf,
    "log_one_minus_exp_over_z": log_one_minus_exp_over_z,
    "inv_one_minus_exp": inv_one_minus_exp,
    "ei_entire_part": ei_entire_part,
    "lemma1_qpart": lemma1_qpart,
    "lemma2_qpart": lemma2_qpart,
    "theorem1_qpart": theorem1_qpart,
}

KINDS = tuple(_KINDS) + ("corollary_rational",)


def formal_series(kind: str, K: int, k: int | None = None, **kw) -> FormalSeries:
    """Named series truncated at z^K; ``corollary_rational`` needs ``k``."""
    if kind == "corollary_rational":
        if k is None:
            raise ValueError("corollary_rational needs k")
        if K < k + 2:
            raise TruncationError(f"corollary_rational({k}) needs K >= {k + 2}, got {K}")
        return FormalSeries.constant(corollary_rational(k, K), K)
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown series kind {kind!r}") from None
    return fn(K, **kw)


def series_value(fs: FormalSeries, z, ctx, upto: int | None = None):
    """Numerically sum the known part of ``fs`` at z."""
    mp = ctx.mp
    z = ctx.mpf(z)
    hi = fs.order if upto is None else min(upto, fs.order)
    total = mp.zero
    for k in range(fs.offset, hi):
        c = fs.coeff(k)
        if c:
            total += mp.mpf(c.numerator) / c.denominator * z**k
    return total


def binomial_transform(values: Iterable[Fraction]) -> list[Fraction]:
    """b_k = sum_i C(k, i) (-1)^i a_i; an involution."""
    a = list(values)
    return [sum((math.comb(k, i) * (-1) ** i * a[i] for i in range(k + 1)), Fraction(0)) for k in range(len(a))]
