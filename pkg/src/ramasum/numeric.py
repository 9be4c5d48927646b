"""Precision contexts, error-carrying reals and elementary functions.

Every routine in the package takes an explicit :class:`PrecisionContext`.
Arithmetic happens in a thread-local ``mpmath.MPContext`` per bit width, so
no global ``mpmath.mp`` state is ever read or written.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple, Sequence

import mpmath
from mpmath.ctx_mp import MPContext
from mpmath.ctx_mp_python import _mpf

from .errors import DomainError, PrecisionError

MIN_BITS = 64
DEFAULT_BITS = 256

_local = threading.local()


def mp_for(bits: int) -> MPContext:
    """Return this thread's mpmath context fixed at ``bits`` of precision."""
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(bits)
    if ctx is None:
        ctx = MPContext()
        ctx.prec = bits
        cache[bits] = ctx
    return ctx


def _default_tol(bits: int) -> Fraction:
    digits = int(bits * math.log10(2))
    return Fraction(1, 10 ** max(6, int(0.4 * digits)))


@dataclass(frozen=True)
class PrecisionContext:
    """Working binary precision plus the tolerance iterative routines aim for."""

    bits: int = DEFAULT_BITS
    target_tol: Any = None

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or self.bits < MIN_BITS:
            raise PrecisionError(f"precision must be >= {MIN_BITS} bits, got {self.bits!r}")
        tol = _default_tol(self.bits) if self.target_tol is None else self.target_tol
        tol = self.mp.mpf(to_mpf_string(tol)) if not isinstance(tol, _mpf) else +self.mp.mpf(tol)
        if not tol > 0:
            raise PrecisionError("target_tol must be positive")
        if tol < self.mp.ldexp(1, -self.bits):
            raise PrecisionError(f"target_tol {tol} is not representable at {self.bits} bits")
        object.__setattr__(self, "target_tol", tol)

    @property
    def mp(self) -> MPContext:
        return mp_for(self.bits)

    @property
    def digits(self) -> int:
        return int(self.bits * math.log10(2))

    @property
    def eps(self):
        return self.mp.ldexp(1, 1 - self.bits)

    def mpf(self, x: Any):
        """Convert ``x`` (int, Fraction, str, float, mpf or BigReal) at this precision."""
        return to_mpf(x, self)

    def with_bits(self, bits: int) -> "PrecisionContext":
        tol = self.target_tol
        if tol < mpmath.ldexp(1, -bits):
            tol = None
        return PrecisionContext(bits, tol)

    def with_guard(self, extra: int) -> "PrecisionContext":
        return self.with_bits(self.bits + max(0, int(extra)))

    def with_tol(self, tol: Any) -> "PrecisionContext":
        return PrecisionContext(self.bits, tol)

    @classmethod
    def for_tolerance(cls, tol: Any) -> "PrecisionContext":
        """Context sized for identity checks: max(256, 4 * digits(tol) * 3.33) bits."""
        digits = max(1, -math.floor(math.log10(float(Fraction(str(tol))))))
        return cls(max(DEFAULT_BITS, math.ceil(4 * digits * 3.33)), tol)


def to_mpf_string(x: Any) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def to_mpf(x: Any, ctx: PrecisionContext):
    mp = ctx.mp
    if isinstance(x, BigReal):
        return +mp.mpf(x.value)
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, (int, _mpf)):
        return +mp.mpf(x)
    if isinstance(x, float):
        return mp.mpf(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return mp.mpf(int(num)) / int(den)
        return mp.mpf(s)
    return mp.mpf(x)


@dataclass(frozen=True)
class BigReal:
    """An arbitrary-precision real with a first-order error radius."""

    value: Any
    err: Any = field(default=0)

    def __post_init__(self) -> None:
        if self.err < 0:
            raise ValueError("error radius must be non-negative")

    @classmethod
    def exact(cls, x: Any, ctx: PrecisionContext) -> "BigReal":
        return cls(to_mpf(x, ctx), ctx.mp.zero)

    def __float__(self) -> float:
        return float(self.value)

    def __neg__(self) -> "BigReal":
        return BigReal(-self.value, self.err)

    def __add__(self, other: Any) -> "BigReal":
        o = _as_big(other)
        return BigReal(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "BigReal":
        o = _as_big(other)
        return BigReal(self.value - o.value, self.err + o.err)

    def __rsub__(self, other: Any) -> "BigReal":
        return _as_big(other) - self

    def __mul__(self, other: Any) -> "BigReal":
        o = _as_big(other)
        return BigReal(self.value * o.value, abs(self.value) * o.err + abs(o.value) * self.err)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "BigReal":
        o = _as_big(other)
        if o.value == 0:
            raise ZeroDivisionError("division by zero")
        q = self.value / o.value
        return BigReal(q, (self.err + abs(q) * o.err) / abs(o.value))

    def __rtruediv__(self, other: Any) -> "BigReal":
        return _as_big(other) / self

    def decimal(self, digits: int | None = None) -> str:
        """Scientific decimal string; ``digits`` defaults to the value's precision."""
        return format_decimal(self.value, digits)

    def __str__(self) -> str:
        return self.decimal()


def _as_big(x: Any) -> BigReal:
    if isinstance(x, BigReal):
        return x
    if isinstance(x, Fraction):
        x = mpmath.mpf(x.numerator) / x.denominator
    return BigReal(x, 0)


def format_decimal(x: Any, digits: int | None = None) -> str:
    """Decimal scientific notation with a precision-derived digit count."""
    if isinstance(x, _mpf):
        ctx = x.context
        if digits is None:
            digits = max(1, int(ctx.prec * math.log10(2)) - 2)
        return ctx.nstr(x, digits, min_fixed=1, max_fixed=0, strip_zeros=False)
    return format_decimal(mpmath.mpf(x), digits or 15)


def _ulps(v, ctx: PrecisionContext, n: int = 4):
    if v == 0:
        return ctx.mp.zero
    return ctx.mp.ldexp(abs(v), n.bit_length() - ctx.bits)


ELEMENTARY = ("exp", "log", "pow", "sin", "atan", "pi", "const_e")


def evaluate_elementary(name: str, args: Sequence[Any], ctx: PrecisionContext) -> BigReal:
    """Evaluate an elementary function, returning a value with error radius."""
    mp = ctx.mp
    xs = [a if isinstance(a, BigReal) else BigReal(to_mpf(a, ctx), mp.zero) for a in args]
    vals = [to_mpf(a.value, ctx) for a in xs]
    errs = [mp.mpf(a.err) for a in xs]
    arity = {"exp": 1, "log": 1, "sin": 1, "atan": 1, "pow": 2, "pi": 0, "const_e": 0}
    if name not in arity:
        raise ValueError(f"unknown elementary function {name!r}")
    if len(vals) != arity[name]:
        raise TypeError(f"{name} takes {arity[name]} argument(s), got {len(vals)}")

    if name == "pi":
        return BigReal(+mp.pi, _ulps(mp.pi, ctx))
    if name == "const_e":
        return BigReal(+mp.e, _ulps(mp.e, ctx))
    x, ex = vals[0], errs[0]
    if name == "exp":
        v = mp.exp(x)
        exact = x == 0
        return BigReal(v, mp.zero if exact and ex == 0 else _ulps(v, ctx) + v * ex)
    if name == "log":
        if x <= 0:
            raise DomainError(f"log requires a positive argument, got {mp.nstr(x, 10)}")
        v = mp.log(x)
        exact = x == 1
        return BigReal(v, mp.zero if exact and ex == 0 else _ulps(v, ctx) + _ulps(1, ctx) + ex / x)
    if name == "sin":
        v = mp.sin(x)
        return BigReal(v, _ulps(v, ctx) + abs(mp.cos(x)) * ex)
    if name == "atan":
        v = mp.atan(x)
        return BigReal(v, _ulps(v, ctx) + ex / (1 + x * x))
    # pow
    y, ey = vals[1], errs[1]
    if x < 0 and y != int(y):
        raise DomainError("pow of a negative base needs an integer exponent")
    if x == 0 and y <= 0:
        raise DomainError("pow(0, y) needs y > 0")
    v = mp.power(x, y)
    err = _ulps(v, ctx)
    if ex:
        err += abs(y * mp.power(x, y - 1)) * ex
    if ey and x > 0:
        err += abs(v * mp.log(x)) * ey
    if y == 0 and ey == 0:
        err = mp.zero
    return BigReal(v, err)


class Comparison(NamedTuple):
    ok: bool
    diff: Any


def compare_within(a: Any, b: Any, tol: Any) -> Comparison:
    """True iff ``|a - b| <= tol + a.err + b.err``; always returns ``a - b``."""
    a, b = _as_big(a), _as_big(b)
    diff = a.value - b.value
    return Comparison(bool(abs(diff) <= tol + a.err + b.err), diff)
