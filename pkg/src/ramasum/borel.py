"""Laplace transforms on [0, inf) and Borel sums of factorially divergent series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence, Union

from .errors import (
    ContinuationError,
    DegenerateDenominatorError,
    DomainError,
    InsufficientCoefficientsError,
    TailBoundError,
)
from .numeric import BigReal, PrecisionContext
from .quadrature import chain, geometric_points, graded_points, integrate, integrate_panels

_KINDS = ("const", "log", "power", "exp")


@dataclass(frozen=True)
class TailModel:
    """Growth bound used past the cut A.

    const: |f| <= K; log: |f| <= K (1 + log(1 + x)); power: |f| <= K (1 + x)^p;
    exp: |f| <= K e^{p x}.  With ``K=None`` the constant is estimated from samples
    of f on [A/2, A] with a safety factor of 4.
    """

    kind: str = "log"
    K: Any = None
    p: Any = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown tail model {self.kind!r}; expected one of {_KINDS}")


@dataclass(frozen=True)
class LaplaceConfig:
    """Quadrature and tail settings.

    ``panel_order`` is the minimum number of Gauss nodes in the high-order rule
    of each panel; ``cut`` fixes A (otherwise A starts at max(30/z, 30) and is
    doubled until the tail bound is below tolerance); ``graded_levels`` > 0
    grades panels toward 0 for integrands with an x^-s endpoint factor.
    """

    panel_order: int = 64
    cut: Any = None
    tail_bound_model: Union[TailModel, str] = "log"
    graded_levels: int = 0
    max_doublings: int = 8

    def __post_init__(self) -> None:
        if self.panel_order < 4:
            raise ValueError("panel_order must be >= 4")
        if self.cut is not None and not float(self.cut) > 0:
            raise ValueError("cut A must be positive")
        if isinstance(self.tail_bound_model, str):
            object.__setattr__(self, "tail_bound_model", TailModel(self.tail_bound_model))

    @property
    def model(self) -> TailModel:
        return self.tail_bound_model  # type: ignore[return-value]


def _mpv(x, mp):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def _shape(model: TailModel, x, mp):
    if model.kind == "const":
        return mp.one
    if model.kind == "log":
        return 1 + mp.log(1 + x)
    if model.kind == "power":
        return (1 + x) ** _mpv(model.p, mp)
    return mp.exp(_mpv(model.p, mp) * x)


def _tail_bound(model: TailModel, K, A, z, mp):
    """Upper bound of K int_A^inf e^{-zx} shape(x) dx; inf when the model does not decay."""
    e = mp.exp(-z * A)
    if model.kind == "const":
        return K * e / z
    if model.kind == "log":
        # log(1+x) <= log(1+A) + (x-A)/(1+A)
        return K * e * ((1 + mp.log(1 + A)) / z + 1 / (z * z * (1 + A)))
    if model.kind == "power":
        p = _mpv(model.p, mp)
        rate = z - max(p, 0) / (1 + A)
        if rate <= 0:
            return mp.inf
        return K * e * (1 + A) ** p / rate
    rate = z - _mpv(model.p, mp)
    if rate <= 0:
        return mp.inf
    return K * mp.exp(-rate * A) / rate


def _estimate_K(f, model: TailModel, A, mp):
    worst = mp.zero
    for frac in (mp.mpf(1) / 2, mp.mpf(3) / 4, mp.one):
        x = A * frac
        worst = max(worst, abs(f(x)) / _shape(model, x, mp))
    return 4 * worst + mp.eps


def laplace_transform(f: Callable, z, cfg: LaplaceConfig | None = None,
                      ctx: PrecisionContext | None = None) -> BigReal:
    """int_0^inf e^{-xz} f(x) dx with an analytic tail bound included in the error."""
    ctx = ctx or PrecisionContext()
    cfg = cfg or LaplaceConfig()
    mp = ctx.mp
    z = ctx.mpf(z)
    if z <= 0:
        raise DomainError("Laplace transform needs z > 0")
    tol = ctx.target_tol
    model = cfg.model
    A = ctx.mpf(cfg.cut) if cfg.cut is not None else max(30 / z, mp.mpf(30))
    for _ in range(cfg.max_doublings + 1):
        K = ctx.mpf(model.K) if model.K is not None else _estimate_K(f, model, A, mp)
        bound = _tail_bound(model, K, A, z, mp)
        if bound < tol / 4 or cfg.cut is not None:
            break
        A *= 2
    if not bound < tol / 4:
        raise TailBoundError(
            f"{model.kind} tail bound {mp.nstr(bound, 3)} at A = {mp.nstr(A, 6)} exceeds {mp.nstr(tol, 3)}"
        )
    g = lambda x: mp.exp(-z * x) * f(x)
    width = max(mp.one, 8 / z)
    inner, inner_err = mp.zero, mp.zero
    if cfg.graded_levels > 0:
        head = graded_points(0, 1, ctx, cfg.graded_levels)
        # tanh-sinh copes with the endpoint singularity on the innermost piece
        inner, inner_err = mp.quad(g, [0, head[0]], error=True)
    else:
        head = [mp.zero, mp.one]
    pts = chain(head, geometric_points(1, A, ctx, max_width=width))
    q = integrate_panels(g, pts, ctx, tol / 4)
    value = q.value + inner
    return BigReal(value, q.err + inner_err + bound + ctx.mp.ldexp(abs(value), 4 - ctx.bits))


# --------------------------------------------------------------------------
# Pade approximants


@dataclass(frozen=True)
class PadeApproximant:
    """p(x)/q(x) with q(0) = 1; coefficients lowest degree first."""

    numerator: tuple
    denominator: tuple

    @property
    def order(self) -> int:
        return len(self.denominator) - 1

    def __call__(self, x, ctx: PrecisionContext | None = None):
        ctx = ctx or PrecisionContext()
        mp = ctx.mp
        x = ctx.mpf(x)
        return _horner(self.numerator, x, ctx) / _horner(self.denominator, x, ctx)

    def real_poles(self, a, b, ctx: PrecisionContext) -> list:
        """Real zeros of the denominator in [a, b]."""
        mp = ctx.mp
        coeffs = [_to_mp(c, ctx) for c in self.denominator]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) == 1:
            return []
        roots = mp.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=ctx.bits)
        out = []
        for r in roots:
            if abs(mp.im(r)) <= mp.ldexp(1 + abs(r), 16 - ctx.bits // 2) and a <= mp.re(r) <= b:
                out.append(mp.re(r))
        return sorted(out)


def _to_mp(c, ctx: PrecisionContext):
    if isinstance(c, Fraction):
        return ctx.mp.mpf(c.numerator) / c.denominator
    return ctx.mpf(c)


def _horner(coeffs: Sequence, x, ctx: PrecisionContext):
    acc = ctx.mp.zero
    for c in reversed(coeffs):
        acc = acc * x + _to_mp(c, ctx)
    return acc


def _solve_exact(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rhs)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise DegenerateDenominatorError("singular Pade system")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                fac = A[r][col] * inv
                A[r] = [a - fac * b for a, b in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def _quotient_coeffs(p: Sequence, q: Sequence, count: int) -> list:
    """Taylor coefficients of p/q up to ``count`` terms (q[0] = 1)."""
    out = []
    for k in range(count):
        v = p[k] if k < len(p) else 0 * q[0]
        for j in range(1, min(k, len(q) - 1) + 1):
            v -= q[j] * out[k - j]
        out.append(v)
    return out


def _pade_exact(a: list, m: int):
    # a singular [m/m] system means the table has a block: try smaller denominators
    for d in range(m, -1, -1):
        M = [[a[m + i - j] if m + i - j >= 0 else Fraction(0) for j in range(1, d + 1)] for i in range(1, d + 1)]
        rhs = [-a[m + i] for i in range(1, d + 1)]
        try:
            q = [Fraction(1)] + (_solve_exact(M, rhs) if d else [])
        except DegenerateDenominatorError:
            continue
        p = [sum((q[j] * a[k - j] for j in range(min(k, d) + 1)), Fraction(0)) for k in range(m + 1)]
        if _quotient_coeffs(p, q, 2 * m + 1) == a:
            return PadeApproximant(tuple(p), tuple(q))
        break
    raise DegenerateDenominatorError(f"no [{m}/{m}] Pade approximant matches the prefix")


def pade_continuation(coeff_prefix: Sequence, m: int, ctx: PrecisionContext | None = None) -> PadeApproximant:
    """Diagonal [m/m] Pade approximant from Taylor coefficients a_0..a_{2m}.

    Exact rational arithmetic when every coefficient is a rational, otherwise
    the linear system is solved at twice the working precision.
    """
    if m < 0:
        raise ValueError("order must be non-negative")
    if len(coeff_prefix) < 2 * m + 1:
        raise InsufficientCoefficientsError(f"[{m}/{m}] needs {2 * m + 1} coefficients, got {len(coeff_prefix)}")
    a = list(coeff_prefix[: 2 * m + 1])
    if all(isinstance(c, (int, Fraction)) for c in a):
        return _pade_exact([Fraction(c) for c in a], m)
    ctx = ctx or PrecisionContext()
    wctx = ctx.with_bits(2 * ctx.bits)
    mp = wctx.mp
    a = [_to_mp(c, wctx) for c in a]
    q = [mp.one]
    if m:
        M = mp.matrix(m, m)
        rhs = mp.matrix(m, 1)
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                M[i - 1, j - 1] = a[m + i - j] if m + i - j >= 0 else 0
            rhs[i - 1] = -a[m + i]
        try:
            sol = mp.lu_solve(M, rhs)
        except ZeroDivisionError as exc:
            raise DegenerateDenominatorError("singular Pade system") from exc
        q += [sol[i] for i in range(m)]
    if any(not mp.isfinite(c) for c in q):
        raise DegenerateDenominatorError("singular Pade system")
    p = [mp.fsum(q[j] * a[k - j] for j in range(k + 1)) for k in range(m + 1)]
    # an ill-posed system shows up as a prefix the approximant fails to reproduce
    scale = max(abs(c) for c in a) + 1
    back = _quotient_coeffs(p, q, 2 * m + 1)
    if max(abs(x - y) for x, y in zip(back, a)) > mp.ldexp(scale, -ctx.bits // 2):
        raise DegenerateDenominatorError(f"[{m}/{m}] Pade system is numerically singular")
    return PadeApproximant(tuple(+ctx.mp.mpf(c) for c in p), tuple(+ctx.mp.mpf(c) for c in q))


# --------------------------------------------------------------------------
# Borel series


@dataclass(frozen=True)
class ClosedForm:
    """Closed form g(x, ctx) of the Borel transform sum c_n x^n / n!."""

    fn: Callable


@dataclass(frozen=True)
class PadeDiagonal:
    m: int


@dataclass(frozen=True)
class BorelSeries:
    """Formal series sum c_n / z^{n+1}; ``coefficients`` is a sequence or a callable n -> c_n."""

    coefficients: Any
    continuation: Union[ClosedForm, PadeDiagonal] = field(default_factory=lambda: PadeDiagonal(10))

    def coefficient(self, n: int):
        c = self.coefficients
        return c(n) if callable(c) else c[n]

    def prefix(self, count: int) -> list:
        """Taylor coefficients c_n / n! of the Borel transform, n < count."""
        out = []
        for n in range(count):
            c = self.coefficient(n)
            if isinstance(c, (int, Fraction)):
                out.append(Fraction(c) / math.factorial(n))
            else:
                out.append(c / math.factorial(n))
        return out

    def radius_estimate(self, count: int = 21, ctx: PrecisionContext | None = None):
        """Root-test estimate min |a_n|^{-1/n} over the second half of the prefix."""
        ctx = ctx or PrecisionContext()
        mp = ctx.mp
        try:
            a = self.prefix(count)
        except (IndexError, KeyError):
            return None
        best = None
        for n in range(max(1, count // 2), count):
            v = abs(_to_mp(a[n], ctx))
            if v == 0:
                continue
            r = v ** (-mp.one / n)
            best = r if best is None else min(best, r)
        return best


def _check_radius(series: BorelSeries, count: int, ctx: PrecisionContext) -> None:
    if count < 8:
        return
    r = series.radius_estimate(count, ctx)
    # factorially growing Taylor coefficients give r close to e/n
    if r is not None and r * count < 4:
        raise DomainError(
            f"Borel transform looks entire-free (radius estimate {ctx.mp.nstr(r, 4)}); series is not Borel summable"
        )


def borel_sum(series: BorelSeries, z, cfg: LaplaceConfig | None = None,
              ctx: PrecisionContext | None = None) -> BigReal:
    """int_0^inf e^{-xz} g(x) dx with g the continued Borel transform."""
    ctx = ctx or PrecisionContext()
    cfg = cfg or LaplaceConfig()
    cont = series.continuation
    if isinstance(cont, ClosedForm):
        return laplace_transform(lambda x: cont.fn(x, ctx), z, cfg, ctx)
    m = cont.m
    count = 2 * m + 1
    _check_radius(series, count, ctx)
    prefix = series.prefix(count)
    approx = None
    while m >= 0:
        try:
            approx = pade_continuation(prefix, m, ctx)
            break
        except DegenerateDenominatorError:
            m -= 1
    if approx is None:
        raise DegenerateDenominatorError("no non-degenerate Pade approximant")
    zf = ctx.mpf(z)
    A = ctx.mpf(cfg.cut) if cfg.cut is not None else max(30 / zf, ctx.mpf(30))
    reach = A * 2 ** cfg.max_doublings
    poles = approx.real_poles(0, reach, ctx)
    if poles:
        raise ContinuationError(
            f"Pade [{m}/{m}] has a pole at x = {ctx.mp.nstr(poles[0], 8)} on the integration path"
        )
    model = cfg.model
    if cfg.cut is None and model.kind == "log" and model.K is None:
        # a diagonal rational function is bounded on the axis once poles are excluded
        cfg = LaplaceConfig(cfg.panel_order, None, TailModel("const"), cfg.graded_levels, cfg.max_doublings)
    return laplace_transform(lambda x: approx(x, ctx), z, cfg, ctx)


def geometric_borel_series(a) -> BorelSeries:
    """c_n = a^n: the Borel sum of sum a^n / z^{n+1} is 1/(z - a) for z > a."""
    return BorelSeries(lambda n: Fraction(a) ** n if isinstance(a, (int, Fraction)) else a**n,
                       ClosedForm(lambda x, ctx: ctx.mp.exp(ctx.mpf(a) * x)))


def alternating_factorial_series() -> BorelSeries:
    """c_n = (-1)^n n!, Borel transform 1/(1 + x)."""
    return BorelSeries(lambda n: (-1) ** n * math.factorial(n), ClosedForm(lambda x, ctx: 1 / (1 + x)))


__all__ = [
    "TailModel", "LaplaceConfig", "laplace_transform", "PadeApproximant", "pade_continuation",
    "ClosedForm", "PadeDiagonal", "BorelSeries", "borel_sum", "geometric_borel_series",
    "alternating_factorial_series",
]
