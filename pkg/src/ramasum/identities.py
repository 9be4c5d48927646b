"""Dual-path verification of the summation identities.

Every check computes a left and a right side along independent routes and
reports their difference against a tolerance fixed by the dominant numerical
error source of the check.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

from . import borel as bl
from . import catalog as cat
from . import engine as eng
from .errors import ConvergenceError, DomainError, MissingParameterError, RamasumError, UnknownCheckError
from .expr import differentiate, eval_mpf, parse, to_text
from .formal import corollary_rational, lemma1_qpart, theorem1_qpart
from .numeric import BigReal, PrecisionContext, format_decimal
from .quadrature import integrate_panels
from .special import (
    BERNOULLI,
    bernoulli_polynomial,
    ei_negative,
    entire_ei_part,
    euler_gamma,
    harmonic_number,
    polygamma,
    polylog,
    zeta,
    zeta_and_derivative,
    zeta_or_gamma,
)

EXACT = Fraction(1, 10**30)
QUAD = Fraction(1, 10**20)
IMPROPER = Fraction(1, 10**10)
RESIDUE = Fraction(1, 10**4)

Z_GRID = ("0.3", "0.5", "1.0", "1.5", "2.0")
K_GRID = (0, 1, 2, 3)
J_GRID = (2, 3)

STATUSES = ("pass", "fail", "hypothesis_pass", "hypothesis_fail", "precision_insufficient")


@dataclass
class IdentityReport:
    check_id: str
    params: dict
    lhs: BigReal | None
    rhs: BigReal | None
    abs_diff: BigReal | None
    tolerance: Any
    status: str
    runtime_ms: float
    precision_bits: int
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "hypothesis_pass", "hypothesis_fail")

    @property
    def hypothesis(self) -> bool:
        return self.status.startswith("hypothesis")

    def to_json(self, digits: int | None = None) -> dict:
        def dec(x):
            return None if x is None else x.decimal(digits)

        return {
            "check_id": self.check_id,
            "params": self.params,
            "lhs": dec(self.lhs),
            "rhs": dec(self.rhs),
            "abs_diff": None if self.abs_diff is None else format_decimal(self.abs_diff.value, 6),
            "tolerance": _fraction_text(self.tolerance),
            "status": self.status,
            "runtime_ms": f"{self.runtime_ms:.1f}",
            "precision_bits": self.precision_bits,
            "notes": self.notes,
        }


def _fraction_text(q) -> str:
    if isinstance(q, Fraction) and q.numerator == 1 and _is_power_of_ten(q.denominator):
        return f"1e-{len(str(q.denominator)) - 1}"
    return str(q)


def _is_power_of_ten(n: int) -> bool:
    s = str(n)
    return s[0] == "1" and set(s[1:]) <= {"0"}


@dataclass(frozen=True)
class _Outcome:
    lhs: Any
    rhs: Any
    lhs_err: Any = 0
    rhs_err: Any = 0
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Check:
    check_id: str
    fn: Callable[[dict, PrecisionContext], _Outcome]
    tolerance: Fraction
    grid: tuple
    hypothesis: bool = False
    doc: str = ""


_REGISTRY: dict[str, Check] = {}


def _register(check_id: str, tolerance: Fraction, grid: Iterable[dict] = ({},), hypothesis: bool = False):
    def wrap(fn):
        _REGISTRY[check_id] = Check(check_id, fn, tolerance, tuple(grid), hypothesis, (fn.__doc__ or "").strip())
        return fn

    return wrap


def registered() -> list[str]:
    return sorted(_REGISTRY)


def _z(params: dict, ctx: PrecisionContext):
    if "z" not in params:
        raise MissingParameterError("check needs parameter z")
    return ctx.mpf(str(params["z"]))


def _zgrid(values=Z_GRID) -> list[dict]:
    return [{"z": v} for v in values]


def _mpq(q: Fraction, ctx: PrecisionContext):
    return ctx.mp.mpf(q.numerator) / q.denominator


# --------------------------------------------------------------------------
# shared pieces


def direct_exp_log_sum(z, ctx: PrecisionContext):
    """(value, err) of the convergent sum of e^{-nz} log n, z > 0."""
    mp = ctx.mp
    z = ctx.mpf(z)
    q = mp.exp(-z)
    total = mp.zero
    n = 1
    while True:
        total += mp.exp(-n * z) * mp.log(n)
        if n >= 2:
            # m >= n+1: the term ratio is at most q log(n+2)/log(n+1) < 1
            nxt = mp.exp(-(n + 1) * z) * mp.log(n + 1)
            ratio = q * mp.log(n + 2) / mp.log(n + 1)
            if ratio < 1:
                tail = nxt / (1 - ratio)
                if tail < ctx.eps * abs(total):
                    return total, tail + mp.ldexp(abs(total), 8 - ctx.bits)
        n += 1


def zeta_prime_gf(z, ctx: PrecisionContext, terms: int | None = None, sign: int = 1):
    """(value, remainder estimate, terms used) of sum_k (sign z)^k zeta'(-k)/k!, |z| < 2 pi.

    zeta'(-k)/k! decays like (2 pi)^-k, so the remainder is estimated by the last
    term times q/(1 - q) with q = |z|/(2 pi).
    """
    mp = ctx.mp
    z = ctx.mpf(z) * sign
    q = abs(z) / (2 * mp.pi)
    if q >= 1:
        raise DomainError("generating function of zeta'(-k) needs |z| < 2 pi")
    wctx = ctx.with_guard(16)
    total = mp.zero
    zk = mp.one
    k = 0
    small = 0
    last = mp.zero
    while True:
        _, dz = zeta_and_derivative(-k, wctx)
        last = zk * dz / math.factorial(k)
        total += last
        if terms is not None:
            if k + 1 >= terms:
                break
        else:
            small = small + 1 if abs(last) < ctx.eps * max(abs(total), 1) else 0
            if small >= 3 and k > 4:
                break
        zk *= z
        k += 1
    rem = abs(last) * q / (1 - q) * 4 if k else abs(last)
    return +mp.mpf(total), rem, k + 1


def _ein_over_z(z, ctx: PrecisionContext):
    """sum_{k>=0} z^k / ((k+1)! (k+1))."""
    mp = ctx.mp
    total = mp.zero
    t = mp.one  # z^k / (k+1)!
    k = 0
    while True:
        term = t / (k + 1)
        total += term
        if k > 4 and abs(term) < ctx.eps * max(abs(total), 1):
            return total
        k += 1
        t = t * z / (k + 1)


def _hb_series(z, ctx: PrecisionContext):
    """sum_{k>=1} z^k H_k/k! (1 - B_{k+1})/(k+1); radius 2 pi."""
    mp = ctx.mp
    total = mp.zero
    zk = mp.one
    small = 0
    for k in range(1, 4096):
        zk *= z
        c = harmonic_number(k) / math.factorial(k) * cat.monomial_sum(k)
        term = _mpq(c, ctx) * zk
        total += term
        small = small + 1 if abs(term) < ctx.eps * max(abs(total), 1) else 0
        if small >= 4:
            return total
    raise ConvergenceError("series did not converge")


def _shadow(expr: str, z, ctx: PrecisionContext) -> eng.RamanujanResult:
    return eng.sum_via_cgt(parse(expr), z, ctx)


# --------------------------------------------------------------------------
# individual checks


@_register("lemma1", QUAD, _zgrid())
def _lemma1(p, ctx):
    """Taylor-coefficient path against the closed form of sum^R e^{nz} log n."""
    z = _z(p, ctx)
    a = eng.sum_via_taylor_coefficients(parse("exp(n*z)*log(n)"), z, None, ctx)
    v, e = cat.exp_log(z, ctx)
    return _Outcome(a.value.value, v, a.err, e, {"lhs_path": "TaylorCoefficient", "rhs_path": "closed form"})


@_register("lemma1_printed", QUAD, _zgrid(("0.5",)), hypothesis=True)
def _lemma1_printed(p, ctx):
    """As-printed double sum with an extra 1/k! against the Taylor path."""
    z = _z(p, ctx)
    mp = ctx.mp
    a = eng.sum_via_taylor_coefficients(parse("exp(n*z)*log(n)"), z, None, ctx)
    i01, e = cat.psi_exp_integral(z, ctx)
    ez = mp.exp(z)
    printed = ez / (ez - 1) * i01 + _hb_series(z, ctx)
    zk = mp.one
    for k in range(1, 400):
        zk *= z
        inner = sum(
            (BERNOULLI[m] / math.factorial(m) * harmonic_number(k - m + 1) / math.factorial(k - m + 1)
             for m in range(1, k + 1)),
            Fraction(0),
        )
        printed += _mpq(inner, ctx) * zk / math.factorial(k)
    return _Outcome(a.value.value, printed, a.err, e, {"reading": "1/k! factor on the double sum"})


@_register("lemma2", QUAD, _zgrid())
def _lemma2(p, ctx):
    """Euler-Maclaurin engine on e^{-xz}(psi(x+1) + gamma) against the closed form."""
    z = _z(p, ctx)
    a = eng.sum_via_euler_maclaurin(parse("H(n)*exp(-n*z)"), z, None, ctx)
    v, e = cat.exp_harmonic(z, ctx)
    return _Outcome(a.value.value, v, a.err, e, {"lhs_path": "EulerMaclaurin"})


@_register("lemma3", QUAD, _zgrid())
def _lemma3(p, ctx):
    """Series closed form of sum^R e^{-nz}/n against the shadow formula."""
    z = _z(p, ctx)
    v, e = cat.exp_over_n_series_form(z, ctx)
    a = _shadow("exp(-n*z)/n", z, ctx)
    return _Outcome(v, a.value.value, e, a.err)


@_register("lemma3_borel", QUAD, _zgrid())
def _lemma3_borel(p, ctx):
    """Series closed form against -log(1 - e^-z) - e^-z L(1/(x+1))(z) by numerical Laplace."""
    z = _z(p, ctx)
    mp = ctx.mp
    v, e = cat.exp_over_n_series_form(z, ctx)
    lt = bl.laplace_transform(lambda x: 1 / (x + 1), z, None, ctx)
    b = -mp.log(1 - mp.exp(-z)) - mp.exp(-z) * lt.value
    return _Outcome(v, b, e, mp.exp(-z) * lt.err)


@_register("borel_ei", QUAD, _zgrid(("0.5", "1.0", "2.0")))
def _borel_ei(p, ctx):
    """-e^-z L(1/(x+1))(z) against Ei(-z)."""
    z = _z(p, ctx)
    mp = ctx.mp
    lt = bl.laplace_transform(lambda x: 1 / (x + 1), z, None, ctx)
    return _Outcome(-mp.exp(-z) * lt.value, ei_negative(z, ctx), mp.exp(-z) * lt.err, 0)


@_register("lemma4", QUAD, _zgrid(("0.5", "1.0")))
def _lemma4(p, ctx):
    """Engine value of sum^R e^{-nz}/n against sum e^{-nz}/n - e^-z L(1/(x+1))(z)."""
    z = _z(p, ctx)
    mp = ctx.mp
    r = eng.ramanujan_sum(parse("exp(-n*z)/n"), z, ctx, use_catalog=False, cross_check=False)
    total = mp.zero
    n = 1
    q = mp.exp(-z)
    while True:
        t = mp.exp(-n * z) / n
        total += t
        if t * q / (1 - q) < ctx.eps * total:
            break
        n += 1
    lt = bl.laplace_transform(lambda x: 1 / (x + 1), z, None, ctx)
    return _Outcome(r.value.value, total - mp.exp(-z) * lt.value, r.err, lt.err,
                    {"lhs_path": str(r.strategy), "terms": n})


def _theorem1_lhs(z, ctx):
    """sum^R e^{nz} log n + e^z sum^R e^{-nz} H_n by engine paths that avoid the catalog."""
    mp = ctx.mp
    if z > 0:
        t1 = eng.sum_via_taylor_coefficients(parse("exp(n*z)*log(n)"), z, None, ctx)
        t2 = eng.sum_via_cgt(parse("exp(-n*z)*H(n)"), z, ctx)
    else:
        t1 = eng.sum_via_cgt(parse("exp(n*z)*log(n)"), z, ctx)
        t2 = eng.sum_via_euler_maclaurin(parse("exp(-n*z)*H(n)"), z, None, ctx)
    ez = mp.exp(z)
    return t1.value.value + ez * t2.value.value, t1.err + ez * t2.err, (str(t1.strategy), str(t2.strategy))


@_register("theorem1", QUAD, _zgrid(("-0.5",) + Z_GRID))
def _theorem1(p, ctx):
    """Full generating-function identity with explicit rational parts."""
    z = _z(p, ctx)
    mp = ctx.mp
    lhs, err, paths = _theorem1_lhs(z, ctx)
    g = euler_gamma(ctx)
    ez = mp.exp(z)
    q1, e1 = cat.lemma1_qpart_value(z, ctx)
    q2, e2 = cat.lemma2_qpart_value(z, ctx)
    rhs = g * (ez / (1 - mp.exp(-z)) - 1 / z) + q1 + ez * q2
    return _Outcome(lhs, rhs, err, e1 + ez * e2, {"lhs_paths": list(paths)})


@_register("remark3", QUAD, _zgrid())
def _remark3(p, ctx):
    """Catalog closed forms (whose [0, 1] integrals cancel) against the series form of sum^R e^{-nz}/n."""
    z = _z(p, ctx)
    mp = ctx.mp
    a, ea = cat.exp_log(z, ctx)
    b, eb = cat.exp_harmonic(z, ctx)
    ez = mp.exp(z)
    lhs = a + ez * b
    s = _shadow("exp(-n*z)/n", z, ctx)
    q1, e1 = cat.lemma1_qpart_value(z, ctx)
    rhs = ez / (1 - mp.exp(-z)) * s.value.value - euler_gamma(ctx) / z + q1
    return _Outcome(lhs, rhs, ea + ez * eb, ez / (1 - mp.exp(-z)) * s.err + e1)


def _corollary_rhs(k: int, ctx: PrecisionContext):
    """gamma S_k - log sqrt(2 pi) + sum_{m=1}^k C(k,m) (-1)^m zeta'(-m) + q_k."""
    wctx = ctx.with_guard(2 * k + 16)
    mp = wctx.mp
    g = euler_gamma(wctx)
    gpart = Fraction(3, 2) if k == 0 else cat.monomial_sum(k)
    zsum = mp.zero
    for m in range(k + 1):
        _, dz = zeta_and_derivative(-m, wctx)
        zsum += math.comb(k, m) * (-1) ** m * dz
    # q_k: binomial transform of r_i + 1/(i+1)^2
    qk = sum(
        (math.comb(k, i) * (-1) ** i * (corollary_rational(i, k + 2) + Fraction(1, (i + 1) ** 2))
         for i in range(k + 1)),
        Fraction(0),
    )
    v = g * _mpq(gpart, wctx) + zsum + _mpq(qk, wctx)
    return +ctx.mp.mpf(v), qk


@_register("corollary1", QUAD, [{"k": k} for k in K_GRID])
def _corollary1(p, ctx):
    """Euler-Maclaurin value of sum^R n^k H_n against the zeta'(-m) formula."""
    k = int(p["k"])
    term = "H(n)" if k == 0 else f"n^{k}*H(n)"
    a = eng.sum_via_euler_maclaurin(parse(term), None, None, ctx)
    v, qk = _corollary_rhs(k, ctx)
    return _Outcome(a.value.value, v, a.err, ctx.mp.ldexp(abs(v) + 1, 16 - ctx.bits),
                    {"rational_part": str(qk)})


def _theorem2_sides(z, ctx, hb_sign: int):
    mp = ctx.mp
    gf, rem, K = zeta_prime_gf(z, ctx)
    g = euler_gamma(ctx)
    series = bl.BorelSeries(
        lambda n: 0 if n == 0 else (-1) ** (n + 1) * math.factorial(n) * zeta(n + 1, ctx),
        bl.ClosedForm(lambda x, c: polygamma(0, x + 1, c) + euler_gamma(c)),
    )
    b = bl.borel_sum(series, z, None, ctx)
    lhs = gf - g / z + b.value
    l1, e1 = cat.laplace_inv_shift(z, ctx)
    hb = _hb_series(z, ctx)
    q1, eq = cat.lemma1_qpart_value(z, ctx)
    dbl = q1 - hb
    rhs = l1 / mp.expm1(z) - _ein_over_z(z, ctx) - dbl + hb_sign * hb
    return lhs, rhs, rem + b.err, e1 + eq, K


@_register("theorem2", QUAD, _zgrid())
def _theorem2(p, ctx):
    """zeta'(-k) generating function plus a Borel sum against Laplace and rational parts."""
    z = _z(p, ctx)
    lhs, rhs, el, er, K = _theorem2_sides(z, ctx, -1)
    return _Outcome(lhs, rhs, el, er, {"zeta_prime_terms": K})


@_register("theorem2_printed", QUAD, _zgrid(("0.5",)), hypothesis=True)
def _theorem2_printed(p, ctx):
    """The theorem2 identity with the harmonic-Bernoulli sum taken with a plus sign."""
    z = _z(p, ctx)
    lhs, rhs, el, er, K = _theorem2_sides(z, ctx, 1)
    return _Outcome(lhs, rhs, el, er, {"reading": "+ sum z^k H_k/k! (1 - B_{k+1})/(k+1)"})


@_register("exact_equality_44", EXACT, _zgrid())
def _exact_44(p, ctx):
    """Convergent sum of e^{-nz} log n against -(gamma + log z)/z - sum (-z)^k zeta'(-k)/k!."""
    z = _z(p, ctx)
    mp = ctx.mp
    d, ed = direct_exp_log_sum(z, ctx)
    gf, rem, K = zeta_prime_gf(z, ctx, sign=-1)
    rhs = -(euler_gamma(ctx) + mp.log(z)) / z - gf
    return _Outcome(d, rhs, ed, rem, {"zeta_prime_terms": K})


def _hj_text(j: int) -> str:
    return "H(n)" if j == 1 else f"H(n,{j})"


@_register("theorem4", QUAD, [{"j": j, "z": z} for j in J_GRID for z in Z_GRID])
def _theorem4(p, ctx):
    """Euler-Maclaurin engine on e^{-nz} H_n^(j) against the polylogarithm closed form."""
    z = _z(p, ctx)
    j = int(p["j"])
    a = eng.sum_via_euler_maclaurin(parse(f"exp(-n*z)*{_hj_text(j)}"), z, None, ctx)
    v, e = cat.exp_harmonic_j(z, j, ctx)
    return _Outcome(a.value.value, v, a.err, e)


@_register("theorem4_printed", QUAD, [{"j": j, "z": "0.5"} for j in J_GRID], hypothesis=True)
def _theorem4_printed(p, ctx):
    """Closed form as printed: sign (-1)^j on both Laplace terms and an e^-z/(1 - e^-z) sum."""
    z = _z(p, ctx)
    j = int(p["j"])
    mp = ctx.mp
    a = eng.sum_via_euler_maclaurin(parse(f"exp(-n*z)*{_hj_text(j)}"), z, None, ctx)
    emz = mp.exp(-z)
    fj = math.factorial(j - 1)
    t = polylog(j, z, ctx) / (1 - emz) - emz / z * zeta(j, ctx)
    for m in range(1, j):
        w = mp.mpf(math.factorial(j - m - 1)) / fj * z ** (m - 1)
        t += emz * w * zeta_or_gamma(j - m, ctx)
        t += emz / (1 - emz) * w * (emz + (-1) ** (m - 1))
    lp, e1 = cat.laplace_psi(z, ctx)
    l1, e2 = cat.laplace_inv_shift(z, ctx)
    t += (-1) ** j * z ** (j - 1) / fj * emz * (lp + l1)
    return _Outcome(a.value.value, t, a.err, e1 + e2)


@_register("remark4", EXACT, [{"j": j, "z": z} for j in J_GRID for z in Z_GRID])
def _remark4(p, ctx):
    """Bernoulli expansion of Li_j(e^-z) against its defining series."""
    z = _z(p, ctx)
    j = int(p["j"])
    a = polylog(j, z, ctx, method="expansion")
    b = polylog(j, z, ctx, method="series")
    return _Outcome(a, b, ctx.mp.ldexp(abs(a) + 1, 32 - ctx.bits), ctx.mp.ldexp(abs(b) + 1, 32 - ctx.bits))


_EULER = {2: "2 zeta(3)", 3: "(5/4) zeta(4)", 4: "3 zeta(5) - zeta(2) zeta(3)"}


@_register("euler_sums", QUAD, [{"s": s} for s in (2, 3, 4)])
def _euler_sums(p, ctx):
    """sum H_n n^-s by Euler-Maclaurin against the zeta-value closed forms."""
    s = int(p["s"])
    h = eng.euler_sum_h(s, ctx, method="direct")
    if s == 2:
        v = 2 * zeta(3, ctx)
    elif s == 3:
        v = 5 * zeta(4, ctx) / 4
    else:
        v = 3 * zeta(5, ctx) - zeta(2, ctx) * zeta(3, ctx)
    return _Outcome(h.value, v, h.err, ctx.mp.ldexp(abs(v), 8 - ctx.bits), {"closed_form": _EULER[s]})


@_register("h_continuation", QUAD, [{"s": s} for s in ("1.25", "1.5", "1.75")])
def _h_continuation(p, ctx):
    """Continued h(s) from the Ramanujan sum against the direct convergent sum."""
    s = ctx.mpf(str(p["s"]))
    a = eng.euler_sum_h(s, ctx, method="continuation")
    b = eng.euler_sum_h(s, ctx, method="direct")
    return _Outcome(a.value, b.value, a.err, b.err)


@_register("interpolation_35", IMPROPER, [{"s": "1.5"}])
def _interpolation(p, ctx):
    """int_0^inf x^-s (psi(x+1) + gamma) dx against -(pi/sin(pi s)) zeta(s)."""
    s = ctx.mpf(str(p["s"]))
    mp = ctx.mp
    v, e = eng.interpolation_integral(s, ctx)
    rhs = -mp.pi / mp.sin(mp.pi * s) * zeta(s, ctx)
    return _Outcome(v, rhs, e, 0)


@_register("residue_h", RESIDUE, [{"q": 1, "delta": "1e-3"}])
def _residue(p, ctx):
    """Averaged (s - (1 - 2q)) h(s) at (1 - 2q) +- delta against zeta(1 - 2q)."""
    q = int(p["q"])
    d = ctx.mpf(str(p.get("delta", "1e-3")))
    v = eng.residue_h(q, d, ctx)
    return _Outcome(v, zeta(1 - 2 * q, ctx), d * d * 10, 0, {"averaging": "symmetric pair"})


def _hnj_engine(j: int, ctx: PrecisionContext):
    return eng.sum_via_euler_maclaurin(parse(_hj_text(j)), None, None, ctx)


@_register("hnj_constant", QUAD, [{"j": j} for j in J_GRID], hypothesis=True)
def _hnj_constant(p, ctx):
    """Engine value of sum^R H_n^(j) against (3/2) zeta(j) - zeta(j-1)(j-2)/(j-1) + 1."""
    j = int(p["j"])
    a = _hnj_engine(j, ctx)
    mp = ctx.mp
    tail = mp.zero if j == 2 else zeta(j - 1, ctx) * (j - 2) / (j - 1)
    printed = mp.mpf(3) / 2 * zeta(j, ctx) - tail + 1
    return _Outcome(a.value.value, printed, a.err, 0, {
        "signed_diff": format_decimal(a.value.value - printed, 20),
        "engine_error_estimate": format_decimal(a.err, 3),
    })


@_register("hnj_derived", QUAD, [{"j": j} for j in J_GRID])
def _hnj_derived(p, ctx):
    """Engine value of sum^R H_n^(j) against (3/2) zeta(j) - zeta(j-1)(j-2)/(j-1) - 1/(j-1).

    The j = 2 value is the limit 3 zeta(2)/2 - 2.
    """
    j = int(p["j"])
    a = _hnj_engine(j, ctx)
    mp = ctx.mp
    if j == 2:
        v = mp.mpf(3) / 2 * zeta(2, ctx) - 2
    else:
        v = mp.mpf(3) / 2 * zeta(j, ctx) - zeta(j - 1, ctx) * (j - 2) / (j - 1) - mp.one / (j - 1)
    return _Outcome(a.value.value, v, a.err, ctx.mp.ldexp(abs(v), 8 - ctx.bits))


# --------------------------------------------------------------------------
# engine properties

_PROPERTIES = ("linearity", "translation", "derivation", "int_R_1_2", "strategy_agreement",
               "bernoulli", "harmonic", "digamma")


def _prop_linearity(ctx):
    a = eng.ramanujan_sum("log(n)", None, ctx, use_catalog=False, cross_check=False)
    b = eng.ramanujan_sum("n*H(n)", None, ctx, use_catalog=False, cross_check=False)
    c = eng.ramanujan_sum("2*log(n) - 3*n*H(n)", None, ctx, use_catalog=False, cross_check=False)
    return _Outcome(c.value.value, 2 * a.value.value - 3 * b.value.value, c.err, 2 * a.err + 3 * b.err)


def _prop_translation(ctx):
    # sum^R a(n+1) = sum^R a(n) - a(1) + int_1^2 a
    a = eng.ramanujan_sum("log(n)", None, ctx, use_catalog=False, cross_check=False)
    b = eng.ramanujan_sum("log(n+1)", None, ctx, use_catalog=False, cross_check=False)
    mp = ctx.mp
    integral = 2 * mp.log(2) - 1
    return _Outcome(b.value.value, a.value.value + integral, b.err, a.err)


def _prop_derivation(ctx):
    # sum^R a'(n) = R_a'(1) + a(1) with a = e^{zn}, z = 1/2
    z = ctx.mpf("0.5")
    expr = parse("exp(n*z)")
    da = differentiate(expr)
    lhs = eng.ramanujan_sum(da, z, ctx, use_catalog=False, cross_check=False)
    key = cat.ExpTerm(z)
    mp = ctx.mp
    r_prime = mp.diff(lambda x: cat.r_function(key, x, ctx), 1)
    rhs = r_prime + eval_mpf(expr, 1, z, ctx)
    return _Outcome(lhs.value.value, rhs, lhs.err, mp.ldexp(abs(rhs), 16 - ctx.bits),
                    {"derivative": to_text(da)})


def _prop_int_r(ctx):
    mp = ctx.mp
    worst = mp.zero
    for key in (cat.PowerTerm(2), cat.PowerTerm(1), cat.ExpTerm(ctx.mpf("0.5"))):
        q = integrate_panels(lambda x: cat.r_function(key, x, ctx), [mp.one, mp.mpf(2)], ctx)
        worst = max(worst, abs(q.value))
    return _Outcome(worst, mp.zero, 0, 0, {"keys": ["PowerTerm(2)", "PowerTerm(1)", "ExpTerm(0.5)"]})


def _prop_strategies(ctx):
    mp = ctx.mp
    worst = mp.zero
    used = []
    for text, z in (("log(n)", None), ("H(n)", None), ("exp(n*z)", "0.5"), ("exp(-n*z)*H(n)", "1")):
        zz = None if z is None else ctx.mpf(z)
        c = eng.run_strategy(eng.Strategy.CLOSED_FORM, text, zz, ctx).value.value
        e = eng.run_strategy(eng.Strategy.EULER_MACLAURIN, text, zz, ctx).value.value
        worst = max(worst, abs(c - e))
        used.append(text)
    return _Outcome(worst, mp.zero, 0, 0, {"terms": used})


def _prop_bernoulli(ctx):
    mp = ctx.mp
    # odd Bernoulli numbers vanish and B_n(1 - x) = (-1)^n B_n(x)
    bad = sum(1 for k in range(3, 120, 2) if BERNOULLI[k] != 0)
    x = Fraction(2, 7)
    bad += sum(1 for n in range(12) if bernoulli_polynomial(n, 1 - x) != (-1) ** n * bernoulli_polynomial(n, x))
    return _Outcome(mp.mpf(bad), mp.zero, 0, 0)


def _prop_harmonic(ctx):
    mp = ctx.mp
    bad = sum(1 for n in range(1, 200) if harmonic_number(n) - harmonic_number(n - 1) != Fraction(1, n))
    worst = mp.zero
    for n in (1, 7, 50):
        worst = max(worst, abs(polygamma(0, n + 1, ctx) + euler_gamma(ctx) - _mpq(harmonic_number(n), ctx)))
    return _Outcome(mp.mpf(bad) + worst, mp.zero, 0, 0)


def _prop_digamma(ctx):
    mp = ctx.mp
    worst = mp.zero
    for x in ("0.3", "2.5", "17.25"):
        xv = ctx.mpf(x)
        worst = max(worst, abs(polygamma(0, xv + 1, ctx) - polygamma(0, xv, ctx) - 1 / xv))
        worst = max(worst, abs(polygamma(1, xv, ctx) - mp.psi(1, xv)))
    return _Outcome(worst, mp.zero, 0, 0)


_PROP_FNS = {
    "linearity": _prop_linearity,
    "translation": _prop_translation,
    "derivation": _prop_derivation,
    "int_R_1_2": _prop_int_r,
    "strategy_agreement": _prop_strategies,
    "bernoulli": _prop_bernoulli,
    "harmonic": _prop_harmonic,
    "digamma": _prop_digamma,
}


@_register("properties", QUAD, [{"property": name} for name in _PROPERTIES])
def _properties(p, ctx):
    """Invariants of the summation engine and the special-function layer."""
    name = p["property"]
    try:
        fn = _PROP_FNS[name]
    except KeyError:
        raise UnknownCheckError(f"unknown property {name!r}") from None
    return fn(ctx)


# --------------------------------------------------------------------------
# running


def _digits_of(tol: Fraction) -> int:
    return max(1, math.ceil(-math.log10(tol)))


def required_bits(tol: Fraction) -> int:
    """Working precision below which a tolerance is treated as unreachable."""
    return math.ceil(_digits_of(tol) * 3.33) + 64


def _params_key(params: dict) -> tuple:
    return tuple(sorted((k, str(v)) for k, v in params.items()))


def run_check(check_id: str, params: dict | None = None, ctx: PrecisionContext | None = None) -> IdentityReport:
    """Run one registered check; numerical failures become a ``fail`` report."""
    ctx = ctx or PrecisionContext()
    try:
        check = _REGISTRY[check_id]
    except KeyError:
        raise UnknownCheckError(check_id) from None
    if params is None:
        params = dict(check.grid[0])
    params = dict(params)
    tol = check.tolerance
    t0 = time.perf_counter()
    if ctx.bits < required_bits(tol):
        return IdentityReport(check_id, params, None, None, None, tol, "precision_insufficient",
                              0.0, ctx.bits, {"required_bits": required_bits(tol)})
    # working tolerance a few digits below the check tolerance keeps higher precision cheap
    work = ctx.with_tol(max(ctx.target_tol, _mpq(tol / 10**6, ctx)))
    notes: dict = {}
    try:
        out = check.fn(params, work)
    except MissingParameterError:
        raise
    except (RamasumError, ArithmeticError, ValueError) as exc:
        ms = (time.perf_counter() - t0) * 1000
        status = "hypothesis_fail" if check.hypothesis else "fail"
        return IdentityReport(check_id, params, None, None, None, tol, status, ms, ctx.bits,
                              {"error": f"{type(exc).__name__}: {exc}"})
    mp = work.mp
    lhs = BigReal(work.mpf(out.lhs), work.mpf(abs(out.lhs_err)))
    rhs = BigReal(work.mpf(out.rhs), work.mpf(abs(out.rhs_err)))
    diff = abs(lhs.value - rhs.value)
    ok = diff <= _mpq(tol, work)
    if check.hypothesis:
        status = "hypothesis_pass" if ok else "hypothesis_fail"
    else:
        status = "pass" if ok else "fail"
    notes.update(out.notes)
    if not ok or check.hypothesis:
        notes.setdefault("signed_diff", format_decimal(lhs.value - rhs.value, 12))
    ms = (time.perf_counter() - t0) * 1000
    return IdentityReport(check_id, params, lhs, rhs, BigReal(diff, lhs.err + rhs.err), tol, status, ms,
                          ctx.bits, notes)


def plan(prefix: str | None = None) -> list[tuple[str, dict]]:
    out = []
    for cid in registered():
        if prefix and not cid.startswith(prefix):
            continue
        for params in _REGISTRY[cid].grid:
            out.append((cid, dict(params)))
    out.sort(key=lambda t: (t[0], _params_key(t[1])))
    return out


@dataclass
class SuiteResult:
    reports: list
    summary: dict

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_json(self, digits: int | None = None) -> dict:
        return {"reports": [r.to_json(digits) for r in self.reports], "summary": self.summary}

    def dumps(self, digits: int | None = None) -> str:
        return json.dumps(self.to_json(digits), indent=2)


def summarize(reports: list) -> dict:
    hyp = sum(1 for r in reports if r.hypothesis)
    passed = sum(1 for r in reports if r.status == "pass")
    failed = sum(1 for r in reports if r.status == "fail")
    insufficient = sum(1 for r in reports if r.status == "precision_insufficient")
    return {"total": len(reports), "passed": passed, "failed": failed, "hypotheses": hyp,
            "precision_insufficient": insufficient, "check_ids": len({r.check_id for r in reports})}


def run_all(prefix: str | None = None, ctx: PrecisionContext | None = None, workers: int = 1) -> SuiteResult:
    """Every registered check at its default grid, ordered by check id then parameters."""
    ctx = ctx or PrecisionContext()
    jobs = plan(prefix)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda job: run_check(job[0], job[1], ctx), jobs))
    else:
        reports = [run_check(cid, params, ctx) for cid, params in jobs]
    return SuiteResult(reports, summarize(reports))


__all__ = [
    "IdentityReport", "SuiteResult", "run_check", "run_all", "registered", "plan", "summarize",
    "required_bits", "zeta_prime_gf", "direct_exp_log_sum", "STATUSES",
]
