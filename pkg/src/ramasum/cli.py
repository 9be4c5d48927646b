"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a non-hypothesis identity
check failed, 3 a numerical routine raised.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

from . import borel as bl
from . import engine as eng
from . import identities as ids
from .errors import (
    MissingParameterError,
    PrecisionError,
    RamasumError,
    SeriesSyntaxError,
    UnknownFunctionError,
)
from .expr import parse
from .numeric import DEFAULT_BITS, PrecisionContext, format_decimal

ENV_BITS = "RAMASUM_PREC_BITS"
DEFAULT_TOL = "1e-20"
CONFIG_KEYS = ("prec_bits", "tol", "output")

EXIT_OK, EXIT_USAGE, EXIT_CHECK_FAILED, EXIT_NUMERIC = 0, 1, 2, 3

_INPUT_ERRORS = (SeriesSyntaxError, UnknownFunctionError, MissingParameterError, PrecisionError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


@dataclass(frozen=True)
class CliConfig:
    prec_bits: int = DEFAULT_BITS
    tol: str = DEFAULT_TOL
    output: str = "text"

    def context(self) -> PrecisionContext:
        return PrecisionContext(self.prec_bits, self.tol)


def read_config_file(path: str) -> dict:
    """``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _parse_bits(value, source: str) -> int:
    try:
        bits = int(str(value))
    except ValueError:
        raise UsageError(f"{source}: precision must be an integer, got {value!r}") from None
    return bits


def _check_tol(value, source: str) -> str:
    try:
        q = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{source}: tolerance must be a decimal number, got {value!r}") from None
    if q <= 0:
        raise UsageError(f"{source}: tolerance must be positive")
    return str(value)


def resolve_config(args: argparse.Namespace, environ=None) -> CliConfig:
    """defaults < environment < config file < flags."""
    environ = os.environ if environ is None else environ
    values = {"prec_bits": DEFAULT_BITS, "tol": DEFAULT_TOL, "output": "text"}
    if environ.get(ENV_BITS):
        values["prec_bits"] = _parse_bits(environ[ENV_BITS], ENV_BITS)
    if getattr(args, "config", None):
        try:
            values.update(read_config_file(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    bits = _parse_bits(values["prec_bits"], "prec_bits")
    tol = _check_tol(values["tol"], "tol")
    if values["output"] not in ("text", "json"):
        raise UsageError(f"output must be 'text' or 'json', got {values['output']!r}")
    return CliConfig(bits, tol, values["output"])


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--prec-bits", dest="prec_bits", type=str, default=None, help="working precision in bits")
    g.add_argument("--tol", default=None, help="target tolerance (default 1e-20)")
    g.add_argument("--output", choices=("text", "json"), default=None)
    g.add_argument("--config", default=None, help="file of 'key = value' lines")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="ramasum", description="Ramanujan and Borel summation of divergent series.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("sum", parents=[common], help="Ramanujan sum of a term a(n)")
    s.add_argument("--term", required=True, help="expression in n (and z), e.g. 'H(n)*exp(-n*z)'")
    s.add_argument("--z", default=None, help="value of the parameter z")
    s.add_argument("--strategy", choices=("auto",) + tuple(x.value for x in eng.Strategy), default="auto")
    s.add_argument("--no-catalog", action="store_true", help="skip closed forms")
    s.add_argument("--no-cross-check", action="store_true")
    s.add_argument("--shift", type=int, default=0, help="sum a(n + N) instead of a(n)")

    b = sub.add_parser("borel", parents=[common], help="Borel sum of sum c_n / z^(n+1)")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--series", help="alternating-factorial | digamma | geometric:A")
    src.add_argument("--coefficients", help="comma-separated rational c_0, c_1, ...")
    b.add_argument("--z", required=True)
    b.add_argument("--pade", type=int, default=None, help="continue the Borel transform by a [m/m] Pade approximant")

    la = sub.add_parser("laplace", parents=[common], help="Laplace transform int_0^inf e^(-xz) f(x) dx")
    la.add_argument("--f", required=True, dest="func", help="expression in x, e.g. '1/(x+1)'")
    la.add_argument("--z", required=True)
    la.add_argument("--cut", default=None, help="split point A")
    la.add_argument("--tail-model", choices=bl._KINDS, default="log")
    la.add_argument("--tail-K", default=None)
    la.add_argument("--tail-p", default="0")
    la.add_argument("--graded", type=int, default=0, help="levels of grading toward 0")

    v = sub.add_parser("verify", parents=[common], help="run the identity suite")
    v.add_argument("--only", default=None, help="check-id prefix")
    v.add_argument("--json", dest="json_path", default=None, help="write the JSON report here")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--list", action="store_true", help="list check ids and exit")

    zg = sub.add_parser("zeta-prime-gf", parents=[common], help="sum_k z^k zeta'(-k)/k!")
    zg.add_argument("--z", required=True)
    zg.add_argument("--terms", type=int, default=None, help="number of terms (default: to precision)")
    return parser


# --------------------------------------------------------------------------
# output


def _emit(out: TextIO, cfg: CliConfig, fields: list[tuple[str, object]]) -> None:
    if cfg.output == "json":
        out.write(json.dumps(dict(fields), indent=2) + "\n")
        return
    width = max(len(k) for k, _ in fields)
    for k, v in fields:
        if isinstance(v, (dict, list)):
            v = json.dumps(v)
        out.write(f"{k.ljust(width)} = {v}\n")


def _clean(diag: dict) -> dict:
    """Diagnostics as JSON-safe strings and ints."""
    out = {}
    for k, v in diag.items():
        if k == "runtime_s":
            continue
        if isinstance(v, (int, str)) and not isinstance(v, bool):
            out[k] = v
        elif isinstance(v, float):
            out[k] = f"{v:.6e}"
        elif isinstance(v, dict):
            out[k] = _clean(v)
        else:
            out[k] = str(v)
    return out


# --------------------------------------------------------------------------
# commands


def _cmd_sum(args, cfg: CliConfig, out: TextIO) -> int:
    ctx = cfg.context()
    expr = parse(args.term)
    z = None if args.z is None else ctx.mpf(args.z)
    if args.shift:
        res = eng.translate_shift(expr, args.shift, z, ctx, use_catalog=not args.no_catalog,
                                  cross_check=not args.no_cross_check)
    elif args.strategy == "auto":
        res = eng.ramanujan_sum(expr, z, ctx, use_catalog=not args.no_catalog, cross_check=not args.no_cross_check)
    else:
        res = eng.run_strategy(eng.Strategy(args.strategy), expr, z, ctx)
    digits = ctx.digits
    fields = [
        ("term", args.term),
        ("z", args.z),
        ("value", res.value.decimal(digits)),
        ("error_estimate", format_decimal(res.err, 6)),
        ("strategy", str(res.strategy)),
        ("precision_bits", ctx.bits),
        ("diagnostics", _clean(res.diagnostics)),
    ]
    if args.z is None:
        fields.pop(1)
    _emit(out, cfg, fields)
    return EXIT_OK


def _preset_series(name: str, ctx: PrecisionContext) -> bl.BorelSeries:
    from .special import euler_gamma, polygamma, zeta

    if name == "alternating-factorial":
        return bl.alternating_factorial_series()
    if name == "digamma":
        return bl.BorelSeries(
            lambda n: 0 if n == 0 else (-1) ** (n + 1) * math.factorial(n) * zeta(n + 1, ctx),
            bl.ClosedForm(lambda x, c: polygamma(0, x + 1, c) + euler_gamma(c)),
        )
    if name.startswith("geometric:"):
        try:
            a = Fraction(name.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad ratio in {name!r}") from None
        return bl.geometric_borel_series(a)
    raise UsageError(f"unknown series {name!r}; expected alternating-factorial, digamma or geometric:A")


def _cmd_borel(args, cfg: CliConfig, out: TextIO) -> int:
    ctx = cfg.context()
    z = ctx.mpf(args.z)
    laplace_cfg = bl.LaplaceConfig()
    if args.series:
        series = _preset_series(args.series, ctx)
        if args.series.startswith("geometric:"):
            a = Fraction(args.series.split(":", 1)[1])
            laplace_cfg = bl.LaplaceConfig(tail_bound_model=bl.TailModel("exp", 1, max(a, 0)))
        if args.pade is not None:
            series = bl.BorelSeries(series.coefficients, bl.PadeDiagonal(args.pade))
        label = args.series
    else:
        try:
            coeffs = [Fraction(c.strip()) for c in args.coefficients.split(",") if c.strip()]
        except ValueError:
            raise UsageError("coefficients must be rationals separated by commas") from None
        m = args.pade if args.pade is not None else (len(coeffs) - 1) // 2
        series = bl.BorelSeries(coeffs, bl.PadeDiagonal(m))
        label = f"{len(coeffs)} coefficients"
    res = bl.borel_sum(series, z, laplace_cfg, ctx)
    cont = series.continuation
    _emit(out, cfg, [
        ("series", label),
        ("z", args.z),
        ("continuation", f"pade[{cont.m}/{cont.m}]" if isinstance(cont, bl.PadeDiagonal) else "closed form"),
        ("value", res.decimal(ctx.digits)),
        ("error_estimate", format_decimal(res.err, 6)),
        ("precision_bits", ctx.bits),
    ])
    return EXIT_OK


_X = re.compile(r"\bx\b")


def _cmd_laplace(args, cfg: CliConfig, out: TextIO) -> int:
    ctx = cfg.context()
    from .expr import eval_mpf

    # the expression language names its variable n
    expr = parse(_X.sub("n", args.func))
    model = bl.TailModel(args.tail_model, args.tail_K, Fraction(args.tail_p))
    lc = bl.LaplaceConfig(cut=args.cut, tail_bound_model=model, graded_levels=args.graded)
    res = bl.laplace_transform(lambda x: eval_mpf(expr, x, None, ctx), ctx.mpf(args.z), lc, ctx)
    _emit(out, cfg, [
        ("f", args.func),
        ("z", args.z),
        ("value", res.decimal(ctx.digits)),
        ("error_estimate", format_decimal(res.err, 6)),
        ("precision_bits", ctx.bits),
    ])
    return EXIT_OK


def _cmd_zeta_prime_gf(args, cfg: CliConfig, out: TextIO) -> int:
    ctx = cfg.context()
    if args.terms is not None and args.terms < 1:
        raise UsageError("--terms must be >= 1")
    value, rem, used = ids.zeta_prime_gf(ctx.mpf(args.z), ctx, args.terms)
    _emit(out, cfg, [
        ("z", args.z),
        ("terms", used),
        ("value", format_decimal(value, ctx.digits)),
        ("remainder_estimate", format_decimal(rem, 6)),
        ("precision_bits", ctx.bits),
    ])
    return EXIT_OK


def _cmd_verify(args, cfg: CliConfig, out: TextIO) -> int:
    if args.list:
        for cid in ids.registered():
            out.write(cid + "\n")
        return EXIT_OK
    # each check carries its own tolerance; --tol does not apply here
    ctx = PrecisionContext(cfg.prec_bits)
    suite = ids.run_all(args.only, ctx, max(1, args.workers))
    if not suite.reports:
        raise UsageError(f"no check id starts with {args.only!r}")
    payload = suite.dumps()
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    if cfg.output == "json":
        out.write(payload + "\n")
    else:
        for r in suite.reports:
            params = ",".join(f"{k}={v}" for k, v in r.params.items()) or "-"
            diff = "-" if r.abs_diff is None else format_decimal(r.abs_diff.value, 3)
            out.write(f"{r.status:22s} {r.check_id:18s} {params:16s} diff={diff} tol={ids._fraction_text(r.tolerance)}\n")
        s = suite.summary
        out.write(f"total={s['total']} passed={s['passed']} failed={s['failed']} "
                  f"hypotheses={s['hypotheses']} precision_insufficient={s['precision_insufficient']}\n")
    return EXIT_CHECK_FAILED if suite.summary["failed"] else EXIT_OK


_COMMANDS = {
    "sum": _cmd_sum,
    "borel": _cmd_borel,
    "laplace": _cmd_laplace,
    "verify": _cmd_verify,
    "zeta-prime-gf": _cmd_zeta_prime_gf,
}


def execute(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None,
            environ=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        if not args.command:
            raise UsageError("a subcommand is required: " + ", ".join(_COMMANDS))
        cfg = resolve_config(args, environ)
        return _COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        err.write(f"ramasum: usage error: {exc}\n")
        return EXIT_USAGE
    except _INPUT_ERRORS as exc:
        err.write(f"ramasum: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    except RamasumError as exc:
        err.write(f"ramasum: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


def main(argv: Sequence[str] | None = None) -> int:
    return execute(argv)


def run() -> None:
    sys.exit(main())
