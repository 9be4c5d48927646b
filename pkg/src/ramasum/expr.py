"""Series terms a(n) or a(n, z) as immutable expression trees.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-'? power
    power  := atom ('^' power)?
    atom   := number | 'n' | 'z' | func '(' args ')' | '(' expr ')'
    func   := exp | log | H
    number := integer ('/' integer)? | decimal

``H(e)`` is shorthand for ``H(e, 1)``.  Exponents must fold to rational
constants.  Harmonic numbers at non-integer arguments are interpolated through
polygamma values, H^{(j)}(y) = c_j psi^{(j-1)}(y + 1) + zeta(j) with
c_j = (-1)^(j-1)/(j-1)! and zeta(1) read as gamma.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .errors import (
    DomainError,
    InadmissibleError,
    MissingParameterError,
    SeriesSyntaxError,
    UnknownFunctionError,
)
from .numeric import BigReal, PrecisionContext
from .special import euler_gamma, polygamma, zeta_or_gamma

# --------------------------------------------------------------------------
# nodes


class Node:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Node):
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class VarN(Node):
    pass


@dataclass(frozen=True)
class ParamZ(Node):
    pass


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", Fraction(self.exponent))


@dataclass(frozen=True)
class Exp(Node):
    arg: Node


@dataclass(frozen=True)
class Log(Node):
    arg: Node


@dataclass(frozen=True)
class Harmonic(Node):
    j: int
    arg: Node


@dataclass(frozen=True)
class Polygamma(Node):
    """psi^{(m)}(arg); produced by differentiation, not by the parser."""

    m: int
    arg: Node


SeriesExpr = Node
N = VarN()
Z = ParamZ()
ZERO = Const(0)
ONE = Const(1)

# --------------------------------------------------------------------------
# parser

_FUNCS = ("exp", "log", "H")


class _Token:
    __slots__ = ("kind", "text", "col")

    def __init__(self, kind: str, text: str, col: int) -> None:
        self.kind, self.text, self.col = kind, text, col


def _tokenize(text: str) -> list[_Token]:
    out: list[_Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        col = i + 1
        if c.isdigit() or (c == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == ".":
                j += 1
                while j < len(text) and text[j].isdigit():
                    j += 1
            out.append(_Token("num", text[i:j], col))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("name", text[i:j], col))
            i = j
        elif c in "+-*/^(),":
            out.append(_Token(c, c, col))
            i += 1
        else:
            raise SeriesSyntaxError(f"unexpected character {c!r}", col, text)
    out.append(_Token("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, k: int = 0) -> _Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def take(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, msg: str, col: int):
        raise SeriesSyntaxError(msg, col, self.text)

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            self.fail(f"expected {kind!r}, found {what}", tok.col)
        return self.take()

    def parse(self) -> Node:
        if self.peek().kind == "end":
            self.fail("empty expression", 1)
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.fail(f"unexpected {tok.text!r}", tok.col)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take()
            rhs = self.term(op)
            node = Add(node, rhs) if op.kind == "+" else Sub(node, rhs)
        return node

    def term(self, after: _Token | None = None) -> Node:
        # a leading minus negates the whole product: -n*z is -(n*z)
        if self.peek().kind == "-":
            op = self.take()
            return Neg(self.term(op))
        node = self.factor(after)
        while self.peek().kind in ("*", "/"):
            op = self.take()
            rhs = self.factor(op)
            node = Mul(node, rhs) if op.kind == "*" else Div(node, rhs)
        return node

    def factor(self, after: _Token | None = None) -> Node:
        if self.peek().kind == "-":
            op = self.take()
            return Neg(self.power(op))
        return self.power(after)

    def power(self, after: _Token | None = None) -> Node:
        base = self.atom(after)
        if self.peek().kind == "^":
            op = self.take()
            exp_col = self.peek().col
            rhs = self.power(op)
            value = fold_constant(rhs)
            if value is None:
                self.fail("exponent must be a rational constant", exp_col)
            return Pow(base, value)
        return base

    def atom(self, after: _Token | None = None) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            value = Fraction(tok.text)
            # integer '/' integer is one rational literal unless a power follows
            if (
                "." not in tok.text
                and self.peek().kind == "/"
                and self.peek(1).kind == "num"
                and "." not in self.peek(1).text
                and self.peek(2).kind != "^"
            ):
                self.take()
                den = int(self.take().text)
                if den == 0:
                    self.fail("zero denominator", tok.col)
                value = value / den
            return Const(value)
        if tok.kind == "name":
            self.take()
            if tok.text == "n":
                return N
            if tok.text == "z":
                return Z
            if self.peek().kind != "(":
                self.fail(f"unknown name {tok.text!r}", tok.col)
            if tok.text not in _FUNCS:
                raise UnknownFunctionError(tok.text, tok.col)
            self.take()
            args = [self.expr()]
            while self.peek().kind == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
            return self._call(tok, args)
        if tok.kind == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if after is not None:
            self.fail(f"missing operand after {after.text!r}", after.col)
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        self.fail(f"unexpected {what}", tok.col)

    def _call(self, tok: _Token, args: list[Node]) -> Node:
        name = tok.text
        if name in ("exp", "log"):
            if len(args) != 1:
                self.fail(f"{name} takes one argument", tok.col)
            return Exp(args[0]) if name == "exp" else Log(args[0])
        if len(args) not in (1, 2):
            self.fail("H takes one or two arguments", tok.col)
        j = 1
        if len(args) == 2:
            value = fold_constant(args[1])
            if value is None or value.denominator != 1 or value < 1:
                self.fail("harmonic order must be a positive integer", tok.col)
            j = int(value)
        return Harmonic(j, args[0])


def parse(text: str) -> Node:
    """Parse series-term text into an expression tree."""
    if not isinstance(text, str) or not text.strip():
        raise SeriesSyntaxError("empty expression", 1, text or "")
    return _Parser(text).parse()


def fold_constant(node: Node) -> Fraction | None:
    """Exact value of an n- and z-free arithmetic subtree, else None."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        v = fold_constant(node.arg)
        return None if v is None else -v
    if isinstance(node, (Add, Sub, Mul, Div)):
        a, b = fold_constant(node.left), fold_constant(node.right)
        if a is None or b is None:
            return None
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        if isinstance(node, Mul):
            return a * b
        return None if b == 0 else a / b
    if isinstance(node, Pow):
        v = fold_constant(node.base)
        if v is None or node.exponent.denominator != 1 or (v == 0 and node.exponent < 0):
            return None
        return v ** int(node.exponent)
    return None


# --------------------------------------------------------------------------
# printer

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _frac_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def to_text(node: Node) -> str:
    """Canonical text; ``parse(to_text(e)) == e`` for parser-produced trees."""
    return _show(node, 0)


def _show(node: Node, ctx_prec: int) -> str:
    if isinstance(node, Const):
        s = _frac_text(abs(node.value))
        if node.value < 0:
            return f"(-{s})"
        # a bare rational literal would re-parse as one token; parenthesize inside products
        if node.value.denominator != 1 and ctx_prec >= 2:
            return f"({s})"
        return s
    if isinstance(node, VarN):
        return "n"
    if isinstance(node, ParamZ):
        return "z"
    if isinstance(node, Exp):
        return f"exp({_show(node.arg, 0)})"
    if isinstance(node, Log):
        return f"log({_show(node.arg, 0)})"
    if isinstance(node, Harmonic):
        inner = _show(node.arg, 0)
        return f"H({inner})" if node.j == 1 else f"H({inner}, {node.j})"
    if isinstance(node, Polygamma):
        return f"psi({node.m}, {_show(node.arg, 0)})"
    prec = _PREC[type(node)]
    if isinstance(node, Neg):
        s = "-" + _show(node.arg, 4)
    elif isinstance(node, Pow):
        e = node.exponent
        es = _frac_text(e) if e >= 0 and e.denominator == 1 else f"({'-' if e < 0 else ''}{_frac_text(abs(e))})"
        s = f"{_show(node.base, 5)}^{es}"
    else:
        sym = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
        # left-associative: the right operand needs parentheses at equal precedence
        left = _show(node.left, prec)
        right = _show(node.right, prec + 1)
        if prec == 2 and isinstance(node.left, Neg):
            # a leading minus would swallow the whole product
            left = f"({left})"
        if sym == "/" and left[-1].isdigit() and right[0].isdigit():
            # keep "a / b" from lexing as one rational literal
            right = f"({right})"
        s = f"{left} {sym} {right}"
    return f"({s})" if prec < ctx_prec else s


# --------------------------------------------------------------------------
# structural queries


def children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, (Add, Sub, Mul, Div)):
        return (node.left, node.right)
    if isinstance(node, (Neg, Exp, Log)):
        return (node.arg,)
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, (Harmonic, Polygamma)):
        return (node.arg,)
    return ()


def uses_z(node: Node) -> bool:
    return isinstance(node, ParamZ) or any(uses_z(c) for c in children(node))


def uses_n(node: Node) -> bool:
    return isinstance(node, VarN) or any(uses_n(c) for c in children(node))


def node_count(node: Node) -> int:
    return 1 + sum(node_count(c) for c in children(node))


# --------------------------------------------------------------------------
# evaluation

_harm_tables: dict[tuple[int, int], list] = {}
_harm_lock = threading.Lock()
HARMONIC_TABLE_LIMIT = 1 << 17


def harmonic_value(j: int, y, ctx: PrecisionContext):
    """H^{(j)} at real y > -1, exact summation at small integers, else psi interpolation."""
    mp = ctx.mp
    if y == int(y) and 0 <= y <= HARMONIC_TABLE_LIMIT:
        return _harmonic_int(j, int(y), ctx)
    if y <= -1:
        raise DomainError("harmonic interpolation needs argument > -1")
    if j == 1:
        return polygamma(0, y + 1, ctx) + euler_gamma(ctx)
    c = mp.mpf((-1) ** (j - 1)) / math.factorial(j - 1)
    return c * polygamma(j - 1, y + 1, ctx) + zeta_or_gamma(j, ctx)


def _harmonic_int(j: int, n: int, ctx: PrecisionContext):
    key = (j, ctx.bits)
    table = _harm_tables.get(key)
    if table is None or len(table) <= n:
        with _harm_lock:
            table = _harm_tables.setdefault(key, [ctx.mp.zero])
            mp = ctx.mp
            acc = table[-1]
            for m in range(len(table), n + 1):
                acc = acc + mp.one / mp.mpf(m) ** j
                table.append(acc)
    return table[n]


def _zval(z, ctx: PrecisionContext):
    if z is None:
        raise MissingParameterError("expression uses z but no value was given")
    return ctx.mpf(z)


def eval_mpf(node: Node, x, z, ctx: PrecisionContext):
    """Value of ``node`` at n = x (mpf in, mpf out)."""
    mp = ctx.mp
    t = type(node)
    if t is VarN:
        return x
    if t is Const:
        v = node.value
        return mp.mpf(v.numerator) if v.denominator == 1 else mp.mpf(v.numerator) / v.denominator
    if t is ParamZ:
        return _zval(z, ctx)
    if t is Add:
        return eval_mpf(node.left, x, z, ctx) + eval_mpf(node.right, x, z, ctx)
    if t is Sub:
        return eval_mpf(node.left, x, z, ctx) - eval_mpf(node.right, x, z, ctx)
    if t is Mul:
        return eval_mpf(node.left, x, z, ctx) * eval_mpf(node.right, x, z, ctx)
    if t is Div:
        d = eval_mpf(node.right, x, z, ctx)
        if d == 0:
            raise DomainError("division by zero")
        return eval_mpf(node.left, x, z, ctx) / d
    if t is Neg:
        return -eval_mpf(node.arg, x, z, ctx)
    if t is Pow:
        b = eval_mpf(node.base, x, z, ctx)
        p = node.exponent
        if p.denominator == 1:
            if b == 0 and p < 0:
                raise DomainError("zero to a negative power")
            return b ** int(p)
        if b < 0:
            raise DomainError("fractional power of a negative number")
        return mp.power(b, mp.mpf(p.numerator) / p.denominator)
    if t is Exp:
        return mp.exp(eval_mpf(node.arg, x, z, ctx))
    if t is Log:
        a = eval_mpf(node.arg, x, z, ctx)
        if a <= 0:
            raise DomainError(f"log of non-positive value {mp.nstr(a, 8)}")
        return mp.log(a)
    if t is Harmonic:
        return harmonic_value(node.j, eval_mpf(node.arg, x, z, ctx), ctx)
    if t is Polygamma:
        a = eval_mpf(node.arg, x, z, ctx)
        return polygamma(node.m, a, ctx)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(expr: Node, x: Any, z: Any = None, ctx: PrecisionContext | None = None) -> BigReal:
    """Evaluate at n = x, returning a value with a rounding-error radius."""
    ctx = ctx or PrecisionContext()
    if uses_z(expr) and z is None:
        raise MissingParameterError("expression uses z but no value was given")
    wctx = ctx.with_guard(16)
    v = eval_mpf(expr, wctx.mpf(x), None if z is None else wctx.mpf(z), wctx)
    out = ctx.mpf(v)
    err = ctx.mp.ldexp(abs(out), 4 - ctx.bits) if out else ctx.mp.zero
    return BigReal(out, err)


# --------------------------------------------------------------------------
# symbolic differentiation


def _is_const(node: Node, value: int | None = None) -> bool:
    return isinstance(node, Const) and (value is None or node.value == value)


def _add(a: Node, b: Node) -> Node:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if isinstance(b, Neg):
        return _sub(a, b.arg)
    return Add(a, b)


def _sub(a: Node, b: Node) -> Node:
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return _neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def _neg(a: Node) -> Node:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _mul(a: Node, b: Node) -> Node:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is_const(a, -1):
        return _neg(b)
    if _is_const(b, -1):
        return _neg(a)
    # x^p * (1/x) -> x^(p-1)
    if (
        isinstance(a, Pow)
        and isinstance(b, Div)
        and _is_const(b.left, 1)
        and b.right == a.base
    ):
        return _pow(a.base, a.exponent - 1)
    return Mul(a, b)


def _div(a: Node, b: Node) -> Node:
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    return Div(a, b)


def _pow(a: Node, p: Fraction) -> Node:
    if p == 0:
        return ONE
    if p == 1:
        return a
    return Pow(a, p)


def differentiate(expr: Node) -> Node:
    """Symbolic d/dn with light constant folding."""
    t = type(expr)
    if t in (Const, ParamZ):
        return ZERO
    if t is VarN:
        return ONE
    if t is Add:
        return _add(differentiate(expr.left), differentiate(expr.right))
    if t is Sub:
        return _sub(differentiate(expr.left), differentiate(expr.right))
    if t is Neg:
        return _neg(differentiate(expr.arg))
    if t is Mul:
        a, b = expr.left, expr.right
        return _add(_mul(differentiate(a), b), _mul(a, differentiate(b)))
    if t is Div:
        a, b = expr.left, expr.right
        da, db = differentiate(a), differentiate(b)
        return _sub(_div(da, b), _div(_mul(a, db), _pow(b, Fraction(2))))
    if t is Pow:
        p = expr.exponent
        inner = differentiate(expr.base)
        if p == 0 or _is_const(inner, 0):
            return ZERO
        return _mul(_mul(Const(p), _pow(expr.base, p - 1)), inner)
    if t is Exp:
        return _mul(expr, differentiate(expr.arg))
    if t is Log:
        return _div(differentiate(expr.arg), expr.arg)
    if t is Harmonic:
        j = expr.j
        c = Const(Fraction((-1) ** (j - 1), math.factorial(j - 1)))
        psi = Polygamma(j, _add(expr.arg, ONE))
        return _mul(_mul(c, psi), differentiate(expr.arg))
    if t is Polygamma:
        return _mul(Polygamma(expr.m + 1, expr.arg), differentiate(expr.arg))
    raise TypeError(f"not an expression node: {expr!r}")


# --------------------------------------------------------------------------
# Taylor jets: truncated expansions f(x + h) = sum_k c_k h^k


def _jmul(a: list, b: list, order: int, mp) -> list:
    out = []
    for k in range(order + 1):
        s = mp.zero
        for i in range(k + 1):
            ai = a[i]
            if ai:
                s += ai * b[k - i]
        out.append(s)
    return out


def _jdiv(a: list, b: list, order: int, mp) -> list:
    if b[0] == 0:
        raise DomainError("division by zero in jet")
    out = []
    inv = 1 / b[0]
    for k in range(order + 1):
        s = a[k]
        for i in range(1, k + 1):
            s -= b[i] * out[k - i]
        out.append(s * inv)
    return out


def _jexp(a: list, order: int, mp) -> list:
    out = [mp.exp(a[0])]
    for k in range(1, order + 1):
        s = mp.zero
        for i in range(1, k + 1):
            if a[i]:
                s += i * a[i] * out[k - i]
        out.append(s / k)
    return out


def _jlog(a: list, order: int, mp) -> list:
    if a[0] <= 0:
        raise DomainError("log of non-positive value in jet")
    out = [mp.log(a[0])]
    inv = 1 / a[0]
    for k in range(1, order + 1):
        s = a[k] * k
        for i in range(1, k):
            s -= i * out[i] * a[k - i]
        out.append(s * inv / k)
    return out


def _jpow(a: list, p: Fraction, order: int, mp) -> list:
    if p.denominator == 1 and p >= 0:
        e = int(p)
        result = [mp.one] + [mp.zero] * order
        base = a
        while e:
            if e & 1:
                result = _jmul(result, base, order, mp)
            e >>= 1
            if e:
                base = _jmul(base, base, order, mp)
        return result
    if a[0] == 0:
        raise DomainError("negative or fractional power at zero")
    if p.denominator != 1 and a[0] < 0:
        raise DomainError("fractional power of a negative number")
    pm = mp.mpf(p.numerator) / p.denominator
    out = [mp.power(a[0], pm)]
    inv = 1 / a[0]
    for k in range(1, order + 1):
        s = mp.zero
        for i in range(1, k + 1):
            if a[i]:
                s += (pm * i - (k - i)) * a[i] * out[k - i]
        out.append(s * inv / k)
    return out


def _jcompose(derivs: list, g: list, order: int, mp) -> list:
    """Jet of h(g) given h^{(k)}(g_0)/k! in ``derivs``."""
    out = [derivs[0]] + [mp.zero] * order
    if all(c == 0 for c in g[2:]) and g[1] == 1:
        return list(derivs[: order + 1])
    u = [mp.zero] + list(g[1:])
    power = [mp.one] + [mp.zero] * order
    for k in range(1, order + 1):
        power = _jmul(power, u, order, mp)
        d = derivs[k]
        if d:
            for i in range(k, order + 1):
                out[i] += d * power[i]
    return out


def jet(expr: Node, x: Any, z: Any, order: int, ctx: PrecisionContext) -> list:
    """Normalized derivatives f^{(k)}(x)/k!, k = 0..order."""
    mp = ctx.mp
    x = ctx.mpf(x)
    zv = None if z is None else ctx.mpf(z)
    memo: dict[Node, list] = {}
    return _jet(expr, x, zv, order, ctx, memo)


def _jet(node: Node, x, z, order: int, ctx: PrecisionContext, memo: dict) -> list:
    hit = memo.get(node)
    if hit is not None:
        return hit
    mp = ctx.mp
    t = type(node)
    zeros = [mp.zero] * order
    if t is VarN:
        out = [x, mp.one] + [mp.zero] * (order - 1) if order >= 1 else [x]
    elif t in (Const, ParamZ):
        out = [eval_mpf(node, x, z, ctx)] + zeros
    elif not uses_n(node):
        out = [eval_mpf(node, x, z, ctx)] + zeros
    elif t in (Add, Sub):
        a = _jet(node.left, x, z, order, ctx, memo)
        b = _jet(node.right, x, z, order, ctx, memo)
        out = [p + q for p, q in zip(a, b)] if t is Add else [p - q for p, q in zip(a, b)]
    elif t is Neg:
        out = [-c for c in _jet(node.arg, x, z, order, ctx, memo)]
    elif t is Mul:
        a = _jet(node.left, x, z, order, ctx, memo)
        b = _jet(node.right, x, z, order, ctx, memo)
        out = _jmul(a, b, order, mp)
    elif t is Div:
        a = _jet(node.left, x, z, order, ctx, memo)
        b = _jet(node.right, x, z, order, ctx, memo)
        out = _jdiv(a, b, order, mp)
    elif t is Pow:
        out = _jpow(_jet(node.base, x, z, order, ctx, memo), node.exponent, order, mp)
    elif t is Exp:
        out = _jexp(_jet(node.arg, x, z, order, ctx, memo), order, mp)
    elif t is Log:
        out = _jlog(_jet(node.arg, x, z, order, ctx, memo), order, mp)
    elif t in (Harmonic, Polygamma):
        g = _jet(node.arg, x, z, order, ctx, memo)
        y = g[0]
        if t is Harmonic:
            j = node.j
            c = mp.mpf((-1) ** (j - 1)) / math.factorial(j - 1)
            derivs = [harmonic_value(j, y, ctx)]
            for k in range(1, order + 1):
                derivs.append(c * polygamma(j - 1 + k, y + 1, ctx) / math.factorial(k))
        else:
            if y <= 0:
                raise DomainError("polygamma needs a positive argument")
            derivs = [polygamma(node.m + k, y, ctx) / math.factorial(k) for k in range(order + 1)]
        out = _jcompose(derivs, g, order, mp)
    else:
        raise TypeError(f"not an expression node: {node!r}")
    memo[node] = out
    return out


def derivatives(expr: Node, x: Any, z: Any, order: int, ctx: PrecisionContext) -> list:
    """f^{(k)}(x) for k = 0..order."""
    coeffs = jet(expr, x, z, order, ctx)
    return [c * math.factorial(k) for k, c in enumerate(coeffs)]


# --------------------------------------------------------------------------
# growth classification


@dataclass(frozen=True)
class ExponentialGrowing:
    rate: Any


@dataclass(frozen=True)
class PolynomialBounded:
    degree: Any


@dataclass(frozen=True)
class ConvergentDecaying:
    rate: Any
    degree: Any = 0


GrowthClass = Union[ExponentialGrowing, PolynomialBounded, ConvergentDecaying]

_INF = float("inf")


def poly_coeffs(node: Node, z, ctx: PrecisionContext) -> list | None:
    """Coefficients (low to high) if ``node`` is a polynomial in n, else None."""
    mp = ctx.mp
    t = type(node)
    if not uses_n(node):
        return [eval_mpf(node, None, z, ctx)]
    if t is VarN:
        return [mp.zero, mp.one]
    if t in (Add, Sub):
        a, b = poly_coeffs(node.left, z, ctx), poly_coeffs(node.right, z, ctx)
        if a is None or b is None:
            return None
        size = max(len(a), len(b))
        a = a + [mp.zero] * (size - len(a))
        b = b + [mp.zero] * (size - len(b))
        return [p + q if t is Add else p - q for p, q in zip(a, b)]
    if t is Neg:
        a = poly_coeffs(node.arg, z, ctx)
        return None if a is None else [-c for c in a]
    if t is Mul:
        a, b = poly_coeffs(node.left, z, ctx), poly_coeffs(node.right, z, ctx)
        if a is None or b is None:
            return None
        out = [mp.zero] * (len(a) + len(b) - 1)
        for i, p in enumerate(a):
            for k, q in enumerate(b):
                out[i + k] += p * q
        return out
    if t is Div and not uses_n(node.right):
        a = poly_coeffs(node.left, z, ctx)
        d = eval_mpf(node.right, None, z, ctx)
        if a is None or d == 0:
            return None
        return [c / d for c in a]
    if t is Pow and node.exponent.denominator == 1 and 0 <= node.exponent <= 16:
        a = poly_coeffs(node.base, z, ctx)
        if a is None:
            return None
        out = [mp.one]
        for _ in range(int(node.exponent)):
            nxt = [mp.zero] * (len(out) + len(a) - 1)
            for i, p in enumerate(out):
                for k, q in enumerate(a):
                    nxt[i + k] += p * q
            out = nxt
        return out
    return None


def _trim(coeffs: list) -> list:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return coeffs


def _growth(node: Node, z, ctx: PrecisionContext) -> tuple:
    """Asymptotic signature (rate, degree): a(n) ~ exp(rate n) n^degree up to logs."""
    t = type(node)
    if not uses_n(node):
        return (0.0, 0.0)
    if t is VarN:
        return (0.0, 1.0)
    if t in (Add, Sub):
        return max(_growth(node.left, z, ctx), _growth(node.right, z, ctx))
    if t is Neg:
        return _growth(node.arg, z, ctx)
    if t is Mul:
        a, b = _growth(node.left, z, ctx), _growth(node.right, z, ctx)
        return (a[0] + b[0], a[1] + b[1])
    if t is Div:
        a, b = _growth(node.left, z, ctx), _growth(node.right, z, ctx)
        return (a[0] - b[0], a[1] - b[1])
    if t is Pow:
        a = _growth(node.base, z, ctx)
        p = float(node.exponent)
        return (a[0] * p, a[1] * p)
    if t in (Log, Harmonic, Polygamma):
        if t is Polygamma and node.m >= 1:
            inner = _growth(node.arg, z, ctx)
            return (0.0, -node.m * inner[1]) if inner[0] == 0 and inner[1] > 0 else (0.0, 0.0)
        if t is Harmonic and node.j >= 2:
            return (0.0, 0.0)
        return (0.0, 0.0)
    if t is Exp:
        coeffs = poly_coeffs(node.arg, z, ctx)
        if coeffs is None:
            inner = _growth(node.arg, z, ctx)
            if inner == (0.0, 0.0):
                return (0.0, 0.0)
            # exp of a sub-linear non-polynomial: bounded by exp(o(n)), treat as unbounded degree
            return (0.0, _INF) if inner[0] == 0 and inner[1] < 1 else (_INF, 0.0)
        coeffs = _trim(coeffs)
        if len(coeffs) > 2:
            return (_INF, 0.0) if coeffs[-1] > 0 else (-_INF, 0.0)
        rate = float(coeffs[1]) if len(coeffs) == 2 else 0.0
        return (rate, 0.0)
    raise TypeError(f"not an expression node: {node!r}")


def classify_growth(expr: Node, z: Any = None, ctx: PrecisionContext | None = None) -> GrowthClass:
    """Conservative structural growth class of the term as n -> infinity."""
    ctx = ctx or PrecisionContext()
    if uses_z(expr) and z is None:
        raise MissingParameterError("expression uses z but no value was given")
    zv = None if z is None else ctx.mpf(z)
    rate, degree = _growth(expr, zv, ctx)
    if rate > 0:
        if rate >= math.pi:
            raise InadmissibleError(f"exponential rate {rate:.6g} is not below pi")
        return ExponentialGrowing(rate)
    if rate < 0:
        return ConvergentDecaying(-rate, degree)
    if degree < -1:
        return ConvergentDecaying(0.0, degree)
    return PolynomialBounded(degree)


__all__ = [
    "Node", "SeriesExpr", "Const", "VarN", "ParamZ", "Add", "Sub", "Mul", "Div", "Neg", "Pow",
    "Exp", "Log", "Harmonic", "Polygamma", "parse", "to_text", "evaluate", "eval_mpf",
    "differentiate", "jet", "derivatives", "classify_growth", "ExponentialGrowing",
    "PolynomialBounded", "ConvergentDecaying", "GrowthClass", "poly_coeffs", "fold_constant",
    "harmonic_value", "uses_z", "uses_n",
]
