"""Exact symbolic expression kernel.

Expressions are immutable trees over field variables, formal parameters,
algebraic constants (symbols reduced modulo a declared power relation),
opaque function applications and their formal derivatives (jets), exact
rationals, sums, products, integer powers and quotients.

The kernel provides parsing, differentiation, canonical rational normal
forms, exact identity-to-zero testing and deterministic randomized zero
testing.  All arithmetic is over arbitrary-precision rationals; no floats
are used anywhere.
"""

from __future__ import annotations

import random
import sys
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import poly
from .poly import Fraction as _F  # noqa: F401  (re-exported for convenience)

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


# ---------------------------------------------------------------------------
# errors


class ExprError(Exception):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UndeclaredSymbolError(ExprError):
    pass


class ZeroDenominatorError(ExprError):
    """A denominator normalized to the identically-zero polynomial."""


class NonIntegerExponentError(ExprError):
    pass


class GuardExceededError(ExprError):
    """The expansion guard (maximum total degree) was exceeded."""


class PoleError(ExprError):
    """Numeric evaluation hit a zero denominator; resample the point."""


class SampleBudgetError(ExprError):
    """All resampling attempts hit poles."""


class NotRationalError(ExprError):
    """Evaluation result carries a nonzero algebraic-constant component."""


# ---------------------------------------------------------------------------
# expression nodes


class Expr:
    __slots__ = ("_hash",)

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __pow__(self, k):
        if not isinstance(k, int):
            raise NonIntegerExponentError(f"exponent {k!r} is not an integer")
        return pow_(self, k)

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        return f"<{type(self).__name__} {render(self)}>"

    def __str__(self):
        return render(self)


class Rat(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)
        self._hash = None

    def __eq__(self, other):
        return type(other) is Rat and self.value == other.value

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Rat", self.value))
        return self._hash


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = None

    def __eq__(self, other):
        return type(other) is Var and self.name == other.name

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Var", self.name))
        return self._hash


class Param(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = None

    def __eq__(self, other):
        return type(other) is Param and self.name == other.name

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Param", self.name))
        return self._hash


class AlgConst(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = None

    def __eq__(self, other):
        return type(other) is AlgConst and self.name == other.name

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Alg", self.name))
        return self._hash


class Func(Expr):
    """Opaque function application carrying a formal derivative multi-index.

    ``orders[p]`` is the number of derivatives taken with respect to the
    p-th declared argument slot; ``args`` are the expressions the (derived)
    function is applied to.  ``orders == (0, ..., 0)`` is a plain application.
    """

    __slots__ = ("name", "orders", "args")

    def __init__(self, name: str, orders: tuple, args: tuple):
        self.name = name
        self.orders = tuple(orders)
        self.args = tuple(args)
        self._hash = None

    def __eq__(self, other):
        return (
            type(other) is Func
            and self.name == other.name
            and self.orders == other.orders
            and self.args == other.args
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Func", self.name, self.orders, self.args))
        return self._hash


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: tuple):
        self.terms = tuple(terms)
        self._hash = None

    def __eq__(self, other):
        return type(other) is Add and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Add", self.terms))
        return self._hash


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: tuple):
        self.factors = tuple(factors)
        self._hash = None

    def __eq__(self, other):
        return type(other) is Mul and self.factors == other.factors

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Mul", self.factors))
        return self._hash


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: int):
        self.base = base
        self.exp = exp
        self._hash = None

    def __eq__(self, other):
        return type(other) is Pow and self.exp == other.exp and self.base == other.base

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Pow", self.base, self.exp))
        return self._hash


class Div(Expr):
    __slots__ = ("num", "den")

    def __init__(self, num: Expr, den: Expr):
        self.num = num
        self.den = den
        self._hash = None

    def __eq__(self, other):
        return type(other) is Div and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Div", self.num, self.den))
        return self._hash


ZERO = Rat(0)
ONE = Rat(1)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Rat(x)
    raise TypeError(f"cannot use {x!r} as an expression")


def rat(p, q=1) -> Rat:
    return Rat(Fraction(p, q))


def add(*xs) -> Expr:
    terms = []
    const = Fraction(0)
    for x in xs:
        x = _coerce(x)
        if isinstance(x, Add):
            inner = x.terms
        else:
            inner = (x,)
        for t in inner:
            if isinstance(t, Rat):
                const += t.value
            else:
                terms.append(t)
    if const != 0 or not terms:
        terms.append(Rat(const))
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def neg(x) -> Expr:
    x = _coerce(x)
    if isinstance(x, Rat):
        return Rat(-x.value)
    return mul(Rat(-1), x)


def mul(*xs) -> Expr:
    factors = []
    const = Fraction(1)
    for x in xs:
        x = _coerce(x)
        if isinstance(x, Mul):
            inner = x.factors
        else:
            inner = (x,)
        for f in inner:
            if isinstance(f, Rat):
                const *= f.value
            else:
                factors.append(f)
    if const == 0:
        return ZERO
    if const != 1 or not factors:
        factors.insert(0, Rat(const))
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def pow_(b, k: int) -> Expr:
    b = _coerce(b)
    if not isinstance(k, int):
        raise NonIntegerExponentError(f"exponent {k!r} is not an integer")
    if k == 0:
        return ONE
    if k == 1:
        return b
    if isinstance(b, Rat):
        if k < 0 and b.value == 0:
            raise ZeroDenominatorError("0 raised to a negative power")
        return Rat(b.value**k)
    return Pow(b, k)


def div(a, b) -> Expr:
    a, b = _coerce(a), _coerce(b)
    if isinstance(b, Rat):
        if b.value == 0:
            raise ZeroDenominatorError("division by zero")
        return mul(Rat(1 / b.value), a)
    if isinstance(a, Rat) and a.value == 0:
        return ZERO
    return Div(a, b)


# ---------------------------------------------------------------------------
# context


@dataclass(frozen=True)
class AlgebraicSymbol:
    """Symbol s reduced by the power relation s**power -> rhs.

    ``rhs`` must not contain any algebraic symbol.  ``gradient`` lists the
    partial derivatives of s with respect to field variables (absent entries
    are zero); a plain algebraic constant such as sqrt2 has no gradient.
    """

    name: str
    power: int
    rhs: Expr
    gradient: tuple = ()

    def gradient_for(self, var: str):
        for name, g in self.gradient:
            if name == var:
                return g
        return None


@dataclass(frozen=True)
class OpaqueFunction:
    name: str
    args: tuple


@dataclass(frozen=True)
class Assumption:
    """Triangular rewrite eliminating one jet symbol.

    The jet of ``func`` with multi-index ``orders`` (and every higher jet in
    its derivative cone) rewrites to the corresponding derivative of ``rhs``.
    ``side_condition`` records the non-vanishing requirement under which the
    rule was solved; it is reported, never enforced.
    """

    func: str
    orders: tuple
    rhs: Expr
    side_condition: Expr | None = None


@dataclass(frozen=True)
class Context:
    variables: tuple
    parameters: tuple = ()
    algebraics: tuple = ()
    functions: tuple = ()
    assumptions: tuple = ()

    def __post_init__(self):
        names = list(self.variables) + list(self.parameters)
        names += [a.name for a in self.algebraics]
        names += [f.name for f in self.functions]
        if len(set(names)) != len(names):
            raise ExprError("duplicate identifier in context")
        for a in self.algebraics:
            if a.power < 2:
                raise ExprError(f"algebraic symbol {a.name} needs power >= 2")
            for leaf in walk_leaves(a.rhs):
                if isinstance(leaf, AlgConst):
                    raise ExprError(
                        f"rewrite target of {a.name} may not contain algebraic symbols"
                    )
        self._check_assumptions()

    def _check_assumptions(self):
        seen = []
        for i, rule in enumerate(self.assumptions):
            fn = self.function(rule.func)
            if len(rule.orders) != len(fn.args):
                raise ExprError(f"assumption for {rule.func}: bad multi-index")
            if sum(rule.orders) < 1:
                raise ExprError("assumptions must eliminate a derivative jet")
            for f2, o2 in seen:
                if f2 == rule.func and (
                    all(a <= b for a, b in zip(o2, rule.orders))
                    or all(b <= a for a, b in zip(o2, rule.orders))
                ):
                    raise ExprError("two assumptions eliminate the same jet symbol")
            # triangularity: rhs free of jets eliminated by rules 1..i (incl. self)
            for leaf in walk_leaves(rule.rhs):
                if isinstance(leaf, Func):
                    for f2, o2 in seen + [(rule.func, rule.orders)]:
                        if leaf.name == f2 and all(
                            a >= b for a, b in zip(leaf.orders, o2)
                        ):
                            raise ExprError(
                                "assumption system is not triangular: rule for "
                                f"{rule.func} reintroduces an eliminated jet"
                            )
            seen.append((rule.func, rule.orders))

    @cached_property
    def _vars(self):
        return {name: i for i, name in enumerate(self.variables)}

    @cached_property
    def _params(self):
        return frozenset(self.parameters)

    @cached_property
    def _algs(self):
        return {a.name: a for a in self.algebraics}

    @cached_property
    def _funcs(self):
        return {f.name: f for f in self.functions}

    @cached_property
    def _rules(self):
        table: dict = {}
        for rule in self.assumptions:
            table.setdefault(rule.func, []).append(rule)
        return table

    def var_index(self, name: str) -> int:
        try:
            return self._vars[name]
        except KeyError:
            raise UndeclaredSymbolError(f"undeclared variable {name!r}") from None

    def is_declared(self, name: str) -> bool:
        return (
            name in self._vars
            or name in self._params
            or name in self._algs
            or name in self._funcs
        )

    def function(self, name: str) -> OpaqueFunction:
        try:
            return self._funcs[name]
        except KeyError:
            raise UndeclaredSymbolError(f"undeclared function {name!r}") from None

    def algebraic(self, name: str) -> AlgebraicSymbol:
        return self._algs[name]

    def var(self, name: str) -> Var:
        self.var_index(name)
        return Var(name)

    def param(self, name: str) -> Param:
        if name not in self._params:
            raise UndeclaredSymbolError(f"undeclared parameter {name!r}")
        return Param(name)

    def func_expr(self, name: str, orders=None) -> Func:
        fn = self.function(name)
        orders = tuple(orders) if orders is not None else (0,) * len(fn.args)
        return Func(name, orders, tuple(Var(a) for a in fn.args))

    def with_parameters(self, *names: str) -> "Context":
        fresh = tuple(n for n in names if n not in self._params)
        for n in fresh:
            if self.is_declared(n):
                raise ExprError(f"{n!r} already declared")
        return Context(
            self.variables,
            self.parameters + fresh,
            self.algebraics,
            self.functions,
            self.assumptions,
        )

    def fresh_parameter(self, stem: str) -> tuple:
        name = stem
        k = 0
        while self.is_declared(name):
            k += 1
            name = f"{stem}{k}"
        return name, self.with_parameters(name)

    def parse(self, text: str) -> Expr:
        return parse(text, self)


def walk_leaves(e: Expr):
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Add):
            stack.extend(x.terms)
        elif isinstance(x, Mul):
            stack.extend(x.factors)
        elif isinstance(x, Pow):
            stack.append(x.base)
        elif isinstance(x, Div):
            stack.append(x.num)
            stack.append(x.den)
        else:
            if isinstance(x, Func):
                stack.extend(x.args)
            yield x


# ---------------------------------------------------------------------------
# parser


_TOKEN_CHARS = set("+-*/^(),")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            e = add(e, rhs if op == "+" else neg(rhs))
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.factor()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def factor(self) -> Expr:
        # unary minus binds more loosely than '^': -w^2 is -(w^2)
        minus = 0
        while self.peek()[0] == "-":
            self.advance()
            minus += 1
        e = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            sign = 1
            if self.peek()[0] == "-":
                self.advance()
                sign = -1
            tok = self.advance()
            if tok[0] != "int":
                raise ParseError("non-integer exponent", tok[2])
            e = pow_(e, sign * int(tok[1]))
        return neg(e) if minus % 2 else e

    def atom(self) -> Expr:
        tok = self.advance()
        kind, value, off = tok
        if kind == "-":
            return neg(self.atom())
        if kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "int":
            return Rat(int(value))
        if kind == "ident":
            if value == "D" and self.peek()[0] == "(":
                return self.jet(off)
            return self.identifier(value, off)
        raise ParseError(f"unexpected token {value!r}", off)

    def jet(self, off: int) -> Expr:
        self.expect("(")
        name_tok = self.expect("ident")
        fname = name_tok[1]
        fn = self.ctx._funcs.get(fname)
        if fn is None:
            raise ParseError(f"undeclared function {fname!r}", name_tok[2])
        orders = [0] * len(fn.args)
        while self.peek()[0] == ",":
            self.advance()
            arg_tok = self.expect("ident")
            slot = arg_tok[1]
            if slot in fn.args:
                orders[fn.args.index(slot)] += 1
            elif slot.startswith("x") and slot[1:].isdigit() and 1 <= int(slot[1:]) <= len(fn.args):
                orders[int(slot[1:]) - 1] += 1
            else:
                raise ParseError(
                    f"{slot!r} is not an argument of {fname!r}", arg_tok[2]
                )
        self.expect(")")
        if sum(orders) == 0:
            raise ParseError("D(...) needs at least one differentiation slot", off)
        args = tuple(Var(a) for a in fn.args)
        if self.peek()[0] == "(":
            self.advance()
            call_args = [self.expr()]
            while self.peek()[0] == ",":
                self.advance()
                call_args.append(self.expr())
            self.expect(")")
            if len(call_args) != len(fn.args):
                raise ParseError(f"wrong argument count for {fname!r}", off)
            args = tuple(call_args)
        return Func(fname, tuple(orders), args)

    def identifier(self, name: str, off: int) -> Expr:
        ctx = self.ctx
        if self.peek()[0] == "(":
            fn = ctx._funcs.get(name)
            if fn is None:
                raise ParseError(f"undeclared function {name!r}", off)
            self.advance()
            call_args = [self.expr()]
            while self.peek()[0] == ",":
                self.advance()
                call_args.append(self.expr())
            self.expect(")")
            if len(call_args) != len(fn.args):
                raise ParseError(f"wrong argument count for {name!r}", off)
            return Func(name, (0,) * len(fn.args), tuple(call_args))
        if name in ctx._vars:
            return Var(name)
        if name in ctx._params:
            return Param(name)
        if name in ctx._algs:
            return AlgConst(name)
        fn = ctx._funcs.get(name)
        if fn is not None:
            # bare function name: application to its declared arguments
            return Func(name, (0,) * len(fn.args), tuple(Var(a) for a in fn.args))
        raise ParseError(f"undeclared identifier {name!r}", off)


def parse(text: str, ctx: Context) -> Expr:
    return _Parser(text, ctx).parse()


# ---------------------------------------------------------------------------
# rendering


def _render_rat(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def render(e: Expr) -> str:
    return _render(e, 0)


def _render(e: Expr, prec: int) -> str:
    if isinstance(e, Rat):
        s = _render_rat(e.value)
        if (e.value < 0 or e.value.denominator != 1) and prec >= 20:
            return f"({s})"
        if e.value < 0 and prec >= 10:
            return f"({s})"
        return s
    if isinstance(e, (Var, Param, AlgConst)):
        return e.name
    if isinstance(e, Func):
        return _render_func(e)
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            s = _render(t, 5 if i else 10)
            if i and s.startswith("-"):
                parts.append(f" - {s[1:]}")
            elif i:
                parts.append(f" + {s}")
            else:
                parts.append(s)
        s = "".join(parts)
        return f"({s})" if prec > 10 else s
    if isinstance(e, Mul):
        parts = []
        negate = False
        for i, f in enumerate(e.factors):
            if i == 0 and isinstance(f, Rat):
                if f.value == -1:
                    negate = True
                    continue
                if f.value < 0:
                    negate = True
                    parts.append(_render(Rat(-f.value), 20))
                    continue
            parts.append(_render(f, 20))
        s = "*".join(parts) if parts else "1"
        if negate:
            s = f"-{s}"
        return f"({s})" if prec > 20 or (negate and prec > 10) else s
    if isinstance(e, Div):
        num = e.num
        sign = ""
        if isinstance(num, Mul) and isinstance(num.factors[0], Rat) and num.factors[0].value < 0:
            sign = "-"
            num = mul(Rat(-num.factors[0].value), *num.factors[1:])
        elif isinstance(num, Rat) and num.value < 0:
            sign = "-"
            num = Rat(-num.value)
        s = f"{sign}{_render(num, 20)}/{_render(e.den, 25)}"
        return f"({s})" if prec > 20 or (sign and prec > 10) else s
    if isinstance(e, Pow):
        base = _render(e.base, 30)
        return f"{base}^{e.exp}"
    raise TypeError(f"cannot render {e!r}")


def _render_func(e: Func) -> str:
    args = ", ".join(_render(a, 0) for a in e.args)
    plain_args = all(isinstance(a, Var) for a in e.args)
    if sum(e.orders) == 0:
        return f"{e.name}({args})"
    if plain_args:
        slots = []
        for a, k in zip(e.args, e.orders):
            slots.extend([a.name] * k)
        return f"D({e.name}, {', '.join(slots)})"
    # jet at composite arguments: D-form followed by the application
    slots = []
    for pos, k in enumerate(e.orders):
        slots.extend([f"x{pos + 1}"] * k)
    return f"D({e.name}, {', '.join(slots)})({args})"


# ---------------------------------------------------------------------------
# differentiation


def differentiate(e: Expr, var: str, ctx: Context) -> Expr:
    ctx.var_index(var)
    memo: dict = {}
    return _diff(e, var, ctx, memo)


def _diff(e: Expr, var: str, ctx: Context, memo: dict) -> Expr:
    key = id(e)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(e, Rat) or isinstance(e, Param):
        out = ZERO
    elif isinstance(e, Var):
        out = ONE if e.name == var else ZERO
    elif isinstance(e, AlgConst):
        g = ctx.algebraic(e.name).gradient_for(var)
        out = g if g is not None else ZERO
    elif isinstance(e, Func):
        parts = []
        for p, arg in enumerate(e.args):
            darg = _diff(arg, var, ctx, memo)
            if darg == ZERO:
                continue
            orders = list(e.orders)
            orders[p] += 1
            parts.append(mul(Func(e.name, tuple(orders), e.args), darg))
        out = add(*parts) if parts else ZERO
    elif isinstance(e, Add):
        out = add(*[_diff(t, var, ctx, memo) for t in e.terms])
    elif isinstance(e, Mul):
        parts = []
        for i, f in enumerate(e.factors):
            df = _diff(f, var, ctx, memo)
            if df == ZERO:
                continue
            rest = e.factors[:i] + e.factors[i + 1 :]
            parts.append(mul(df, *rest))
        out = add(*parts) if parts else ZERO
    elif isinstance(e, Pow):
        db = _diff(e.base, var, ctx, memo)
        if db == ZERO:
            out = ZERO
        else:
            out = mul(Rat(e.exp), pow_(e.base, e.exp - 1), db)
    elif isinstance(e, Div):
        dn = _diff(e.num, var, ctx, memo)
        dd = _diff(e.den, var, ctx, memo)
        if dd == ZERO:
            out = div(dn, e.den)
        else:
            out = div(add(mul(dn, e.den), neg(mul(e.num, dd))), pow_(e.den, 2))
    else:
        raise TypeError(f"cannot differentiate {e!r}")
    memo[key] = (e, out)
    return out


# ---------------------------------------------------------------------------
# substitution and instantiation


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace variables/parameters (by name) with expressions."""
    memo: dict = {}

    def go(x: Expr) -> Expr:
        key = id(x)
        hit = memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(x, (Var, Param)):
            out = mapping.get(x.name, x)
        elif isinstance(x, Func):
            out = Func(x.name, x.orders, tuple(go(a) for a in x.args))
        elif isinstance(x, Add):
            out = add(*[go(t) for t in x.terms])
        elif isinstance(x, Mul):
            out = mul(*[go(f) for f in x.factors])
        elif isinstance(x, Pow):
            out = pow_(go(x.base), x.exp)
        elif isinstance(x, Div):
            out = div(go(x.num), go(x.den))
        else:
            out = x
        memo[key] = (x, out)
        return out

    return go(e)


def instantiate(e: Expr, inst: dict, ctx: Context) -> Expr:
    """Replace opaque functions with concrete expressions.

    ``inst`` maps a function name to an expression in the function's declared
    arguments.  Jets become honest derivatives of the instantiation, and the
    application arguments are substituted in afterwards.
    """
    memo: dict = {}

    def go(x: Expr) -> Expr:
        key = id(x)
        hit = memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(x, Func):
            args = tuple(go(a) for a in x.args)
            if x.name in inst:
                fn = ctx.function(x.name)
                body = inst[x.name]
                for slot, k in zip(fn.args, x.orders):
                    for _ in range(k):
                        body = differentiate(body, slot, ctx)
                out = substitute(body, dict(zip(fn.args, args)))
            else:
                out = Func(x.name, x.orders, args)
        elif isinstance(x, Add):
            out = add(*[go(t) for t in x.terms])
        elif isinstance(x, Mul):
            out = mul(*[go(f) for f in x.factors])
        elif isinstance(x, Pow):
            out = pow_(go(x.base), x.exp)
        elif isinstance(x, Div):
            out = div(go(x.num), go(x.den))
        else:
            out = x
        memo[key] = (x, out)
        return out

    return go(e)


# ---------------------------------------------------------------------------
# assumption rewriting


def rewrite_assumptions(e: Expr, ctx: Context, used=None) -> Expr:
    """Apply the context's triangular substitution rules to fixpoint."""
    if not ctx.assumptions:
        return e
    memo: dict = {}

    def go(x: Expr) -> Expr:
        hit = memo.get(x)
        if hit is not None:
            return hit
        if isinstance(x, Func):
            out = Func(x.name, x.orders, tuple(go(a) for a in x.args))
            rule = _matching_rule(out, ctx)
            if rule is not None:
                if used is not None:
                    used.add(rule)
                extra = tuple(a - b for a, b in zip(out.orders, rule.orders))
                body = rule.rhs
                fn = ctx.function(rule.func)
                for slot, k in zip(fn.args, extra):
                    for _ in range(k):
                        body = differentiate(body, slot, ctx)
                if out.args != tuple(Var(a) for a in fn.args):
                    body = substitute(body, dict(zip(fn.args, out.args)))
                out = go(body)
        elif isinstance(x, Add):
            out = add(*[go(t) for t in x.terms])
        elif isinstance(x, Mul):
            out = mul(*[go(f) for f in x.factors])
        elif isinstance(x, Pow):
            out = pow_(go(x.base), x.exp)
        elif isinstance(x, Div):
            out = div(go(x.num), go(x.den))
        else:
            out = x
        memo[x] = out
        return out

    return go(e)


def _matching_rule(atom: Func, ctx: Context):
    for rule in ctx._rules.get(atom.name, ()):
        if all(a >= b for a, b in zip(atom.orders, rule.orders)):
            return rule
    return None


# ---------------------------------------------------------------------------
# the polynomial ring over interned atoms

_MAX_DEGREE: ContextVar = ContextVar("hamops_max_degree", default=None)


@contextmanager
def expansion_guard(max_degree: int):
    """Abort normalization when any monomial exceeds ``max_degree``."""
    token = _MAX_DEGREE.set(max_degree)
    try:
        yield
    finally:
        _MAX_DEGREE.reset(token)


class Ring:
    """Interning table mapping leaf atoms to polynomial indices."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.atoms: list[Expr] = []
        self.index: dict[Expr, int] = {}
        self.algrules: dict[int, tuple] = {}  # idx -> (power, rhs poly)
        limit = _MAX_DEGREE.get()
        if limit is None:
            self.guard = None
        else:

            def guard(p, _limit=limit):
                if poly.pmax_degree(p) > _limit:
                    raise GuardExceededError(
                        f"expansion exceeded --max-degree {_limit}"
                    )

            self.guard = guard

    @property
    def width(self) -> int:
        return len(self.atoms)

    def intern(self, leaf: Expr) -> int:
        idx = self.index.get(leaf)
        if idx is not None:
            return idx
        idx = len(self.atoms)
        self.atoms.append(leaf)
        self.index[leaf] = idx
        if isinstance(leaf, AlgConst):
            sym = self.ctx.algebraic(leaf.name)
            rhs_num, rhs_den = self.to_rf(sym.rhs)
            if rhs_den != poly.const_poly(1):
                raise ExprError(
                    f"rewrite target of {sym.name} must be polynomial"
                )
            self.algrules[idx] = (sym.power, rhs_num)
        return idx

    def reduce(self, p: poly.Poly) -> poly.Poly:
        """Reduce powers of algebraic symbols modulo their declared relations."""
        if not self.algrules:
            return p
        pending = p
        while True:
            target = None
            for m in pending:
                for idx, exp in m:
                    rule = self.algrules.get(idx)
                    if rule and exp >= rule[0]:
                        target = (m, idx, rule)
                        break
                if target:
                    break
            if target is None:
                return pending
            m, idx, (d, rhs) = target
            coeff = pending.pop(m)
            rest = []
            exp = 0
            for i, e in m:
                if i == idx:
                    exp = e
                else:
                    rest.append((i, e))
            q, r = divmod(exp, d)
            repl = poly.ppow(rhs, q, self.guard)
            base: poly.Poly = {tuple(rest) if r == 0 else tuple(sorted(rest + [(idx, r)])): coeff}
            pending = poly.padd(pending, poly.pmul(base, repl, self.guard))

    def pmul(self, a, b):
        return self.reduce(poly.pmul(a, b, self.guard))

    def ppow(self, a, k):
        return self.reduce(poly.ppow(a, k, self.guard))

    def to_rf(self, e: Expr):
        """Convert to a (numerator, denominator) pair of reduced polynomials."""
        if isinstance(e, Rat):
            return poly.const_poly(e.value), poly.const_poly(1)
        if isinstance(e, (Var, Param, AlgConst)):
            idx = self.intern(e)
            return self.reduce(poly.atom_poly(idx)), poly.const_poly(1)
        if isinstance(e, Func):
            args = tuple(to_canonical(a, self.ctx) for a in e.args)
            idx = self.intern(Func(e.name, e.orders, args))
            return poly.atom_poly(idx), poly.const_poly(1)
        if isinstance(e, Add):
            num, den = poly.const_poly(0), poly.const_poly(1)
            for t in e.terms:
                tn, td = self.to_rf(t)
                if td == den:
                    num = poly.padd(num, tn)
                else:
                    num = poly.padd(self.pmul(num, td), self.pmul(tn, den))
                    den = self.pmul(den, td)
                    num, den = self._shrink(num, den)
            return num, den
        if isinstance(e, Mul):
            num, den = poly.const_poly(1), poly.const_poly(1)
            for f in e.factors:
                fn, fd = self.to_rf(f)
                num = self.pmul(num, fn)
                den = self.pmul(den, fd)
                num, den = self._shrink(num, den)
            return num, den
        if isinstance(e, Pow):
            bn, bd = self.to_rf(e.base)
            k = e.exp
            if k < 0:
                if not bn:
                    raise ZeroDenominatorError(
                        "negative power of an identically-zero expression"
                    )
                bn, bd = bd, bn
                k = -k
            return self.ppow(bn, k), self.ppow(bd, k)
        if isinstance(e, Div):
            nn, nd = self.to_rf(e.num)
            dn, dd = self.to_rf(e.den)
            if not dn:
                raise ZeroDenominatorError("division by an identically-zero expression")
            num = self.pmul(nn, dd)
            den = self.pmul(nd, dn)
            return self._shrink(num, den)
        raise TypeError(f"cannot normalize {e!r}")

    def _shrink(self, num, den):
        """Cheap cancellations that keep intermediate results small."""
        if not num:
            return num, poly.const_poly(1)
        g = poly.pmonomial_content(num)
        g = poly.mono_gcd(g, poly.pmonomial_content(den))
        if g:
            # monomials of algebraic symbols are not plain units; skip those
            if not any(idx in self.algrules for idx, _ in g):
                num = {poly.mono_div(m, g): c for m, c in num.items()}
                den = {poly.mono_div(m, g): c for m, c in den.items()}
        if len(den) == 1 and poly.ONE_M in den:
            c = den[poly.ONE_M]
            if c != 1:
                num = poly.pscale(num, 1 / c)
                den = poly.const_poly(1)
        return num, den


# ---------------------------------------------------------------------------
# normal form


def _canonical_pair(num, den, ring: Ring):
    """Order atoms canonically and fully reduce the fraction."""
    order = sorted(range(ring.width), key=lambda i: _atom_sort_key(ring.atoms[i], ring.ctx))
    remap = {old: new for new, old in enumerate(order)}
    atoms = [ring.atoms[i] for i in order]

    def redo(p):
        return {
            tuple(sorted((remap[i], e) for i, e in m)): c for m, c in p.items()
        }

    num, den = redo(num), redo(den)
    width = len(atoms)
    alg_idx = {remap[i]: rule for i, rule in ring.algrules.items()}

    if not num:
        return {}, poly.const_poly(1), atoms

    # rationalize degree-2 algebraic symbols out of the denominator
    for idx, (d, rhs) in sorted(alg_idx.items()):
        if d != 2:
            continue
        if not any(i == idx for m in den for i, _ in m):
            continue
        a_part, b_part = {}, {}
        for m, c in den.items():
            dm = dict(m)
            k = dm.pop(idx, 0)
            rest = tuple(sorted(dm.items()))
            if k == 0:
                a_part[rest] = c
            else:
                b_part[rest] = c
        conj = dict(a_part)
        for m, c in b_part.items():
            dm = dict(m)
            dm[idx] = 1
            mm = tuple(sorted(dm.items()))
            conj[mm] = conj.get(mm, Fraction(0)) - c
        conj = {m: c for m, c in conj.items() if c}
        rhs_re = redo(rhs)
        new_den = poly.psub(poly.pmul(a_part, a_part), poly.pmul(poly.pmul(b_part, b_part), rhs_re))
        if not new_den:
            continue
        num = poly.pmul(num, conj)
        num = _reduce_mapped(num, alg_idx)
        den = new_den

    num = _reduce_mapped(num, alg_idx)
    den = _reduce_mapped(den, alg_idx)
    if not den:
        raise ZeroDenominatorError("denominator vanished under algebraic reduction")
    if not num:
        return {}, poly.const_poly(1), atoms

    g = poly.pmonomial_content(num)
    g = poly.mono_gcd(g, poly.pmonomial_content(den))
    if g and not any(i in alg_idx for i, _ in g):
        num = {poly.mono_div(m, g): c for m, c in num.items()}
        den = {poly.mono_div(m, g): c for m, c in den.items()}

    g = poly.pgcd(num, den, width)
    if g != poly.const_poly(1) and g:
        qn = poly.pdiv_exact(num, g, width)
        qd = poly.pdiv_exact(den, g, width)
        if qn is not None and qd is not None:
            num, den = qn, qd

    # joint content and sign normalization: denominator leading coeff positive
    cn = poly._rat_content(num)
    cd = poly._rat_content(den)
    gn = Fraction(
        igcd_f(cn, cd)
    )
    num = poly.pscale(num, 1 / gn)
    den = poly.pscale(den, 1 / gn)
    _, lc = poly.leading(den, width)
    if lc < 0:
        num = poly.pneg(num)
        den = poly.pneg(den)
    return num, den, atoms


def igcd_f(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd

    num = gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    if num == 0:
        return Fraction(1)
    return Fraction(num, den)


def _reduce_mapped(p, alg_idx):
    """Algebraic reduction for polynomials in canonical atom order."""
    if not alg_idx:
        return p
    pending = dict(p)
    while True:
        target = None
        for m in pending:
            for idx, exp in m:
                rule = alg_idx.get(idx)
                if rule and exp >= rule[0]:
                    target = (m, idx, rule)
                    break
            if target:
                break
        if target is None:
            return pending
        m, idx, (d, rhs) = target
        coeff = pending.pop(m)
        rest = []
        exp = 0
        for i, e in m:
            if i == idx:
                exp = e
            else:
                rest.append((i, e))
        q, r = divmod(exp, d)
        repl = poly.ppow(rhs, q)
        base = {tuple(sorted(rest + ([(idx, r)] if r else []))): coeff}
        pending = poly.padd(pending, poly.pmul(base, repl))


def _atom_sort_key(leaf: Expr, ctx: Context):
    if isinstance(leaf, Var):
        return (0, ctx.var_index(leaf.name), "")
    if isinstance(leaf, Param):
        return (1, 0, leaf.name)
    if isinstance(leaf, AlgConst):
        return (2, 0, leaf.name)
    if isinstance(leaf, Func):
        return (3, 0, leaf.name, leaf.orders, tuple(render(a) for a in leaf.args))
    raise TypeError(f"not an atom: {leaf!r}")


def _poly_to_expr(p, atoms) -> Expr:
    if not p:
        return ZERO
    width = len(atoms)
    terms = []
    for m in sorted(p, key=lambda m: poly.grlex_key(m, width), reverse=True):
        c = p[m]
        factors = [Rat(c)]
        for idx, exp in m:
            factors.append(pow_(atoms[idx], exp))
        terms.append(mul(*factors))
    return add(*terms)


def to_canonical(e: Expr, ctx: Context, used=None) -> Expr:
    rw = rewrite_assumptions(e, ctx, used)
    ring = Ring(ctx)
    num, den = ring.to_rf(rw)
    if not den:
        raise ZeroDenominatorError("denominator is identically zero")
    num, den, atoms = _canonical_pair(num, den, ring)
    num_e = _poly_to_expr(num, atoms)
    if den == poly.const_poly(1):
        return num_e
    den_e = _poly_to_expr(den, atoms)
    return div(num_e, den_e)


def normalize(e: Expr, ctx: Context) -> Expr:
    """Canonical rational normal form (see module docstring)."""
    return to_canonical(e, ctx)


def normalize_with_side_conditions(e: Expr, ctx: Context):
    used: set = set()
    out = to_canonical(e, ctx, used)
    conds = tuple(
        sorted(render(r.side_condition) for r in used if r.side_condition is not None)
    )
    return out, conds


def is_identically_zero(e: Expr, ctx: Context, used=None) -> bool:
    rw = rewrite_assumptions(e, ctx, used)
    ring = Ring(ctx)
    num, den = ring.to_rf(rw)
    if not den:
        raise ZeroDenominatorError("denominator is identically zero")
    num = ring.reduce(num)
    return not num


def equal(e1: Expr, e2: Expr, ctx: Context) -> bool:
    return is_identically_zero(add(e1, neg(e2)), ctx)


def coefficients_in(e: Expr, param: str, ctx: Context) -> list:
    """Coefficients of powers of a formal parameter, constant term first.

    The denominator of the normal form must not involve the parameter.
    """
    rw = rewrite_assumptions(e, ctx)
    ring = Ring(ctx)
    num, den = ring.to_rf(rw)
    if not den:
        raise ZeroDenominatorError("denominator is identically zero")
    idx = ring.index.get(Param(param))
    if idx is None:
        num, den, atoms = _canonical_pair(num, den, ring)
        e0 = _poly_to_expr(num, atoms)
        return [div(e0, _poly_to_expr(den, atoms)) if den != poly.const_poly(1) else e0]
    if any(i == idx for m in den for i, _ in m):
        raise ExprError(f"denominator depends on parameter {param!r}")
    buckets: dict[int, poly.Poly] = {}
    for m, c in num.items():
        dm = dict(m)
        k = dm.pop(idx, 0)
        buckets.setdefault(k, {})[tuple(sorted(dm.items()))] = c
    top = max(buckets, default=0)
    out = []
    for k in range(top + 1):
        nk = buckets.get(k, {})
        nk2, den2, atoms = _canonical_pair(dict(nk), dict(den), ring)
        ek = _poly_to_expr(nk2, atoms)
        if den2 != poly.const_poly(1):
            ek = div(ek, _poly_to_expr(den2, atoms))
        out.append(ek)
    return out


# ---------------------------------------------------------------------------
# exact evaluation and randomized zero testing


class _ExtAlgebra:
    """Finite-dimensional algebra Q[s_1, ..., s_m]/(s_i^{d_i} - r_i)."""

    def __init__(self, symbols: list, powers: list, values: list):
        self.symbols = symbols
        self.powers = powers
        self.values = values
        self.dim = 1
        for d in powers:
            self.dim *= d
        if self.dim > 256:
            raise ExprError("algebraic extension too large for evaluation")

    def const(self, v: Fraction):
        v = Fraction(v)
        return {(): v} if v else {}

    def sym(self, name):
        i = self.symbols.index(name)
        return {((i, 1),): Fraction(1)}

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return out

    def mul(self, a, b):
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = poly.mono_mul(ma, mb)
                c = ca * cb
                # reduce exponents
                mm = []
                for i, e in m:
                    d = self.powers[i]
                    q, r = divmod(e, d)
                    if q:
                        c *= self.values[i] ** q
                    if r:
                        mm.append((i, r))
                m = tuple(mm)
                s = out.get(m, Fraction(0)) + c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return out

    def pow(self, a, k: int):
        result = self.const(1)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def _basis(self):
        basis = [()]
        for i, d in enumerate(self.powers):
            basis = [
                poly.mono_mul(m, ((i, e),)) if e else m
                for m in basis
                for e in range(d)
            ]
        return basis

    def inv(self, a):
        if not a:
            raise PoleError("division by zero during evaluation")
        if list(a.keys()) == [()]:
            return {(): 1 / a[()]}
        basis = self._basis()
        pos = {m: i for i, m in enumerate(basis)}
        n = len(basis)
        mat = [[Fraction(0)] * (n + 1) for _ in range(n)]
        for j, bm in enumerate(basis):
            prod = self.mul(a, {bm: Fraction(1)})
            for m, c in prod.items():
                mat[pos[m]][j] = c
        mat[pos[()]][n] = Fraction(1)
        sol = _solve_exact(mat, n)
        if sol is None:
            raise PoleError("non-invertible algebraic value; resample")
        out = {}
        for j, bm in enumerate(basis):
            if sol[j]:
                out[bm] = sol[j]
        return out


def _solve_exact(mat, n):
    rows = len(mat)
    row = 0
    where = [-1] * n
    for col in range(n):
        piv = None
        for r in range(row, rows):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [v * inv for v in mat[row]]
        for r in range(rows):
            if r != row and mat[r][col]:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        where[col] = row
        row += 1
    for r in range(rows):
        if all(v == 0 for v in mat[r][:n]) and mat[r][n]:
            return None
    return [mat[where[c]][n] if where[c] >= 0 else Fraction(0) for c in range(n)]


def _build_algebra(ctx: Context, env: dict) -> _ExtAlgebra:
    symbols, powers, values = [], [], []
    for a in ctx.algebraics:
        symbols.append(a.name)
        powers.append(a.power)
        values.append(_eval_plain(a.rhs, env))
    return _ExtAlgebra(symbols, powers, values)


def _eval_plain(e: Expr, env: dict) -> Fraction:
    """Evaluate an algebraic-symbol-free expression to a Fraction."""
    if isinstance(e, Rat):
        return e.value
    if isinstance(e, (Var, Param)):
        try:
            return Fraction(env[e.name])
        except KeyError:
            raise ExprError(f"no value supplied for {e.name!r}") from None
    if isinstance(e, Add):
        return sum((_eval_plain(t, env) for t in e.terms), Fraction(0))
    if isinstance(e, Mul):
        out = Fraction(1)
        for f in e.factors:
            out *= _eval_plain(f, env)
        return out
    if isinstance(e, Pow):
        b = _eval_plain(e.base, env)
        if e.exp < 0 and b == 0:
            raise PoleError("pole in rewrite target")
        return b**e.exp
    if isinstance(e, Div):
        d = _eval_plain(e.den, env)
        if d == 0:
            raise PoleError("pole in rewrite target")
        return _eval_plain(e.num, env) / d
    raise ExprError(f"cannot numerically evaluate {e!r}")


def _eval_ext(e: Expr, env: dict, algebra: _ExtAlgebra, jets: dict | None, ctx: Context, inst: dict | None):
    if isinstance(e, Rat):
        return algebra.const(e.value)
    if isinstance(e, (Var, Param)):
        v = env.get(e.name)
        if v is None:
            raise ExprError(f"no value supplied for {e.name!r}")
        return v if isinstance(v, dict) else algebra.const(v)
    if isinstance(e, AlgConst):
        return algebra.sym(e.name)
    if isinstance(e, Func):
        if inst and e.name in inst:
            fn = ctx.function(e.name)
            body = inst[e.name]
            for slot, k in zip(fn.args, e.orders):
                for _ in range(k):
                    body = differentiate(body, slot, ctx)
            inner = dict(env)
            for slot, arg in zip(fn.args, e.args):
                inner[slot] = _eval_ext(arg, env, algebra, jets, ctx, inst)
            return _eval_ext(body, inner, algebra, jets, ctx, None)
        if jets is None:
            raise ExprError(f"no instantiation for opaque function {e.name!r}")
        key = Func(e.name, e.orders, tuple(to_canonical(a, ctx) for a in e.args))
        v = jets.get(key)
        if v is None:
            raise ExprError(f"no sample value for jet {render(e)}")
        return v
    if isinstance(e, Add):
        out = algebra.const(0)
        for t in e.terms:
            out = algebra.add(out, _eval_ext(t, env, algebra, jets, ctx, inst))
        return out
    if isinstance(e, Mul):
        out = algebra.const(1)
        for f in e.factors:
            out = algebra.mul(out, _eval_ext(f, env, algebra, jets, ctx, inst))
        return out
    if isinstance(e, Pow):
        b = _eval_ext(e.base, env, algebra, jets, ctx, inst)
        if e.exp < 0:
            return algebra.pow(algebra.inv(b), -e.exp)
        return algebra.pow(b, e.exp)
    if isinstance(e, Div):
        n = _eval_ext(e.num, env, algebra, jets, ctx, inst)
        d = _eval_ext(e.den, env, algebra, jets, ctx, inst)
        return algebra.mul(n, algebra.inv(d))
    raise TypeError(f"cannot evaluate {e!r}")


def evaluate_at(e: Expr, point: dict, inst: dict | None, ctx: Context) -> Fraction:
    """Exact rational value of ``e`` at a sample point.

    ``point`` assigns Fractions to variables and parameters; ``inst`` supplies
    concrete expressions for opaque functions (jets are differentiated from
    the instantiation).  Raises :class:`PoleError` when a denominator hits 0.
    """
    rw = rewrite_assumptions(e, ctx)
    env = {k: Fraction(v) for k, v in point.items()}
    algebra = _build_algebra(ctx, env)
    out = _eval_ext(rw, env, algebra, None if inst is not None else {}, ctx, inst or {})
    if not out:
        return Fraction(0)
    if set(out) == {()}:
        return out[()]
    raise NotRationalError(
        "value involves algebraic constants and is not rational"
    )


def _collect_sample_atoms(e: Expr, ctx: Context, inst: dict | None):
    names: set = set()
    jets: set = set()
    for leaf in walk_leaves(e):
        if isinstance(leaf, (Var, Param)):
            names.add(leaf.name)
        elif isinstance(leaf, Func) and (not inst or leaf.name not in inst):
            jets.add(Func(leaf.name, leaf.orders, tuple(to_canonical(a, ctx) for a in leaf.args)))
    for a in ctx.algebraics:
        for leaf in walk_leaves(a.rhs):
            if isinstance(leaf, (Var, Param)):
                names.add(leaf.name)
    return sorted(names), sorted(jets, key=lambda f: _atom_sort_key(f, ctx))


_SAMPLE_BOUND = 2**31


def _sample_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-_SAMPLE_BOUND, _SAMPLE_BOUND), rng.randint(1, _SAMPLE_BOUND))


def probabilistic_zero_test(
    e: Expr,
    ctx: Context,
    trials: int = 12,
    seed: int = 0,
    inst: dict | None = None,
) -> bool:
    """Deterministic randomized zero test at rational sample points.

    Opaque jets without an instantiation are treated as independent
    indeterminates, matching the exact semantics after assumption rewriting.
    """
    rw = rewrite_assumptions(e, ctx)
    names, jet_atoms = _collect_sample_atoms(rw, ctx, inst)
    rng = random.Random(seed)
    budget = 40
    for _ in range(max(1, trials)):
        for _attempt in range(budget):
            env = {n: _sample_fraction(rng) for n in names}
            try:
                algebra = _build_algebra(ctx, env)
                jets = {f: algebra.const(_sample_fraction(rng)) for f in jet_atoms}
                value = _eval_ext(rw, env, algebra, jets, ctx, inst or {})
            except PoleError:
                continue
            if value:
                return False
            break
        else:
            raise SampleBudgetError("all sample points hit poles")
    return True


# ---------------------------------------------------------------------------
# zero-decision strategy (exact by default, numeric with --numeric-only)

_ZERO_MODE: ContextVar = ContextVar("hamops_zero_mode", default=None)


@contextmanager
def numeric_zero_mode(seed: int = 0, trials: int = 12):
    token = _ZERO_MODE.set((seed, trials))
    try:
        yield
    finally:
        _ZERO_MODE.reset(token)


def decide_zero(e: Expr, ctx: Context, used=None) -> bool:
    mode = _ZERO_MODE.get()
    if mode is None:
        return is_identically_zero(e, ctx, used)
    seed, trials = mode
    if used is not None:
        rewrite_assumptions(e, ctx, used)
    return probabilistic_zero_test(e, ctx, trials=trials, seed=seed)


def zero_mode_active() -> bool:
    return _ZERO_MODE.get() is not None
