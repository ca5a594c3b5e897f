"""Exact rational expressions: canonical fractions of polynomials.

An Expr is a reduced fraction num/den of integer-coefficient polynomials,
jointly primitive, with positive leading denominator coefficient.  The
representation is unique, so structural equality decides mathematical
equality and ``is_zero`` is exact.

Differentiation knows about jets: the derivative of a jet atom in one of
its function's variables is the next jet atom; fiber coordinates and
parameters differentiate to zero.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .errors import EvaluationError, ExprParseError
from .poly import Poly, divmod_exact, poly_gcd
from .symbols import KIND_JET, KIND_PARAM, Symbol

_ONE_POLY = Poly.const(1)


def _joint_normalize(num, den):
    """Scale num/den together to integer, jointly primitive, positive-lead den."""
    den_lcm = 1
    for p in (num, den):
        for c in p.terms.values():
            den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
    num_gcd = 0
    for p in (num, den):
        for c in p.terms.values():
            num_gcd = int_gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
    scale = Fraction(den_lcm, num_gcd)
    if den.leading_coeff() < 0:
        scale = -scale
    return num.scale(scale), den.scale(scale)


class Expr:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if den is None:
            den = _ONE_POLY
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = _ONE_POLY
            self._hash = None
            return
        if not den.is_const() and not num.is_const():
            g = poly_gcd(num, den)
            if not g.is_const():
                num = divmod_exact(num, g)
                den = divmod_exact(den, g)
        num, den = _joint_normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, value):
        return cls(Poly.const(Fraction(value)))

    @classmethod
    def symbol(cls, sym):
        return cls(Poly.symbol(sym))

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        if not self.is_const():
            raise EvaluationError("expression is not constant")
        return self.num.const_value() / self.den.const_value()

    def is_polynomial(self):
        return self.den == _ONE_POLY

    def symbols(self):
        return self.num.symbols() | self.den.symbols()

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(value):
        if isinstance(value, Expr):
            return value
        if isinstance(value, (int, Fraction)):
            return Expr.const(value)
        return NotImplemented

    def __add__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return Expr(self.num + other.num, self.den)
        return Expr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        e = Expr.__new__(Expr)
        e.num = -self.num
        e.den = self.den
        e._hash = None
        return e

    def __sub__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Expr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero expression")
        return Expr(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = Expr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n == 0:
            return Expr.const(1)
        num, den = (self.num, self.den) if n > 0 else (self.den, self.num)
        if n < 0 and num.is_zero():
            raise ZeroDivisionError("negative power of zero")
        k = abs(n)
        e = Expr.__new__(Expr)
        e.num, e.den = _joint_normalize(num**k, den**k)
        e._hash = None
        return e

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Expr({to_text(self)})"

    # -- calculus ------------------------------------------------------------

    def diff(self, v):
        return differentiate(self, v)

    def eval(self, point):
        return eval_at(self, point)


def _symbol_derivative(sym, v):
    """d(sym)/d(v) as a Poly, or None when it is zero."""
    if sym is v:
        return _ONE_POLY
    if sym.kind == KIND_JET:
        func = sym.func
        j, k = sym.jet_orders
        if func.var_x is v:
            return Poly.symbol(func.table.jet(func, j + 1, k))
        if func.var_y is v:
            return Poly.symbol(func.table.jet(func, j, k + 1))
    return None


def poly_diff(p, v):
    out = Poly.const(0)
    for m, c in p.terms.items():
        for idx, (s, e) in enumerate(m):
            ds = _symbol_derivative(s, v)
            if ds is None:
                continue
            rest = list(m)
            if e == 1:
                del rest[idx]
            else:
                rest[idx] = (s, e - 1)
            out = out + ds.mul_term(tuple(rest), c * e)
    return out


def differentiate(e, v):
    """Partial derivative of e in the coordinate v (jets promote)."""
    if not isinstance(v, Symbol) or not v.is_coordinate:
        raise EvaluationError(f"cannot differentiate in {getattr(v, 'name', v)!r}: not a coordinate")
    dn = poly_diff(e.num, v)
    if e.den == _ONE_POLY:
        return Expr(dn)
    dd = poly_diff(e.den, v)
    return Expr(dn * e.den - e.num * dd, e.den * e.den)


def eval_at(e, point):
    """Exact rational value of e at a symbol assignment."""
    values = {}
    for sym in e.symbols():
        if sym not in point:
            raise EvaluationError(f"no value assigned to {sym.name!r}")
        values[sym] = Fraction(point[sym])
    den = e.den.evaluate(values)
    if den == 0:
        raise EvaluationError("denominator vanishes at the evaluation point")
    return e.num.evaluate(values) / den


ZERO = Expr(Poly.const(0))
ONE = Expr(Poly.const(1))


# ---------------------------------------------------------------------------
# printing


def _frac_text(c):
    return str(c)


def _mono_text(m):
    return "*".join(f"{s.name}^{e}" if e > 1 else s.name for s, e in m)


def poly_text(p):
    if p.is_zero():
        return "0"
    pieces = []
    for m, c in p.sorted_terms():
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if not m:
            body = _frac_text(a)
        elif a == 1:
            body = _mono_text(m)
        else:
            body = f"{_frac_text(a)}*{_mono_text(m)}"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = first_body if first_sign == "+" else "-" + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _den_text(den):
    if den.is_const():
        return _frac_text(den.const_value())
    if len(den.terms) == 1:
        (m, c), = den.terms.items()
        if c == 1 and len(m) == 1:
            return _mono_text(m)
    return "(" + poly_text(den) + ")"


def to_text(e):
    """Canonical printed form; parsing it back yields the same Expr."""
    if e.den == _ONE_POLY:
        return poly_text(e.num)
    num_txt = poly_text(e.num)
    if len(e.num.terms) > 1:
        num_txt = "(" + num_txt + ")"
    return num_txt + "/" + _den_text(e.den)


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    """Recursive descent for the expression grammar.

    expr   := '-'? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' '-'? integer)?
    base   := integer | identifier | '(' expr ')'
    """

    def __init__(self, src, table):
        self.src = src
        self.table = table
        self.pos = 0

    def error(self, msg):
        raise ExprParseError(f"{msg} at position {self.pos} in {self.src!r}")

    def skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def integer(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected integer")
        return int(self.src[start:self.pos])

    def identifier(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isalnum() or self.src[self.pos] == "_"):
            self.pos += 1
        return self.src[start:self.pos]

    def expr(self):
        negate = self.take("-")
        value = self.term()
        if negate:
            value = -value
        while True:
            if self.take("+"):
                value = value + self.term()
            elif self.take("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            if self.take("*"):
                value = value * self.factor()
            elif self.take("/"):
                divisor = self.factor()
                if divisor.is_zero():
                    self.error("division by zero")
                value = value / divisor
            else:
                return value

    def factor(self):
        value = self.base()
        if self.take("^"):
            sign = -1 if self.take("-") else 1
            ch = self.peek()
            if not ch.isdigit():
                self.error("non-integer exponent")
            value = value ** (sign * self.integer())
        return value

    def base(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if not self.take(")"):
                self.error("expected ')'")
            return value
        if ch.isdigit():
            return Expr.const(self.integer())
        if ch.isalpha():
            name = self.identifier()
            sym = self.table.get(name)
            if sym is None:
                self.error(f"undeclared identifier {name!r}")
            return Expr.symbol(sym)
        self.error("expected a rational, identifier or '('")

    def parse(self):
        value = self.expr()
        self.skip_ws()
        if self.pos != len(self.src):
            self.error("trailing input")
        return value


def parse(src, table):
    """Parse expression text over the declared symbols of table."""
    return _Parser(src, table).parse()
