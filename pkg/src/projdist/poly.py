"""Sparse multivariate polynomials over Q with an exact gcd.

Monomials are tuples of (Symbol, exponent) pairs sorted by symbol
precedence; the term order is graded lexicographic (degree first, then
the first symbol in precedence order with a differing exponent, larger
exponent winning).  The gcd is a primitive pseudo-remainder sequence,
recursing on the coefficient ring; every result is verified by exact
division so a wrong gcd can never corrupt a canonical form.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from math import gcd as int_gcd

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# monomials


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        sa, ea = a[i]
        sb, eb = b[j]
        if sa is sb:
            out.append((sa, ea + eb))
            i += 1
            j += 1
        elif sa.order_key < sb.order_key:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_divides(a, b):
    """Does monomial a divide monomial b?"""
    exps = dict(b)
    return all(exps.get(s, 0) >= e for s, e in a)


def mono_div(b, a):
    """b / a, assuming a divides b."""
    exps = dict(a)
    out = []
    for s, e in b:
        d = e - exps.get(s, 0)
        if d < 0:
            raise ArithmeticError("monomial division with negative exponent")
        if d:
            out.append((s, d))
    return tuple(out)


def mono_gcd(a, b):
    exps = dict(b)
    out = []
    for s, e in a:
        m = min(e, exps.get(s, 0))
        if m:
            out.append((s, m))
    return tuple(out)


def mono_deg(a):
    return sum(e for _, e in a)


def mono_cmp(a, b):
    da, db = mono_deg(a), mono_deg(b)
    if da != db:
        return -1 if da < db else 1
    i = j = 0
    while i < len(a) and j < len(b):
        sa, ea = a[i]
        sb, eb = b[j]
        if sa is sb:
            if ea != eb:
                return 1 if ea > eb else -1
            i += 1
            j += 1
        elif sa.order_key < sb.order_key:
            return 1  # a has a more significant symbol with positive exponent
        else:
            return -1
    if i < len(a):
        return 1
    if j < len(b):
        return -1
    return 0


_MONO_KEY = cmp_to_key(mono_cmp)


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = c if isinstance(c, Fraction) else Fraction(c)

    @classmethod
    def const(cls, c):
        p = cls.__new__(cls)
        c = c if isinstance(c, Fraction) else Fraction(c)
        p.terms = {(): c} if c else {}
        return p

    @classmethod
    def symbol(cls, sym):
        p = cls.__new__(cls)
        p.terms = {((sym, 1),): _ONE}
        return p

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self):
        return self.terms.get((), _ZERO)

    def symbols(self):
        out = set()
        for m in self.terms:
            for s, _ in m:
                out.add(s)
        return out

    def degree(self):
        return max((mono_deg(m) for m in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        p = Poly.__new__(Poly)
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def __sub__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, _ZERO) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return Poly.const(0)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                s = out.get(m, _ZERO) + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def mul_term(self, mono, coeff):
        p = Poly.__new__(Poly)
        p.terms = {mono_mul(m, mono): c * coeff for m, c in self.terms.items()} if coeff else {}
        return p

    def scale(self, coeff):
        return self.mul_term((), coeff if isinstance(coeff, Fraction) else Fraction(coeff))

    def __pow__(self, n):
        if n < 0:
            raise ArithmeticError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def leading_monomial(self):
        if not self.terms:
            raise ArithmeticError("leading monomial of zero")
        return max(self.terms, key=_MONO_KEY)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _MONO_KEY(t[0]), reverse=True)

    def evaluate(self, values):
        total = _ZERO
        for m, c in self.terms.items():
            v = c
            for s, e in m:
                v *= values[s] ** e
            total += v
        return total

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"{s.name}^{e}" if e > 1 else s.name for s, e in m)
            bits.append(f"{c}*{mono}" if mono else str(c))
        return "Poly(" + " + ".join(bits) + ")"


def common_monomial(p):
    it = iter(p.terms)
    try:
        g = next(it)
    except StopIteration:
        return ()
    for m in it:
        if not g:
            return ()
        g = mono_gcd(g, m)
    return g


def normalize_scale(p):
    """Scale to integer coefficients with unit content and positive lead.

    Returns (normalized poly, rational factor f) with p == f * normalized.
    """
    if p.is_zero():
        return p, _ONE
    den_lcm = 1
    for c in p.terms.values():
        den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
    num_gcd = 0
    for c in p.terms.values():
        num_gcd = int_gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
    scale = Fraction(den_lcm, num_gcd)
    if p.leading_coeff() < 0:
        scale = -scale
    return p.scale(scale), 1 / scale


def normalized(p):
    return normalize_scale(p)[0]


# ---------------------------------------------------------------------------
# exact division and gcd


def divmod_exact(a, b):
    """Return a / b if b divides a exactly, else None."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero():
        return Poly.const(0)
    if b.is_const():
        return a.scale(1 / b.const_value())
    quo = {}
    r = a
    lm_b = b.leading_monomial()
    lc_b = b.terms[lm_b]
    while not r.is_zero():
        lm_r = r.leading_monomial()
        if not mono_divides(lm_b, lm_r):
            return None
        m = mono_div(lm_r, lm_b)
        c = r.terms[lm_r] / lc_b
        quo[m] = quo.get(m, _ZERO) + c
        r = r - b.mul_term(m, c)
    return Poly(quo)


def _udeg(p, v):
    d = 0
    for m in p.terms:
        for s, e in m:
            if s is v:
                if e > d:
                    d = e
                break
    return d


def uni_coeffs(p, v):
    """View p as a univariate polynomial in v: degree -> coefficient Poly."""
    buckets = {}
    for m, c in p.terms.items():
        d = 0
        rest = []
        for s, e in m:
            if s is v:
                d = e
            else:
                rest.append((s, e))
        terms = buckets.setdefault(d, {})
        key = tuple(rest)
        s0 = terms.get(key, _ZERO) + c
        if s0:
            terms[key] = s0
        else:
            del terms[key]
    out = {}
    for d, terms in buckets.items():
        if terms:
            coeff = Poly.__new__(Poly)
            coeff.terms = terms
            out[d] = coeff
    return out


def _from_uni(coeffs, v):
    total = Poly.const(0)
    for d, c in coeffs.items():
        total = total + (c.mul_term(((v, d),), _ONE) if d else c)
    return total


def _prem(a, b, v):
    """Pseudo-remainder of a by b with respect to v."""
    db = _udeg(b, v)
    lc_b = uni_coeffs(b, v)[db]
    r = a
    dr = _udeg(r, v)
    while not r.is_zero() and dr >= db:
        lc_r = uni_coeffs(r, v).get(dr)
        if lc_r is None:
            break
        r = lc_b * r - lc_r.mul_term(((v, dr - db),) if dr > db else (), _ONE) * b
        new_dr = _udeg(r, v)
        if not r.is_zero() and new_dr >= dr:
            raise ArithmeticError("pseudo-division failed to reduce degree")
        dr = new_dr
    return r


def _content_wrt(p, v):
    g = Poly.const(0)
    for c in uni_coeffs(p, v).values():
        g = poly_gcd(g, c)
        if g.is_const() and not g.is_zero():
            break
    return g


def _uni_fraction_gcd_degree(ca, cb):
    """Degree of gcd of two univariate coefficient lists over Q."""
    def deg(u):
        d = len(u) - 1
        while d >= 0 and u[d] == 0:
            d -= 1
        return d

    da, db = deg(ca), deg(cb)
    if da < 0 or db < 0:
        return max(da, db)
    a, b = list(ca[: da + 1]), list(cb[: db + 1])
    if deg(a) < deg(b):
        a, b = b, a
    while True:
        dbb = deg(b)
        if dbb < 0:
            return deg(a)
        daa = deg(a)
        while daa >= dbb:
            f = a[daa] / b[dbb]
            for i in range(dbb + 1):
                a[daa - dbb + i] -= f * b[i]
            a[daa] = _ZERO
            while daa >= 0 and a[daa] == 0:
                daa -= 1
            if daa < 0:
                break
        a, b = b, a[: daa + 1] if daa >= 0 else []


def _evaluate_uni(p, v, point):
    """Coefficient list of p in v after substituting the other symbols."""
    coeffs = [_ZERO] * (_udeg(p, v) + 1)
    for m, c in p.terms.items():
        d = 0
        val = c
        for s, e in m:
            if s is v:
                d = e
            else:
                val *= point[s] ** e
        coeffs[d] += val
    return coeffs


def _gcd_degree_bound(a, b, v, salt):
    """A proven upper bound for deg_v(gcd(a, b)), or None if unlucky.

    Evaluating all other symbols at a point where the leading v-coefficient
    of a survives cannot lower the v-degree of any divisor of a.
    """
    import random

    other = (a.symbols() | b.symbols()) - {v}
    lc = uni_coeffs(a, v)[_udeg(a, v)]
    rng = random.Random(0xD1CE + salt)
    for _ in range(4):
        point = {s: Fraction(rng.randrange(-997, 997)) for s in other}
        if lc.evaluate(point) != 0:
            ua = _evaluate_uni(a, v, point)
            ub = _evaluate_uni(b, v, point)
            return _uni_fraction_gcd_degree(ua, ub)
    return None


def _gcd_with_var(a, b, v):
    ca = _content_wrt(a, v)
    cb = _content_wrt(b, v)
    c = poly_gcd(ca, cb)
    a = divmod_exact(a, ca)
    b = divmod_exact(b, cb)
    if _udeg(a, v) < _udeg(b, v):
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b, v)
        if r.is_zero():
            a = b
            break
        a, b = b, divmod_exact(r, _content_wrt(r, v))
    return c * a


def poly_gcd(a, b):
    """A gcd of a and b, normalized (integer content 1, positive lead)."""
    if a.is_zero():
        return normalized(b) if not b.is_zero() else Poly.const(0)
    if b.is_zero():
        return normalized(a)
    ma, mb = common_monomial(a), common_monomial(b)
    mg = mono_gcd(ma, mb)
    a1 = Poly({mono_div(m, ma): c for m, c in a.terms.items()}) if ma else a
    b1 = Poly({mono_div(m, mb): c for m, c in b.terms.items()}) if mb else b
    g_mono = Poly({mg: _ONE})
    if a1.is_const() or b1.is_const():
        return normalized(g_mono)
    common = a1.symbols() & b1.symbols()
    if not common:
        return normalized(g_mono)
    na, nb = normalized(a1), normalized(b1)
    if na == nb:
        g = g_mono * na
    elif divmod_exact(a1, b1) is not None:
        g = g_mono * nb
    elif divmod_exact(b1, a1) is not None:
        g = g_mono * na
    else:
        candidates = sorted(common, key=lambda s: (min(_udeg(a1, s), _udeg(b1, s)), s.order_key))
        main_var = None
        # evaluation bounds: if no variable can occur in the gcd it is trivial
        nontrivial = False
        for salt, v in enumerate(candidates):
            bound = _gcd_degree_bound(a1, b1, v, salt)
            if bound is None:
                nontrivial = True
                if main_var is None:
                    main_var = v
            elif bound > 0:
                nontrivial = True
                main_var = v
                break
        if not nontrivial:
            return normalized(g_mono)
        g = g_mono * _gcd_with_var(a1, b1, main_var)
    g = normalized(g)
    if divmod_exact(a, g) is None or divmod_exact(b, g) is None:
        raise ArithmeticError("internal gcd error: candidate does not divide inputs")
    return g
