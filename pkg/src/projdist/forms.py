"""Vector fields, differential forms, distributions, and derived flags.

Forms of degree two are stored on increasing coordinate index pairs
(dx^dy, dx^dz, ...); antisymmetry is implicit.  Degree is capped at two:
no computation here needs more, and higher degrees raise instead of
silently vanishing.

A growth vector carries a genericity certificate: expressions whose
nonvanishing at a point guarantees that the generic ranks hold there.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import PreconditionError
from .expr import Expr, differentiate, to_text
from .linalg import SpanEchelon, bareiss_rank, normalize_vector, nullspace, prune_certificate


@dataclass(frozen=True)
class Chart:
    name: str
    coords: tuple

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise PreconditionError("chart coordinates must be distinct")

    @property
    def dim(self):
        return len(self.coords)

    def index(self, sym):
        return self.coords.index(sym)

    def __repr__(self):
        return f"Chart({self.name}: {', '.join(s.name for s in self.coords)})"


class VectorField:
    __slots__ = ("chart", "comps")

    def __init__(self, chart, comps):
        comps = tuple(comps)
        if len(comps) != chart.dim:
            raise PreconditionError("component count does not match chart dimension")
        self.chart = chart
        self.comps = comps

    @classmethod
    def coordinate(cls, chart, sym):
        return cls(chart, [Expr.const(1 if c is sym else 0) for c in chart.coords])

    def apply(self, f):
        """Directional derivative of a scalar Expr."""
        out = Expr.const(0)
        for c, coord in zip(self.comps, self.chart.coords):
            if not c.is_zero():
                out = out + c * differentiate(f, coord)
        return out

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other):
        _same_chart(self, other)
        return VectorField(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        _same_chart(self, other)
        return VectorField(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.comps])

    def scaled(self, f):
        return VectorField(self.chart, [f * a for a in self.comps])

    def __eq__(self, other):
        return (
            isinstance(other, VectorField)
            and self.chart == other.chart
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.chart, self.comps))

    def __str__(self):
        bits = []
        for c, coord in zip(self.comps, self.chart.coords):
            if c.is_zero():
                continue
            txt = to_text(c)
            if txt == "1":
                bits.append(f"d/d{coord.name}")
            else:
                if ("+" in txt[1:]) or ("-" in txt[1:]) or "/" in txt:
                    txt = f"({txt})"
                bits.append(f"{txt}*d/d{coord.name}")
        return " + ".join(bits) if bits else "0"

    def __repr__(self):
        return f"VectorField({self})"


def _same_chart(a, b):
    if a.chart != b.chart:
        raise PreconditionError("chart mismatch")


class Form:
    """A differential form of degree 0, 1, or 2 with Expr coefficients."""

    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart, degree, comps):
        if degree not in (0, 1, 2):
            raise PreconditionError("form degree must be 0, 1, or 2")
        if degree > chart.dim:
            raise PreconditionError("form degree exceeds chart dimension")
        self.chart = chart
        self.degree = degree
        if degree == 0:
            comps = (comps,) if isinstance(comps, Expr) else tuple(comps)
            if len(comps) != 1:
                raise PreconditionError("degree-0 form takes a single coefficient")
        else:
            comps = tuple(comps)
            expected = chart.dim if degree == 1 else chart.dim * (chart.dim - 1) // 2
            if len(comps) != expected:
                raise PreconditionError("coefficient count does not match degree")
        self.comps = comps

    @classmethod
    def function(cls, chart, f):
        return cls(chart, 0, (f,))

    @classmethod
    def d_coord(cls, chart, sym):
        return cls(chart, 1, [Expr.const(1 if c is sym else 0) for c in chart.coords])

    @classmethod
    def one_form(cls, chart, coeffs):
        return cls(chart, 1, coeffs)

    @staticmethod
    def pair_index(chart):
        return list(itertools.combinations(range(chart.dim), 2))

    def coeff(self, *idx):
        if self.degree == 0:
            return self.comps[0]
        if self.degree == 1:
            return self.comps[idx[0]]
        i, j = idx
        if i == j:
            return Expr.const(0)
        sign = 1
        if i > j:
            i, j = j, i
            sign = -1
        pos = Form.pair_index(self.chart).index((i, j))
        return self.comps[pos] if sign == 1 else -self.comps[pos]

    def __add__(self, other):
        _same_chart(self, other)
        if self.degree != other.degree:
            raise PreconditionError("cannot add forms of different degree")
        return Form(self.chart, self.degree, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        _same_chart(self, other)
        if self.degree != other.degree:
            raise PreconditionError("cannot subtract forms of different degree")
        return Form(self.chart, self.degree, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return Form(self.chart, self.degree, [-a for a in self.comps])

    def scaled(self, f):
        return Form(self.chart, self.degree, [f * a for a in self.comps])

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other):
        return (
            isinstance(other, Form)
            and self.chart == other.chart
            and self.degree == other.degree
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.chart, self.degree, self.comps))

    def pair(self, *fields):
        """Exact pairing with one field (degree 1) or two fields (degree 2)."""
        if self.degree == 1:
            (v,) = fields
            _same_chart(self, v)
            out = Expr.const(0)
            for c, vc in zip(self.comps, v.comps):
                out = out + c * vc
            return out
        if self.degree == 2:
            v, w = fields
            _same_chart(self, v)
            _same_chart(self, w)
            out = Expr.const(0)
            for (i, j), c in zip(Form.pair_index(self.chart), self.comps):
                out = out + c * (v.comps[i] * w.comps[j] - v.comps[j] * w.comps[i])
            return out
        raise PreconditionError("pairing is defined for forms of degree 1 and 2")

    def __str__(self):
        names = [s.name for s in self.chart.coords]
        if self.degree == 0:
            return to_text(self.comps[0])
        if self.degree == 1:
            labels = [f"d{n}" for n in names]
        else:
            labels = [f"d{names[i]}^d{names[j]}" for i, j in Form.pair_index(self.chart)]
        bits = []
        for c, lab in zip(self.comps, labels):
            if c.is_zero():
                continue
            txt = to_text(c)
            if txt == "1":
                bits.append(lab)
            else:
                if ("+" in txt[1:]) or ("-" in txt[1:]) or "/" in txt:
                    txt = f"({txt})"
                bits.append(f"{txt}*{lab}")
        return " + ".join(bits) if bits else "0"

    def __repr__(self):
        return f"Form({self})"


def lie_bracket(v, w):
    """[v, w], components v(w^i) - w(v^i)."""
    _same_chart(v, w)
    return VectorField(v.chart, [v.apply(wc) - w.apply(vc) for vc, wc in zip(v.comps, w.comps)])


def exterior_derivative(omega):
    chart = omega.chart
    if omega.degree == 0:
        f = omega.comps[0]
        return Form(chart, 1, [differentiate(f, c) for c in chart.coords])
    if omega.degree == 1:
        if chart.dim < 2:
            raise PreconditionError("no degree-2 forms on this chart")
        comps = []
        for i, j in Form.pair_index(chart):
            comps.append(
                differentiate(omega.comps[j], chart.coords[i])
                - differentiate(omega.comps[i], chart.coords[j])
            )
        return Form(chart, 2, comps)
    raise PreconditionError("exterior derivative is capped at degree-1 input")


def wedge(a, b):
    _same_chart(a, b)
    total = a.degree + b.degree
    if total > 2:
        raise PreconditionError("wedge degree overflow (forms are capped at degree 2)")
    if a.degree == 0:
        return b.scaled(a.comps[0])
    if b.degree == 0:
        return a.scaled(b.comps[0])
    chart = a.chart
    comps = []
    for i, j in Form.pair_index(chart):
        comps.append(a.comps[i] * b.comps[j] - a.comps[j] * b.comps[i])
    return Form(chart, 2, comps)


@dataclass
class Distribution:
    chart: Chart
    fields: list

    def __post_init__(self):
        self.fields = list(self.fields)
        for f in self.fields:
            if f.chart != self.chart:
                raise PreconditionError("chart mismatch in distribution")

    @property
    def is_empty(self):
        return not self.fields

    def matrix(self):
        return [list(f.comps) for f in self.fields]

    def __repr__(self):
        return f"Distribution({self.chart.name}; {len(self.fields)} fields)"


@dataclass(frozen=True)
class GrowthVector:
    ranks: tuple
    certificate: tuple = ()

    def __str__(self):
        return "(" + ",".join(str(r) for r in self.ranks) + ")"


def generic_rank(fields):
    """Rank over the fraction field with a pointwise genericity certificate."""
    fields = list(fields)
    if not fields:
        raise PreconditionError("generic_rank of an empty family")
    chart = fields[0].chart
    for f in fields:
        if f.chart != chart:
            raise PreconditionError("chart mismatch")
    return bareiss_rank([list(f.comps) for f in fields])


def derived_flag(dist, max_steps=None):
    """Iterate D -> D + [D, D] to stabilization.

    Returns (flag, growth) where flag is the list of distributions and
    growth records the strictly increasing rank sequence together with the
    merged genericity certificate.  At each step the accumulated fields
    are reduced to the fraction-free pivot rows, which both dedups the
    bracket tower and keeps every rank claim certified.
    """
    if dist.is_empty:
        raise PreconditionError("derived flag of an empty distribution")
    if max_steps is not None and max_steps < 1:
        raise PreconditionError("max_steps must be at least 1")
    from .linalg import bareiss_rank_extended

    chart = dist.chart
    certificate = []
    rank, cert0, pivots = bareiss_rank_extended([list(f.comps) for f in dist.fields])
    certificate.extend(cert0)
    stored = [dist.fields[i] for i in pivots]
    ranks = [rank]
    flag = [Distribution(chart, list(stored))]
    bracketed = set()
    steps = 0
    while ranks[-1] < chart.dim:
        if max_steps is not None and steps >= max_steps:
            break
        steps += 1
        candidates = []
        for i in range(len(stored)):
            for j in range(i + 1, len(stored)):
                key = (id(stored[i]), id(stored[j]))
                if key in bracketed:
                    continue
                bracketed.add(key)
                br = lie_bracket(stored[i], stored[j])
                if not br.is_zero():
                    candidates.append(br)
        if not candidates:
            break
        pool = stored + candidates
        new_rank, cert, pivots = bareiss_rank_extended([list(f.comps) for f in pool])
        if new_rank == ranks[-1]:
            break
        certificate.extend(cert)
        stored = [pool[i] for i in pivots]
        ranks.append(new_rank)
        flag.append(Distribution(chart, list(stored)))
    growth = GrowthVector(tuple(ranks), tuple(prune_certificate(certificate)))
    return flag, growth


def cauchy_characteristics(dist):
    """The sub-distribution of fields V in D with [V, D] inside D.

    The condition is function-linear in the coefficients of V because
    [fV, W] = f[V, W] - W(f)V and the second summand already lies in D.
    """
    if dist.is_empty:
        return Distribution(dist.chart, [])
    chart = dist.chart
    ech = SpanEchelon(chart.dim)
    basis = []
    for f in dist.fields:
        if ech.add(list(f.comps)):
            basis.append(f)
    r = len(basis)
    residues = {}  # (i, j) -> class of [X_i, X_j] modulo D
    for j in range(r):
        for i in range(r):
            if i != j:
                residues[i, j] = ech.residual(list(lie_bracket(basis[i], basis[j]).comps))
    # one equation per (j, coordinate); unknowns are the f^i
    conditions = []
    for j in range(r):
        for coord in range(chart.dim):
            row = [
                residues[i, j][coord] if i != j else Expr.const(0) for i in range(r)
            ]
            if any(not e.is_zero() for e in row):
                conditions.append(row)
    if not conditions:
        kernel = [[Expr.const(1 if i == k else 0) for i in range(r)] for k in range(r)]
    else:
        kernel = nullspace(conditions)
    out = []
    for vec in kernel:
        v = VectorField(chart, [Expr.const(0)] * chart.dim)
        for f_i, base in zip(vec, basis):
            v = v + base.scaled(f_i)
        out.append(VectorField(chart, normalize_vector(list(v.comps))))
    return Distribution(chart, out)


def annihilator(dist):
    """Independent 1-forms pairing to zero with every spanning field."""
    if dist.is_empty:
        raise PreconditionError("annihilator of an empty distribution")
    chart = dist.chart
    kernel = nullspace(dist.matrix())
    forms = [Form(chart, 1, vec) for vec in kernel]
    for omega in forms:
        for f in dist.fields:
            if not omega.pair(f).is_zero():
                raise PreconditionError("annihilator verification failed")
    return forms


def kernel_distribution(forms):
    """Fields annihilated by all the given 1-forms (the dual construction)."""
    if not forms:
        raise PreconditionError("kernel of an empty form system")
    chart = forms[0].chart
    for omega in forms:
        if omega.degree != 1:
            raise PreconditionError("kernel_distribution expects 1-forms")
        if omega.chart != chart:
            raise PreconditionError("chart mismatch")
    vectors = nullspace([list(omega.comps) for omega in forms])
    return Distribution(chart, [VectorField(chart, v) for v in vectors])


def derived_codistribution(forms):
    """Combinations theta = g^i omega_i with d(theta) = 0 modulo the system.

    A two-form vanishes modulo the algebraic ideal of the omega_i exactly
    when it vanishes on the kernel distribution, so the condition is the
    function-linear system g^i d(omega_i)(V_a, V_b) = 0.
    """
    forms = list(forms)
    dual = kernel_distribution(forms)
    dforms = [exterior_derivative(omega) for omega in forms]
    conditions = []
    fields = dual.fields
    for a in range(len(fields)):
        for b in range(a + 1, len(fields)):
            row = [d.pair(fields[a], fields[b]) for d in dforms]
            if any(not e.is_zero() for e in row):
                conditions.append(row)
    if not conditions:
        coeff_basis = [
            [Expr.const(1 if i == k else 0) for i in range(len(forms))] for k in range(len(forms))
        ]
    else:
        coeff_basis = nullspace(conditions)
    out = []
    for g in coeff_basis:
        theta = Form(forms[0].chart, 1, [Expr.const(0)] * forms[0].chart.dim)
        for gi, omega in zip(g, forms):
            theta = theta + omega.scaled(gi)
        theta = Form(theta.chart, 1, normalize_vector(list(theta.comps)))
        dtheta = exterior_derivative(theta)
        for a in range(len(fields)):
            for b in range(a + 1, len(fields)):
                if not dtheta.pair(fields[a], fields[b]).is_zero():
                    raise PreconditionError("derived codistribution verification failed")
        out.append(theta)
    return out


def span_rank(forms_or_fields):
    """Generic rank of the span of 1-forms or fields (coefficient matrix rank)."""
    rows = []
    for item in forms_or_fields:
        rows.append(list(item.comps))
    rank, _ = bareiss_rank(rows)
    return rank


def same_span(items_a, items_b):
    """Do two families of forms (or fields) span the same space generically?"""
    ra, _ = bareiss_rank([list(i.comps) for i in items_a])
    rb, _ = bareiss_rank([list(i.comps) for i in items_b])
    rc, _ = bareiss_rank([list(i.comps) for i in list(items_a) + list(items_b)])
    return ra == rb == rc
