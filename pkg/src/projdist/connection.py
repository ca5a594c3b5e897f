"""Linear connections on rank-k bundles over a 2-coordinate base.

Index conventions are calibrated once and frozen by tests:

* the connection matrix ``omega`` is stored row-by-differentiated-frame-
  element, so the horizontal lift is
  ``X_i = d/dx^i + sum_{a,b} e_a * omega[b][a](d/dx^i) * d/de_b``;
* the curvature matrix ``R`` is indexed so that the vertical bracket of
  the two horizontal lifts reads off as
  ``[X_1, X_2] = sum_{a,b} e_a R[a][b] d/de_b``,
  which makes ``R`` the transpose of ``d(omega) - omega ^ omega`` in the
  storage convention above;
* covariant derivatives ``D_k`` of the curvature are defined by the same
  readoff applied to ``[X_k, [X_1, X_2]]``, and satisfy the matrix
  identity ``D_k = d_k R + [A_k^T, R]`` with ``A_k`` the ``dx^k``
  coefficient of the stored matrix (used as a cross-check);
* ``gauge_transform`` takes the matrix ``g`` acting on the fiber
  coordinates, so the curvature transforms by ``R -> g R g^-1`` and the
  stored matrix by the usual affine rule applied to ``(g^T)^-1``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError, PreconditionError
from .expr import Expr, differentiate
from .forms import Chart, Distribution, Form, VectorField, derived_flag, lie_bracket
from .linalg import determinant, invert_matrix, normalize_vector

GROUP_GENERAL_LINEAR = "general-linear"
GROUP_PARABOLIC = "parabolic"
GROUP_SCALE_AND_BOOST = "scale-and-boost"


class Connection:
    """A rank-k connection: k x k matrix of 1-forms over a 2-coordinate base."""

    def __init__(self, base_chart, fiber, omega, group=None, total_chart=None):
        if base_chart.dim != 2:
            raise PreconditionError("connections are defined over 2-coordinate bases")
        fiber = tuple(fiber)
        k = len(fiber)
        if len(omega) != k or any(len(row) != k for row in omega):
            raise PreconditionError("connection matrix must be k x k")
        fiber_set = set(fiber)
        for row in omega:
            for entry in row:
                if entry.chart != base_chart or entry.degree != 1:
                    raise PreconditionError("connection entries must be 1-forms on the base chart")
                for sym in set().union(*(c.symbols() for c in entry.comps)) if entry.comps else set():
                    if sym in fiber_set:
                        raise PreconditionError("connection entries must not involve fiber coordinates")
        self.base_chart = base_chart
        self.fiber = fiber
        self.omega = [list(row) for row in omega]
        self.group = group
        self.rank = k
        if total_chart is None:
            total_chart = Chart(base_chart.name + "^tot", base_chart.coords + fiber)
        elif total_chart.coords != base_chart.coords + fiber:
            raise PreconditionError("total chart must list base coordinates then fiber coordinates")
        self.total_chart = total_chart

    @classmethod
    def from_coeffs(cls, base_chart, fiber, coeffs, group=None, total_chart=None):
        """Build from a k x k matrix of (dx-coefficient, dy-coefficient) pairs."""
        omega = [
            [Form(base_chart, 1, [a, b]) for a, b in row]
            for row in coeffs
        ]
        return cls(base_chart, fiber, omega, group=group, total_chart=total_chart)

    @classmethod
    def zero(cls, base_chart, fiber, group=None, total_chart=None):
        k = len(fiber)
        z = Expr.const(0)
        return cls.from_coeffs(
            base_chart, fiber, [[(z, z)] * k for _ in range(k)], group=group, total_chart=total_chart
        )

    def coeff_matrix(self, i):
        """A_i: the dx^i coefficient matrix of the stored connection matrix."""
        return [[entry.comps[i] for entry in row] for row in self.omega]

    def connection_forms(self):
        """The 1-forms de_b - e_a Gamma^a_{i b} dx^i on the total space."""
        chart = self.total_chart
        n = self.base_chart.dim
        out = []
        for b in range(self.rank):
            comps = [Expr.const(0)] * chart.dim
            comps[n + b] = Expr.const(1)
            for i in range(n):
                acc = Expr.const(0)
                for a in range(self.rank):
                    gamma = self.omega[b][a].comps[i]
                    if not gamma.is_zero():
                        acc = acc + Expr.symbol(self.fiber[a]) * gamma
                comps[i] = -acc
            out.append(Form(chart, 1, comps))
        return out

    def __repr__(self):
        return f"Connection(rank {self.rank} over {self.base_chart.name})"


def horizontal_distribution(conn):
    """Span of the horizontal lifts of the base coordinate directions."""
    chart = conn.total_chart
    n = conn.base_chart.dim
    fields = []
    for i in range(n):
        comps = [Expr.const(0)] * chart.dim
        comps[i] = Expr.const(1)
        for b in range(conn.rank):
            acc = Expr.const(0)
            for a in range(conn.rank):
                gamma = conn.omega[b][a].comps[i]
                if not gamma.is_zero():
                    acc = acc + Expr.symbol(conn.fiber[a]) * gamma
            comps[n + b] = acc
        fields.append(VectorField(chart, comps))
    return Distribution(chart, fields)


def _mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_mul(a, b):
    k = len(a)
    return [
        [sum((a[i][t] * b[t][j] for t in range(k)), Expr.const(0)) for j in range(len(b[0]))]
        for i in range(k)
    ]


def _mat_transpose(a):
    return [list(col) for col in zip(*a)]


def _mat_diff(a, coord):
    return [[differentiate(x, coord) for x in row] for row in a]


def _mat_is_zero(a):
    return all(x.is_zero() for row in a for x in row)


@dataclass
class Curvature:
    """dx^dy coefficients, indexed by the vertical-bracket readoff."""

    entries: list

    @property
    def rank(self):
        return len(self.entries)

    def is_zero(self):
        return _mat_is_zero(self.entries)

    def flat(self):
        return [x for row in self.entries for x in row]

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return isinstance(other, Curvature) and self.entries == other.entries


def curvature(conn):
    """Curvature of the connection in the vertical-bracket index convention."""
    x, y = conn.base_chart.coords
    a1 = conn.coeff_matrix(0)
    a2 = conn.coeff_matrix(1)
    f = _mat_sub(_mat_sub(_mat_diff(a2, x), _mat_diff(a1, y)), _mat_sub(_mat_mul(a1, a2), _mat_mul(a2, a1)))
    return Curvature(_mat_transpose(f))


def fiber_linear_matrix(field, base_dim, fiber):
    """Read a vertical, fiber-linear field as a matrix: field = e_a M[a][b] d/de_b."""
    k = len(fiber)
    for i in range(base_dim):
        if not field.comps[i].is_zero():
            raise ConsistencyError("expected a vertical vector field")
    rows = [[None] * k for _ in range(k)]
    for b in range(k):
        comp = field.comps[base_dim + b]
        recomposed = Expr.const(0)
        for a in range(k):
            c = differentiate(comp, fiber[a])
            for sym in c.symbols():
                if sym in fiber:
                    raise ConsistencyError("vertical component is not linear in the fiber")
            rows[a][b] = c
            recomposed = recomposed + Expr.symbol(fiber[a]) * c
        if not (recomposed - comp).is_zero():
            raise ConsistencyError("vertical component has a fiber-independent part")
    return rows


def covariant_curvature_derivatives(conn):
    """(D_1, D_2) read off the brackets [X_k, [X_1, X_2]] of horizontal lifts.

    Cross-checked against the matrix identity D_k = d_k R + [A_k^T, R].
    """
    dist = horizontal_distribution(conn)
    x1, x2 = dist.fields
    x3 = lie_bracket(x1, x2)
    n = conn.base_chart.dim
    out = []
    r = curvature(conn)
    for k, xk in enumerate((x1, x2)):
        w = lie_bracket(xk, x3)
        d = fiber_linear_matrix(w, n, conn.fiber)
        ak_t = _mat_transpose(conn.coeff_matrix(k))
        formula = _mat_add(
            _mat_diff(r.entries, conn.base_chart.coords[k]),
            _mat_sub(_mat_mul(ak_t, r.entries), _mat_mul(r.entries, ak_t)),
        )
        if not _mat_is_zero(_mat_sub(d, formula)):
            raise ConsistencyError("bracket and matrix routes for the covariant derivative differ")
        out.append(Curvature(d))
    return tuple(out)


def gauge_transform(conn, g):
    """Transform by the gauge matrix g acting on the fiber coordinates.

    The curvature transforms by conjugation: curvature(g . conn) equals
    g * curvature(conn) * g^-1 (asserted as a test property).
    """
    if len(g) != conn.rank or any(len(row) != conn.rank for row in g):
        raise PreconditionError("gauge matrix must match the connection rank")
    if determinant(g).is_zero():
        raise PreconditionError("gauge matrix must have nonzero determinant")
    h = invert_matrix(_mat_transpose(g))
    return _display_gauge(conn, h)


def _display_gauge(conn, h):
    """Apply omega -> h omega h^-1 + dh h^-1 to the stored matrix."""
    h_inv = invert_matrix(h)
    x, y = conn.base_chart.coords
    new_coeffs = []
    for i, coord in enumerate((x, y)):
        a = conn.coeff_matrix(i)
        dh = _mat_diff(h, coord)
        m = _mat_add(_mat_mul(_mat_mul(h, a), h_inv), _mat_mul(dh, h_inv))
        new_coeffs.append(m)
    pairs = [
        [(new_coeffs[0][i][j], new_coeffs[1][i][j]) for j in range(conn.rank)]
        for i in range(conn.rank)
    ]
    return Connection.from_coeffs(
        conn.base_chart, conn.fiber, pairs, group=conn.group, total_chart=conn.total_chart
    )


@dataclass
class GrowthClassification:
    kind: str  # "integrable", "(2,3)", "(2,3,4)", "(2,3,5)"
    growth: tuple
    witness: tuple | None
    certificate: tuple
    curvature: Curvature
    d1: Curvature
    d2: Curvature


def dependence_witness(d1, d2):
    """A nonzero (f1, f2) with f1*D1 + f2*D2 = 0 over the fraction field, or None."""
    v1, v2 = d1.flat(), d2.flat()
    z1 = all(e.is_zero() for e in v1)
    z2 = all(e.is_zero() for e in v2)
    if z1 and z2:
        return (Expr.const(1), Expr.const(0))
    if z1:
        return (Expr.const(1), Expr.const(0))
    if z2:
        return (Expr.const(0), Expr.const(1))
    for i in range(len(v1)):
        for j in range(i + 1, len(v1)):
            if not (v1[i] * v2[j] - v1[j] * v2[i]).is_zero():
                return None
    for i in range(len(v1)):
        if not (v1[i].is_zero() and v2[i].is_zero()):
            f1, f2 = normalize_vector([-v2[i], v1[i]])
            return (f1, f2)
    return None


_KIND_BY_GROWTH = {
    (2,): "integrable",
    (2, 3): "(2,3)",
    (2, 3, 4): "(2,3,4)",
    (2, 3, 5): "(2,3,5)",
}


def classify_growth(conn):
    """Growth type of the horizontal distribution, with curvature cross-checks.

    The growth vector is the derived flag of the horizontal lift; the
    curvature route is run alongside and the provable implications are
    asserted: flatness is equivalent to integrability, vanishing
    covariant derivatives force growth (2,3), and a base-coefficient
    dependence of the two covariant derivatives (the witness for a
    direction with parallel curvature) forces growth at most (2,3,4).

    The dependence test is sufficient but not necessary for growth
    (2,3,4): the three vertical bracket fields can be fiber-linearly
    dependent without any base-coefficient relation, in which case the
    witness is None.
    """
    if conn.rank != 3:
        raise PreconditionError("growth classification requires a rank-3 connection")
    r = curvature(conn)
    flag_dist = horizontal_distribution(conn)
    _, gv = derived_flag(flag_dist)
    growth = gv.ranks
    if growth not in _KIND_BY_GROWTH:
        raise ConsistencyError(f"unexpected growth vector {growth} for a horizontal 2-plane field")
    if r.is_zero() != (growth == (2,)):
        raise ConsistencyError("flatness and integrability disagree")
    if r.is_zero():
        d1 = d2 = Curvature([[Expr.const(0)] * 3 for _ in range(3)])
        witness = None
    else:
        d1, d2 = covariant_curvature_derivatives(conn)
        witness = dependence_witness(d1, d2)
        if d1.is_zero() and d2.is_zero() and growth != (2, 3):
            raise ConsistencyError("vanishing covariant derivatives must stabilize the flag")
        if witness is not None and growth == (2, 3, 5):
            raise ConsistencyError("a dependence witness contradicts bracket-generating growth")
    if growth != (2, 3, 4):
        witness = None
    return GrowthClassification(_KIND_BY_GROWTH[growth], growth, witness, gv.certificate, r, d1, d2)


@dataclass
class Christoffel:
    """Symmetric Christoffel table: g<upper>_<lower pair>."""

    g1_11: Expr
    g2_11: Expr
    g1_12: Expr
    g2_12: Expr
    g1_22: Expr
    g2_22: Expr

    @classmethod
    def zero(cls):
        z = Expr.const(0)
        return cls(z, z, z, z, z, z)


def euclidean_connection(base_chart, fiber, gamma, l, m, n):
    """The rank-3 matrix encoding a surface's tangential and normal derivatives.

    Rows differentiate the frame (normal section, first and second
    tangent lifts); l, m, n are the second-fundamental-form coefficients.
    """
    z = Expr.const(0)
    one = Expr.const(1)
    coeffs = [
        [(z, z), (one, z), (z, one)],
        [(l, m), (gamma.g1_11, gamma.g1_12), (gamma.g2_11, gamma.g2_12)],
        [(m, n), (gamma.g1_12, gamma.g1_22), (gamma.g2_12, gamma.g2_22)],
    ]
    return Connection.from_coeffs(base_chart, fiber, coeffs, group=GROUP_GENERAL_LINEAR)


def scale_and_boost_gauge(lam, a):
    """diag(lam, a, 1/a): the scale factor and boost of the reduced structure group."""
    z = Expr.const(0)
    if lam.is_zero() or a.is_zero():
        raise PreconditionError("scale-and-boost entries must be nonzero")
    return [[lam, z, z], [z, a, z], [z, z, Expr.const(1) / a]]
