"""Canonical rank-4 systems of projective surfaces and their reductions.

The canonical system z_xx = b z_y + mu z, z_yy = c z_x + nu z is held as
four expressions in asymptotic coordinates.  Coefficients are either
concrete (rational in x, y, and parameters) or opaque jet atoms; both
flow through the same code paths.

All logarithms are eliminated up front: the second mixed logarithmic
derivative of f is computed by the rational identity
(f_xy*f - f_x*f_y)/f^2, which keeps every value in the exact kernel.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

from .connection import (
    Connection,
    Curvature,
    GROUP_PARABOLIC,
    GROUP_SCALE_AND_BOOST,
    _display_gauge,
    classify_growth,
    covariant_curvature_derivatives,
    curvature,
    dependence_witness,
    horizontal_distribution,
)
from .errors import ConsistencyError, PreconditionError
from .expr import Expr, differentiate, parse
from .forms import Chart, Distribution, VectorField, derived_flag, lie_bracket
from .linalg import rational_combination
from .symbols import SymbolTable


class SurfaceWorkspace:
    """Symbol table plus the standard charts of one surface problem."""

    def __init__(self, params=(), functions=()):
        t = SymbolTable()
        self.table = t
        self.x = t.base_coordinate("x")
        self.y = t.base_coordinate("y")
        self.z = t.fiber_coordinate("z")
        self.p = t.fiber_coordinate("p")
        self.q = t.fiber_coordinate("q")
        self.s = t.fiber_coordinate("s")
        self.base = Chart("Sigma", (self.x, self.y))
        self.m5 = Chart("M5", (self.x, self.y, self.z, self.p, self.q))
        self.m6 = Chart("M6", (self.x, self.y, self.z, self.p, self.q, self.s))
        self.params = {}
        for name in params:
            self.params[name] = t.parameter(name)
        self.functions = {}
        for spec in functions:
            name, deps = spec if isinstance(spec, tuple) else (spec, "xy")
            variables = tuple(self.x if ch == "x" else self.y for ch in deps)
            self.functions[name] = t.jet_function(name, variables)

    def parse(self, text):
        return parse(text, self.table)

    def zero(self):
        return Expr.const(0)

    def one(self):
        return Expr.const(1)


@dataclass
class CanonicalSystem:
    """Coefficients (b, c, mu, nu) of the canonical system in asymptotic coordinates."""

    ws: SurfaceWorkspace
    b: Expr
    c: Expr
    mu: Expr
    nu: Expr
    symbolic: bool = False

    def coeffs(self):
        return (self.b, self.c, self.mu, self.nu)


def symbolic_canonical_system():
    """All four coefficients as opaque jets of (x, y)."""
    ws = SurfaceWorkspace(functions=("b", "c", "mu", "nu"))
    e = lambda name: Expr.symbol(ws.table.get(name))
    return CanonicalSystem(ws, e("b"), e("c"), e("mu"), e("nu"), symbolic=True)


def concrete_canonical_system(b, c, mu, nu, params=(), functions=()):
    """Coefficients from expression text (or Exprs on a supplied workspace)."""
    ws = SurfaceWorkspace(params=params, functions=functions)
    vals = [v if isinstance(v, Expr) else ws.parse(str(v)) for v in (b, c, mu, nu)]
    symbolic = bool(functions)
    return CanonicalSystem(ws, *vals, symbolic=symbolic)


# ---------------------------------------------------------------------------
# integrability and invariants


def integrability_residuals(system):
    """The three obstructions to the system having a full solution space."""
    ws = system.ws
    b, c, mu, nu = system.coeffs()
    dx = lambda e: differentiate(e, ws.x)
    dy = lambda e: differentiate(e, ws.y)
    r1 = -2 * dy(b) * nu - b * dy(nu) - dy(dy(mu)) + dx(mu) * c + 2 * mu * dx(c) + dx(dx(nu))
    r2 = -2 * dy(b) * c - b * dy(c) + dx(dx(c)) + 2 * dx(nu)
    r3 = -2 * dy(mu) - dy(dy(b)) + dx(b) * c + 2 * b * dx(c)
    return (r1, r2, r3)


def _log_second_mixed(ws, f):
    """The rational form of the second mixed logarithmic derivative of f."""
    if f.is_zero():
        raise PreconditionError("logarithmic derivative of zero")
    fx = differentiate(f, ws.x)
    fxy = differentiate(fx, ws.y)
    fy = differentiate(f, ws.y)
    return (fxy * f - fx * fy) / (f * f)


def gaussian_curvature(system):
    """Curvature of the projective metric, as a rational expression."""
    ws = system.ws
    bc = system.b * system.c
    if bc.is_zero():
        raise PreconditionError("Gaussian curvature requires b*c != 0")
    return -_log_second_mixed(ws, bc) / (8 * bc)


def applicability_residuals(system):
    """Three quantities whose vanishing detects a 3-parameter deformation family."""
    ws = system.ws
    b, c = system.b, system.c
    bc = b * c
    if bc.is_zero():
        raise PreconditionError("applicability residuals require b*c != 0")
    dx = lambda e: differentiate(e, ws.x)
    dy = lambda e: differentiate(e, ws.y)
    r1 = _log_second_mixed(ws, b) - _log_second_mixed(ws, c)
    r2 = dx(_log_second_mixed(ws, c) / bc)
    r3 = dy(_log_second_mixed(ws, b) / bc)
    return (r1, r2, r3)


_H_LOWER = ((0, 1), (1, 0))  # constant tensor in asymptotic coordinates
_H_UPPER = ((0, 1), (1, 0))


def _cubic_components(conn4):
    """Extract the cubic form components from the rank-4 connection matrix.

    The covariant derivative of the constant tensor h against the frame
    rows 1, 2 of the matrix yields Phi_{ij k} via
    Phi_{ij k} w^k = -h_{aj} w^a_i - h_{ia} w^a_j.
    """
    m = conn4.omega
    phi = {}
    for i in (0, 1):
        for j in (0, 1):
            acc_dx = Expr.const(0)
            acc_dy = Expr.const(0)
            for a in (0, 1):
                haj = _H_LOWER[a][j]
                hia = _H_LOWER[i][a]
                if haj:
                    acc_dx = acc_dx - m[i + 1][a + 1].comps[0] * haj
                    acc_dy = acc_dy - m[i + 1][a + 1].comps[1] * haj
                if hia:
                    acc_dx = acc_dx - m[j + 1][a + 1].comps[0] * hia
                    acc_dy = acc_dy - m[j + 1][a + 1].comps[1] * hia
            phi[(i, j, 0)] = acc_dx
            phi[(i, j, 1)] = acc_dy
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                if not (phi[(i, j, k)] - phi[tuple(sorted((i, j, k)))]).is_zero():
                    raise ConsistencyError("cubic form extraction is not totally symmetric")
    return phi


def _fubini_scalar(phi):
    total = Expr.const(0)
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                for pp in (0, 1):
                    for qq in (0, 1):
                        for rr in (0, 1):
                            w = _H_UPPER[i][pp] * _H_UPPER[j][qq] * _H_UPPER[k][rr]
                            if w:
                                total = total + phi[(i, j, k)] * phi[(pp, qq, rr)] * w
    return total


def _solve_in_coframe(omega, coframe1, coframe2):
    """Coefficients (a, b) with omega = a*coframe1 + b*coframe2 (all 1-forms)."""
    a1, a2 = coframe1.comps
    b1, b2 = coframe2.comps
    det = a1 * b2 - a2 * b1
    if det.is_zero():
        raise PreconditionError("degenerate coframe")
    u, v = omega.comps
    return ((u * b2 - v * b1) / det, (a1 * v - a2 * u) / det)


@dataclass
class InvariantsReport:
    """Projective invariants of a canonical system, all exact."""

    phi_coefficient: Expr  # coefficient of the symmetric off-diagonal metric
    cubic: tuple  # (coefficient of dx^3, coefficient of dy^3)
    fubini: Expr
    ell: tuple  # (l_11, l_12, l_22)
    r_form: tuple  # (r_1, r_2)
    gaussian_curvature: Expr | None
    integrability: tuple
    applicability: tuple | None


def invariants(system):
    """Compute the invariant package and verify its internal identities."""
    b, c = system.b, system.c
    conn4 = rank4_connection(system)
    phi = _cubic_components(conn4)
    if not (phi[(0, 0, 0)] + 2 * b).is_zero() or not (phi[(1, 1, 1)] + 2 * c).is_zero():
        raise ConsistencyError("cubic components disagree with the canonical values")
    for idx in ((0, 0, 1), (0, 1, 1)):
        if not phi[idx].is_zero():
            raise ConsistencyError("mixed cubic components should vanish")
    fubini = _fubini_scalar(phi)
    if not (fubini - 8 * b * c).is_zero():
        raise ConsistencyError("Fubini contraction disagrees with 8*b*c")
    # apolarity: h^{ij} Phi_{ijk} = 0
    for k in (0, 1):
        acc = Expr.const(0)
        for i in (0, 1):
            for j in (0, 1):
                if _H_UPPER[i][j]:
                    acc = acc + phi[(i, j, k)] * _H_UPPER[i][j]
        if not acc.is_zero():
            raise ConsistencyError("apolarity fails")
    m = conn4.omega
    coframe1, coframe2 = m[0][1], m[0][2]
    ell = {}
    for i in (0, 1):
        lhs = None
        for j in (0, 1):
            if _H_LOWER[i][j]:
                term = m[3][j + 1].scaled(Expr.const(_H_LOWER[i][j]))
                lhs = term if lhs is None else lhs + term
        lhs = lhs - m[i + 1][0]
        ell[(i, 0)], ell[(i, 1)] = _solve_in_coframe(lhs, coframe1, coframe2)
    if not (ell[(0, 1)] - ell[(1, 0)]).is_zero():
        raise ConsistencyError("extracted l-tensor is not symmetric")
    r1, r2 = _solve_in_coframe(-m[3][0], coframe1, coframe2)
    bc = b * c
    curvature_value = None if bc.is_zero() else gaussian_curvature(system)
    applicability = None if bc.is_zero() else applicability_residuals(system)
    return InvariantsReport(
        phi_coefficient=fubini,
        cubic=(phi[(0, 0, 0)], phi[(1, 1, 1)]),
        fubini=fubini,
        ell=(ell[(0, 0)], ell[(0, 1)], ell[(1, 1)]),
        r_form=(r1, r2),
        gaussian_curvature=curvature_value,
        integrability=integrability_residuals(system),
        applicability=applicability,
    )


# ---------------------------------------------------------------------------
# connections and distributions


def bar_connection(system):
    """The reduced rank-3 connection whose horizontal lift is the reduced plane field."""
    ws = system.ws
    b, c, mu, nu = system.coeffs()
    z0 = Expr.const(0)
    one = Expr.const(1)
    conn = Connection.from_coeffs(
        ws.base,
        (ws.z, ws.p, ws.q),
        [
            [(z0, z0), (one, z0), (z0, one)],
            [(mu, z0), (z0, z0), (b, z0)],
            [(z0, nu), (z0, c), (z0, z0)],
        ],
        group=GROUP_SCALE_AND_BOOST,
        total_chart=ws.m5,
    )
    horizontal = horizontal_distribution(conn)
    reduced = derived_reduction(system, 0)
    for u, v in zip(horizontal.fields, reduced.fields):
        if u != v:
            raise ConsistencyError("horizontal lift disagrees with the derived reduction")
    return conn


def rank4_connection(system):
    """The rank-4 connection of the canonical system, last row assembled.

    Rows 0-2 express dz, dp, dq along solutions; row 3 is assembled from
    the total derivatives of the second-order coefficients r = b*q + mu*z
    and t = c*p + nu*z, and is verified against the closed form and
    against contractions of the reduced curvature.
    """
    ws = system.ws
    b, c, mu, nu = system.coeffs()
    z0 = Expr.const(0)
    one = Expr.const(1)
    dx = lambda e: differentiate(e, ws.x)
    dy = lambda e: differentiate(e, ws.y)

    zs, ps, qs, ss = (Expr.symbol(w) for w in (ws.z, ws.p, ws.q, ws.s))
    r_coeff = b * qs + mu * zs
    t_coeff = c * ps + nu * zs
    x_total = VectorField(ws.m6, [one, z0, ps, r_coeff, ss, z0])
    y_total = VectorField(ws.m6, [z0, one, qs, ss, t_coeff, z0])
    dyr = y_total.apply(r_coeff)
    dxt = x_total.apply(t_coeff)
    fiber = (ws.z, ws.p, ws.q, ws.s)
    row3 = []
    for sym in fiber:
        cx = differentiate(dyr, sym)
        cy = differentiate(dxt, sym)
        for val in (cx, cy):
            for s2 in val.symbols():
                if s2 in fiber:
                    raise ConsistencyError("total-derivative row is not linear in the fiber")
        row3.append((cx, cy))

    displayed_row3 = [
        (b * nu + dy(mu), mu * c + dx(nu)),
        (b * c, dx(c) + nu),
        (mu + dy(b), b * c),
        (z0, z0),
    ]
    for (ax, ay), (ex, ey) in zip(row3, displayed_row3):
        if not (ax - ex).is_zero() or not (ay - ey).is_zero():
            raise ConsistencyError("assembled last row disagrees with the closed form")

    rbar = curvature(bar_connection(system))
    for a in range(3):
        if not (row3[a][0] + rbar.entries[a][1]).is_zero():
            raise ConsistencyError("last row dx-part is not the expected curvature contraction")
        if not (row3[a][1] - rbar.entries[a][2]).is_zero():
            raise ConsistencyError("last row dy-part is not the expected curvature contraction")

    coeffs = [
        [(z0, z0), (one, z0), (z0, one), (z0, z0)],
        [(mu, z0), (z0, z0), (b, z0), (z0, one)],
        [(z0, nu), (z0, c), (z0, z0), (one, z0)],
        row3,
    ]
    return Connection.from_coeffs(
        ws.base, (ws.z, ws.p, ws.q, ws.s), coeffs, group=GROUP_PARABOLIC, total_chart=ws.m6
    )


def m6_distribution(system):
    """The rank-3 plane field on the six-dimensional total space."""
    ws = system.ws
    b, c, mu, nu = system.coeffs()
    z0 = Expr.const(0)
    one = Expr.const(1)
    zs, ps, qs, ss = (Expr.symbol(w) for w in (ws.z, ws.p, ws.q, ws.s))
    x_field = VectorField(ws.m6, [one, z0, ps, b * qs + mu * zs, ss, z0])
    y_field = VectorField(ws.m6, [z0, one, qs, ss, c * ps + nu * zs, z0])
    z_field = VectorField.coordinate(ws.m6, ws.s)
    return Distribution(ws.m6, [x_field, y_field, z_field])


def _constant_section(system, s0):
    if isinstance(s0, int):
        s0 = Expr.const(s0)
    bad = [sym for sym in s0.symbols() if sym not in system.ws.params.values()]
    if bad:
        names = ", ".join(sym.name for sym in bad)
        raise PreconditionError(f"s0 must be constant over the fibration; found {names}")
    return s0


def hat_distribution(system, s0):
    """span{X_s0, Y_s0, d/ds} on the six-dimensional space."""
    ws = system.ws
    s0 = _constant_section(system, s0)
    b, c, mu, nu = system.coeffs()
    z0 = Expr.const(0)
    one = Expr.const(1)
    zs, ps, qs = (Expr.symbol(w) for w in (ws.z, ws.p, ws.q))
    x_field = VectorField(ws.m6, [one, z0, ps, b * qs + mu * zs, s0, z0])
    y_field = VectorField(ws.m6, [z0, one, qs, s0, c * ps + nu * zs, z0])
    z_field = VectorField.coordinate(ws.m6, ws.s)
    return Distribution(ws.m6, [x_field, y_field, z_field])


def derived_reduction(system, s0):
    """Restrict to a constant section of the last fiber direction and project.

    Verifies that d/ds commutes with the section fields, then drops the s
    coordinate; at s0 = 0 this is the reduced 2-plane field.
    """
    ws = system.ws
    hat = hat_distribution(system, s0)
    x6, y6, z6 = hat.fields
    if not lie_bracket(z6, x6).is_zero() or not lie_bracket(z6, y6).is_zero():
        raise ConsistencyError("section fields do not commute with the vertical direction")
    reduced = []
    for f in (x6, y6):
        if not f.comps[5].is_zero():
            raise ConsistencyError("section field has a residual vertical component")
        reduced.append(VectorField(ws.m5, f.comps[:5]))
    return Distribution(ws.m5, reduced)


# ---------------------------------------------------------------------------
# classification and the dictionary


STRATUM_QUADRIC = "Quadric"
STRATUM_RULED = "Ruled"
STRATUM_VERY_GENERAL = "VeryGeneral"


@dataclass
class Classification:
    stratum: str
    ruled_side: str | None  # which of b, c survives on a ruled surface
    applicable: bool
    prediction: tuple

    def describe(self):
        side = f"({self.ruled_side})" if self.ruled_side else ""
        return f"{self.stratum}{side}"


def classify(system):
    """Stratum from exact zero tests plus the expected growth vector."""
    b0 = system.b.is_zero()
    c0 = system.c.is_zero()
    barconn = bar_connection(system)
    rbar = curvature(barconn)
    if b0 and c0:
        stratum, side = STRATUM_QUADRIC, None
        prediction = (2,)
        applicable = True
    elif b0 or c0:
        stratum, side = STRATUM_RULED, ("c" if b0 else "b")
        prediction = (2,) if rbar.is_zero() else (2, 3, 4)
        applicable = True
    else:
        stratum, side = STRATUM_VERY_GENERAL, None
        d1, d2 = covariant_curvature_derivatives(barconn)
        if d1.is_zero() and d2.is_zero():
            raise ConsistencyError("covariantly constant nonzero curvature cannot occur here")
        prediction = (2, 3, 4) if dependence_witness(d1, d2) is not None else (2, 3, 5)
        applicable = all(e.is_zero() for e in applicability_residuals(system))
    return Classification(stratum, side, applicable, prediction)


@dataclass
class DictionaryReport:
    growth: tuple
    certificate: tuple
    classification: Classification
    witness: VectorField | None
    prediction_confirmed: bool
    integrable_stratum: str | None
    curvature_is_zero: bool


def growth_dictionary(system):
    """Growth vector of the reduced plane field, by three routes at once.

    The derived flag of the reduced distribution, the curvature
    classification of the reduced connection, and the stratum prediction
    are computed independently; the first two must agree exactly, and the
    prediction is reported as confirmed or not.
    """
    barconn = bar_connection(system)
    record = classify_growth(barconn)
    _, gv = derived_flag(derived_reduction(system, 0))
    if gv.ranks != record.growth:
        raise ConsistencyError(
            f"flag growth {gv.ranks} disagrees with classification {record.growth}"
        )
    if record.growth == (2, 3):
        raise ConsistencyError("growth (2,3) must not occur for canonical systems")
    if not no_growth_23_possible():
        raise ConsistencyError("structural exclusion of growth (2,3) failed")
    classification = classify(system)
    witness = None
    if record.witness is not None:
        ws = system.ws
        f1, f2 = record.witness
        witness = VectorField(ws.base, [f1, f2])
    label = None
    if record.growth == (2,):
        label = (
            "quadric"
            if classification.stratum == STRATUM_QUADRIC
            else "intersection of two linear complexes"
        )
    return DictionaryReport(
        growth=record.growth,
        certificate=tuple(gv.certificate),
        classification=classification,
        witness=witness,
        prediction_confirmed=classification.prediction == record.growth,
        integrable_stratum=label,
        curvature_is_zero=record.curvature.is_zero(),
    )


@functools.lru_cache(maxsize=1)
def no_growth_23_possible():
    """Both covariant derivatives vanishing forces zero reduced curvature.

    Verified structurally in fully symbolic mode: every entry of the
    reduced curvature is an exact Q-linear combination of the entries of
    the two covariant derivative matrices, so D_1 = D_2 = 0 pins the
    curvature to zero identically.
    """
    system = symbolic_canonical_system()
    barconn = bar_connection(system)
    rbar = curvature(barconn)
    d1, d2 = covariant_curvature_derivatives(barconn)
    generators = d1.flat() + d2.flat()
    for entry in rbar.flat():
        if entry.is_zero():
            continue
        if rational_combination(entry, generators) is None:
            return False
    return True


@functools.lru_cache(maxsize=1)
def flatness_matches_integrability():
    """The rank-4 curvature components and the residuals generate each other over Q."""
    system = symbolic_canonical_system()
    conn4 = rank4_connection(system)
    comps = [e for e in curvature(conn4).flat() if not e.is_zero()]
    residuals = list(integrability_residuals(system))
    if not comps:
        return False
    for entry in comps:
        if rational_combination(entry, residuals) is None:
            return False
    for res in residuals:
        if rational_combination(res, comps) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# covariant transformations


@dataclass
class PreCanonicalSystem:
    """Asymptotic-coordinate system with first-order terms and their potential."""

    ws: SurfaceWorkspace
    alpha: Expr
    delta: Expr
    b: Expr
    c: Expr
    mu: Expr
    nu: Expr
    theta: Expr

    def __post_init__(self):
        tx = differentiate(self.theta, self.ws.x)
        ty = differentiate(self.theta, self.ws.y)
        if not (tx - self.alpha).is_zero() or not (ty - self.delta).is_zero():
            raise PreconditionError("theta is not a potential for (alpha, delta)")


def canonicalize(pre):
    """Remove the first-order terms by the scaling covariant transformation.

    The closed forms were re-derived by substituting the scaled unknown
    into the system and collecting coefficients (see the tests, which
    rerun that derivation as an oracle):

        mu~ = mu + b*theta_y/2 + theta_x^2/4 - theta_xx/2
        nu~ = nu + c*theta_x/2 + theta_y^2/4 - theta_yy/2
    """
    ws = pre.ws
    tx = differentiate(pre.theta, ws.x)
    ty = differentiate(pre.theta, ws.y)
    txx = differentiate(tx, ws.x)
    tyy = differentiate(ty, ws.y)
    half = Expr.const(1) / 2
    quarter = Expr.const(1) / 4
    mu_t = pre.mu + pre.b * ty * half + tx * tx * quarter - txx * half
    nu_t = pre.nu + pre.c * tx * half + ty * ty * quarter - tyy * half
    return CanonicalSystem(ws, pre.b, pre.c, mu_t, nu_t)


@dataclass
class GeneralSystem:
    """Second-order system before asymptotic normalization."""

    ws: SurfaceWorkspace
    l: Expr
    m: Expr
    alpha: Expr
    b: Expr
    mu: Expr
    c: Expr
    delta: Expr
    nu: Expr

    def __post_init__(self):
        if (self.l * self.m - 1).is_zero():
            raise PreconditionError("degenerate symbol tensor: l*m - 1 = 0")


@dataclass
class HTensor:
    h11: Expr
    h12: Expr
    h21: Expr
    h22: Expr
    determinant_certificate: Expr
    asymptotic: bool


def extract_h(general):
    """The coefficient tensor of the mixed second-order terms."""
    one = Expr.const(1)
    det = general.l * general.m - 1
    if det.is_zero():
        raise PreconditionError("degenerate symbol tensor: l*m - 1 = 0")
    asymptotic = general.l.is_zero() and general.m.is_zero()
    return HTensor(general.l, one, one, general.m, det, asymptotic)


def _wilczynski_gauge(ws, f, rank):
    """Frame matrix of z -> f z on (z, z_x, z_y[, z_xy])."""
    fx = differentiate(f, ws.x)
    fy = differentiate(f, ws.y)
    z0 = Expr.const(0)
    if rank == 3:
        return [[f, z0, z0], [fx, f, z0], [fy, z0, f]]
    fxy = differentiate(fx, ws.y)
    return [
        [f, z0, z0, z0],
        [fx, f, z0, z0],
        [fy, z0, f, z0],
        [fxy, fy, fx, f],
    ]


def wilczynski_covariance_check(system, f):
    """Does the scaling covariant transformation preserve the symbol tensor?

    Builds the induced frame change for z -> f z, transforms both the
    rank-4 and the reduced rank-3 connections, re-extracts the symbol
    slots, and compares with the constant tensor.  Always true; exposed
    as a boolean so the property is testable.
    """
    if f.is_zero():
        raise PreconditionError("covariant transformation requires nonzero f")
    ws = system.ws
    one = Expr.const(1)
    conn4 = rank4_connection(system)
    g4 = _wilczynski_gauge(ws, f, 4)
    t4 = _display_gauge(conn4, g4)
    mm = t4.omega
    coframe_ok = (
        mm[0][0].is_zero()
        and (mm[0][1].comps[0] - one).is_zero()
        and mm[0][1].comps[1].is_zero()
        and mm[0][2].comps[0].is_zero()
        and (mm[0][2].comps[1] - one).is_zero()
        and mm[0][3].is_zero()
    )
    h11, h12 = _solve_in_coframe(mm[1][3], mm[0][1], mm[0][2])
    h21, h22 = _solve_in_coframe(mm[2][3], mm[0][1], mm[0][2])
    h_ok = h11.is_zero() and (h12 - one).is_zero() and (h21 - one).is_zero() and h22.is_zero()

    barconn = bar_connection(system)
    g3 = _wilczynski_gauge(ws, f, 3)
    t3 = _display_gauge(barconn, g3)
    m3 = t3.omega
    bar_ok = (
        m3[0][0].is_zero()
        and (m3[0][1].comps[0] - one).is_zero()
        and m3[0][1].comps[1].is_zero()
        and m3[0][2].comps[0].is_zero()
        and (m3[0][2].comps[1] - one).is_zero()
        and (m3[1][2].comps[0] - system.b).is_zero()
        and (m3[2][1].comps[1] - system.c).is_zero()
    )
    return coframe_ok and h_ok and bar_ok


# ---------------------------------------------------------------------------
# ruled systems and the catalog


def ruled_canonical(ws, alpha, beta, gamma, delta):
    """Canonical system of a surface swept by lines, from four x-functions."""
    y = ws.y
    for name, e in (("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)):
        if not differentiate(e, y).is_zero():
            raise PreconditionError(f"{name} must depend on x only")
    ys = Expr.symbol(y)
    b = alpha * ys * ys + beta * ys + gamma
    mu = -alpha * ys + delta
    system = CanonicalSystem(ws, b, Expr.const(0), mu, Expr.const(0), symbolic=True)
    for r in integrability_residuals(system):
        if not r.is_zero():
            raise ConsistencyError("ruled family must satisfy the integrability conditions")
    return system


def ruled_ode_matrix(alpha, beta, gamma, delta):
    """Coefficient matrix of the coupled line-pair equations."""
    return [[delta, gamma], [-alpha, beta + delta]]


@dataclass
class CatalogEntry:
    name: str
    make: object  # () -> CanonicalSystem
    stratum: str
    growth: tuple
    provenance: str
    witness: tuple | None = None  # expected (f1 text, f2 text), up to scale
    certificate_contains: str | None = None


def _make_quadric():
    return concrete_canonical_system("0", "0", "0", "0")


def _make_ruled():
    ws = SurfaceWorkspace(functions=(("alpha", "x"), ("beta", "x"), ("gamma", "x"), ("delta", "x")))
    e = lambda n: Expr.symbol(ws.table.get(n))
    return ruled_canonical(ws, e("alpha"), e("beta"), e("gamma"), e("delta"))


def _make_flat_ruled():
    ws = SurfaceWorkspace(functions=(("beta", "x"), ("gamma", "x")))
    e = lambda n: Expr.symbol(ws.table.get(n))
    ys = Expr.symbol(ws.y)
    return CanonicalSystem(ws, e("beta") * ys + e("gamma"), Expr.const(0), -e("beta"), Expr.const(0), symbolic=True)


def _make_example_234():
    return concrete_canonical_system(
        "4*k1*(k1*y+k2)/(4*x+k3)^2",
        "(4*x+k3)/(k1*y+k2)^2",
        "0",
        "0",
        params=("k1", "k2", "k3"),
    )


def _make_unit_bc():
    return concrete_canonical_system("1", "1", "0", "0")


def catalog():
    """Bundled example systems with their expected classification data."""
    return {
        "quadric": CatalogEntry("quadric", _make_quadric, STRATUM_QUADRIC, (2,), "paper"),
        "ruled": CatalogEntry("ruled", _make_ruled, STRATUM_RULED, (2, 3, 4), "paper", witness=("0", "1")),
        "flat-ruled": CatalogEntry("flat-ruled", _make_flat_ruled, STRATUM_RULED, (2,), "paper"),
        "example-234": CatalogEntry(
            "example-234",
            _make_example_234,
            STRATUM_VERY_GENERAL,
            (2, 3, 4),
            "paper",
            witness=("4*x+k3", "k1*(k1*y+k2)"),
        ),
        "unit-bc": CatalogEntry(
            "unit-bc",
            _make_unit_bc,
            STRATUM_VERY_GENERAL,
            (2, 3, 5),
            "derived",
            certificate_contains="2*p^3 - 2*q^3",
        ),
    }
