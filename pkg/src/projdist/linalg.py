"""Exact linear algebra over the fraction field of the polynomial ring.

Rank computations are fraction-free (Bareiss) after clearing row
denominators; every pivot polynomial and cleared denominator is logged so
the caller can assemble a genericity certificate: wherever all logged
polynomials are nonzero, the generic rank holds pointwise.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import PreconditionError
from .expr import Expr
from .poly import Poly, divmod_exact


def _cert_normalize(e):
    """Certificate entry for a nonzero Expr: its numerator, sign-normalized."""
    num = e.num
    if num.leading_coeff() < 0:
        num = -num
    return Expr(num)


def prune_certificate(entries):
    """Drop constants, duplicates, and entries that factor into other entries."""
    polys = []
    for e in entries:
        if e.is_const():
            continue
        e = _cert_normalize(e)
        if e not in polys:
            polys.append(e)
    kept = []
    for i, e in enumerate(polys):
        rest = polys[:i] + polys[i + 1 :]
        r = e.num
        changed = True
        while changed and not r.is_const():
            changed = False
            for other in rest:
                q = divmod_exact(r, other.num)
                if q is not None:
                    r = q
                    changed = True
        if not r.is_const():
            kept.append(e)
    # keep deterministic, stable order
    return kept


def clear_row_denominators(row):
    """Scale a row of Exprs to polynomials; returns (new row, denominators)."""
    dens = []
    scale = Expr.const(1)
    for e in row:
        if not e.is_polynomial():
            d = Expr(e.den)
            dens.append(d)
            scale = scale * d
    if dens:
        row = [e * scale for e in row]
    return row, dens


def _bareiss_eliminate(rows):
    """Shared fraction-free elimination core.

    Returns (rank, raw certificate, pivot row origins, pivot columns).
    """
    if not rows:
        raise PreconditionError("rank of an empty matrix")
    cert = []
    m = []
    origin = []
    for idx, row in enumerate(rows):
        cleared, dens = clear_row_denominators(list(row))
        cert.extend(dens)
        m.append(cleared)
        origin.append(idx)
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = Expr.const(1)
    r = 0
    pivot_rows = []
    pivot_cols = []
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if not m[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
            origin[r], origin[pivot_row] = origin[pivot_row], origin[r]
        pivot = m[r][c]
        cert.append(pivot)
        pivot_rows.append(origin[r])
        pivot_cols.append(c)
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (pivot * m[i][j] - m[i][c] * m[r][j]) / prev
            m[i][c] = Expr.const(0)
        prev = pivot
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank, cert, pivot_rows, pivot_cols


def bareiss_rank_extended(rows):
    """Fraction-free rank with certificate and the chosen pivot rows.

    Returns (rank, certificate entries, original indices of pivot rows).
    The successive pivots are minors of the denominator-cleared matrix, so
    their nonvanishing at a point (together with the cleared denominators)
    certifies the rank there.
    """
    rank, cert, pivot_rows, _ = _bareiss_eliminate(rows)
    return rank, prune_certificate(cert), pivot_rows


def bareiss_rank(rows):
    """Generic rank of a matrix of Exprs with a pivot/denominator certificate."""
    rank, cert, _ = bareiss_rank_extended(rows)
    return rank, cert


def bareiss_determinant(m):
    """Fraction-free determinant of a square Expr matrix (polynomial entries)."""
    n = len(m)
    a = [list(row) for row in m]
    prev = Expr.const(1)
    sign = 1
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if not a[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            return Expr.const(0)
        if pivot_row != c:
            a[c], a[pivot_row] = a[pivot_row], a[c]
            sign = -sign
        pivot = a[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][c] * a[c][j]) / prev
            a[i][c] = Expr.const(0)
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


class SpanEchelon:
    """Incremental row echelon over the fraction field with pivot logging."""

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = []  # (pivot column, row)
        self.certificate = []

    @property
    def rank(self):
        return len(self.rows)

    def residual(self, vec):
        vec = list(vec)
        for pc, row in self.rows:
            if not vec[pc].is_zero():
                f = vec[pc] / row[pc]
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def add(self, vec):
        """Reduce vec against the span; if independent, insert it and return True."""
        res = self.residual(vec)
        for c in range(self.ncols):
            if not res[c].is_zero():
                pivot = res[c]
                self.certificate.append(Expr(pivot.num))
                if not pivot.is_polynomial():
                    self.certificate.append(Expr(pivot.den))
                self.rows.append((c, res))
                self.rows.sort(key=lambda t: t[0])
                return True
        return False

    def pruned_certificate(self):
        return prune_certificate(self.certificate)


def nullspace(rows):
    """Basis of the right kernel over the fraction field, denominators cleared.

    Fraction-free: pivot columns come from Bareiss elimination and each
    basis vector is assembled from Cramer minors of the pivot block, so
    no rational-function division ever happens.  Each vector is
    normalized: polynomial entries with no common factor, first nonzero
    entry with positive leading coefficient.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    rank, _, pivot_rows, pivot_cols = _bareiss_eliminate(rows)
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    if rank == 0:
        return [
            [Expr.const(1 if i == fc else 0) for i in range(ncols)] for fc in free_cols
        ]
    cleared = []
    for idx in pivot_rows:
        row, _ = clear_row_denominators(list(rows[idx]))
        cleared.append(row)
    block = [[cleared[i][c] for c in pivot_cols] for i in range(rank)]
    det_block = bareiss_determinant(block)
    basis = []
    for fc in free_cols:
        vec = [Expr.const(0)] * ncols
        vec[fc] = det_block
        rhs = [cleared[i][fc] for i in range(rank)]
        for k in range(rank):
            replaced = [
                [rhs[i] if j == k else block[i][j] for j in range(rank)]
                for i in range(rank)
            ]
            vec[pivot_cols[k]] = -bareiss_determinant(replaced)
        basis.append(normalize_vector(vec))
    return basis


def normalize_vector(vec):
    """Canonical scale for a fraction-field vector defined up to a factor.

    Clears denominators, divides out the common polynomial factor, scales
    to jointly primitive integer coefficients, and makes the leading
    coefficient of the first nonzero entry positive.
    """
    from math import gcd as int_gcd

    from .poly import poly_gcd

    scale = Expr.const(1)
    for e in vec:
        if not e.is_polynomial():
            scale = scale * Expr(e.den)
    vec = [e * scale for e in vec]
    g = Poly.const(0)
    for e in vec:
        if not e.is_zero():
            g = poly_gcd(g, e.num)
        if g.is_const() and not g.is_zero():
            break
    if not g.is_zero() and not g.is_const():
        vec = [Expr(divmod_exact(e.num, g)) if not e.is_zero() else e for e in vec]
    den_lcm = 1
    for e in vec:
        for c in e.num.terms.values():
            den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
    num_gcd = 0
    for e in vec:
        for c in e.num.terms.values():
            num_gcd = int_gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
    if num_gcd:
        factor = Fraction(den_lcm, num_gcd)
        for e in vec:
            if not e.is_zero():
                if e.num.leading_coeff() * factor < 0:
                    factor = -factor
                break
        vec = [e * Expr.const(factor) for e in vec]
    return vec


def invert_matrix(m):
    """Inverse of a square Expr matrix; PreconditionError when singular."""
    n = len(m)
    a = [list(row) + [Expr.const(1) if i == j else Expr.const(0) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if not a[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            raise PreconditionError("matrix is singular")
        a[c], a[pivot_row] = a[pivot_row], a[c]
        pv = a[c][c]
        a[c] = [e / pv for e in a[c]]
        for i in range(n):
            if i != c and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[c])]
    return [row[n:] for row in a]


def determinant(m):
    n = len(m)
    a = [list(row) for row in m]
    det = Expr.const(1)
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if not a[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            return Expr.const(0)
        if pivot_row != c:
            a[c], a[pivot_row] = a[pivot_row], a[c]
            det = -det
        pv = a[c][c]
        det = det * pv
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] / pv
                a[i] = [u - f * v for u, v in zip(a[i], a[c])]
    return det


def rational_combination(target, generators):
    """Write a polynomial Expr as a Q-linear combination of polynomial Exprs.

    Returns the coefficient list, or None when no such combination exists.
    """
    for e in [target] + list(generators):
        if not e.is_polynomial():
            raise PreconditionError("rational_combination needs polynomial inputs")
    monomials = {}
    for e in generators:
        for mono in e.num.terms:
            monomials.setdefault(mono, len(monomials))
    for mono in target.num.terms:
        if mono not in monomials:
            return None
    nrows, ncols = len(monomials), len(generators)
    a = [[Fraction(0)] * (ncols + 1) for _ in range(nrows)]
    for j, e in enumerate(generators):
        for mono, c in e.num.terms.items():
            a[monomials[mono]][j] = c
    for mono, c in target.num.terms.items():
        a[monomials[mono]][ncols] = c
    # Gaussian elimination over Q
    r = 0
    pivots = []
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, nrows):
        if a[i][ncols] != 0:
            return None
    combo = [Fraction(0)] * ncols
    for pr, pc in pivots:
        combo[pc] = a[pr][ncols]
    return combo


def fraction_matrix_rank(rows):
    """Rank of a matrix of Fractions by exact elimination."""
    if not rows:
        return 0
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        for i in range(r + 1, nrows):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [u - f * v for u, v in zip(m[i], m[r])]
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank
