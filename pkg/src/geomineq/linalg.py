"""Small dense exact linear algebra over rationals.

Vectors are tuples of Rat, matrices are lists/tuples of row vectors.
Everything here is fraction-exact; the hull engine and the mixed volume
code lean on these primitives, so they are kept allocation-light rather
than pretty.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

from .rational import ONE, ZERO, Rat

Vector = tuple
Matrix = Sequence[Vector]


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def vdot(u: Vector, v: Vector):
    total = ZERO
    for a, b in zip(u, v):
        total = total + a * b
    return total


def _det_bareiss_int(rows) -> int:
    """Fraction-free determinant for integer matrices."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for j in range(i + 1, n):
                if a[j][i] != 0:
                    a[i], a[j] = a[j], a[i]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[i][i]
        for j in range(i + 1, n):
            aji = a[j][i]
            if aji == 0 and piv == prev:
                continue
            arow, irow = a[j], a[i]
            for k in range(i + 1, n):
                arow[k] = (arow[k] * piv - aji * irow[k]) // prev
            arow[i] = 0
        prev = piv
    return sign * a[-1][-1]


def det_exact(rows: Matrix):
    """Determinant; direct formulas up to 4x4, integer Bareiss when all
    entries are ints, rational Gaussian elimination otherwise."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if n == 4:
        (a, b, c, d), (e, f, g, h), (i, j, k, l), (m, o, p, q) = rows
        kq_lp = k * q - l * p
        jq_lo = j * q - l * o
        jp_ko = j * p - k * o
        iq_lm = i * q - l * m
        ip_km = i * p - k * m
        io_jm = i * o - j * m
        return (
            a * (f * kq_lp - g * jq_lo + h * jp_ko)
            - b * (e * kq_lp - g * iq_lm + h * ip_km)
            + c * (e * jq_lo - f * iq_lm + h * io_jm)
            - d * (e * jp_ko - f * ip_km + g * io_jm)
        )
    if all(type(x) is int for row in rows for x in row):
        return _det_bareiss_int(rows)
    return det(rows)


def _det3(a, b, c, d, e, f, g, h, i):
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def cross_normal(rows: Matrix, width: int):
    """Generalized cross product of width-1 rows in R^width: a vector
    orthogonal to all of them, zero iff the rows are rank deficient."""
    if width == 2:
        (a, b), = rows
        if a == 0 and b == 0:
            return None
        return (b, -a)
    if width == 3:
        (a, b, c), (d, e, f) = rows
        n0 = b * f - c * e
        n1 = c * d - a * f
        n2 = a * e - b * d
        if n0 == 0 and n1 == 0 and n2 == 0:
            return None
        return (n0, n1, n2)
    if width == 4:
        (r0, r1, r2, r3), (s0, s1, s2, s3), (t0, t1, t2, t3) = rows
        n0 = _det3(r1, r2, r3, s1, s2, s3, t1, t2, t3)
        n1 = -_det3(r0, r2, r3, s0, s2, s3, t0, t2, t3)
        n2 = _det3(r0, r1, r3, s0, s1, s3, t0, t1, t3)
        n3 = -_det3(r0, r1, r2, s0, s1, s2, t0, t1, t2)
        if n0 == 0 and n1 == 0 and n2 == 0 and n3 == 0:
            return None
        return (n0, n1, n2, n3)
    out = []
    sign = 1
    for j in range(width):
        minor = [r[:j] + r[j + 1 :] for r in rows]
        out.append(sign * det_exact(minor))
        sign = -sign
    if all(x == 0 for x in out):
        return None
    return tuple(out)


def det(rows: Matrix) -> Rat:
    """Exact determinant by Gaussian elimination with rational pivots."""
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    result = ONE
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return ZERO
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        result = result * pivot
        inv = ONE / pivot
        for r in range(col + 1, n):
            factor = a[r][col]
            if factor == 0:
                continue
            factor = factor * inv
            arow, prow = a[r], a[col]
            for c in range(col + 1, n):
                arow[c] = arow[c] - factor * prow[c]
    return result if sign > 0 else -result


class RowBasis:
    """Incremental reduced row echelon accumulator.

    Maintains a fully reduced basis (identity block on pivot columns,
    rows ordered by pivot column), so that for any w in the row span the
    span coordinates can be read off the pivot columns directly.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[Vector] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def residual(self, v: Vector) -> Vector:
        w = list(v)
        for row, piv in zip(self.rows, self.pivots):
            coeff = w[piv]
            if coeff != 0:
                for j in range(self.width):
                    w[j] = w[j] - coeff * row[j]
        return tuple(w)

    def add(self, v: Vector) -> bool:
        """Insert v; returns True when the rank increased."""
        w = list(self.residual(v))
        piv = None
        for j in range(self.width):
            if w[j] != 0:
                piv = j
                break
        if piv is None:
            return False
        inv = ONE / w[piv]
        wt = tuple(x * inv for x in w)
        # eliminate the new pivot from existing rows
        for i, row in enumerate(self.rows):
            coeff = row[piv]
            if coeff != 0:
                self.rows[i] = tuple(a - coeff * b for a, b in zip(row, wt))
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.rows.insert(pos, wt)
        self.pivots.insert(pos, piv)
        return True

    def coords(self, v: Vector) -> Vector | None:
        """Coordinates of v in the row basis, or None when v is outside
        the span."""
        coeffs = tuple(v[p] for p in self.pivots)
        recon = [ZERO] * self.width
        for c, row in zip(coeffs, self.rows):
            if c != 0:
                for j in range(self.width):
                    recon[j] = recon[j] + c * row[j]
        for a, b in zip(recon, v):
            if a != b:
                return None
        return coeffs

    def lift(self, coeffs: Vector) -> Vector:
        out = [ZERO] * self.width
        for c, row in zip(coeffs, self.rows):
            if c != 0:
                for j in range(self.width):
                    out[j] = out[j] + c * row[j]
        return tuple(out)


def rank(rows: Iterable[Vector], width: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    basis = RowBasis(width if width is not None else len(rows[0]))
    for r in rows:
        basis.add(r)
    return basis.rank


def nullspace_vector(rows: Matrix, width: int) -> Vector | None:
    """A nonzero vector orthogonal to all rows, when the nullspace is
    one dimensional; None otherwise."""
    basis = RowBasis(width)
    for r in rows:
        basis.add(r)
    if basis.rank != width - 1:
        return None
    pivset = set(basis.pivots)
    free = next(j for j in range(width) if j not in pivset)
    out = [ZERO] * width
    out[free] = ONE
    for row, piv in zip(basis.rows, basis.pivots):
        out[piv] = -row[free]
    return tuple(out)


def solve_square(a: Matrix, b: Vector) -> Vector | None:
    """Solve a x = b exactly; None when a is singular."""
    n = len(a)
    m = [list(row) + [bv] for row, bv in zip(a, b)]
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return None
        m[col], m[pivot_row] = m[pivot_row], m[col]
        inv = ONE / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return tuple(m[r][n] for r in range(n))


def gram_det(rows: Matrix) -> Rat:
    g = [[vdot(r1, r2) for r2 in rows] for r1 in rows]
    return det(g) if rows else ONE


def primitive_int_vector(v: Vector) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers (sign preserved)."""
    if all(type(x) is int for x in v):
        g = 0
        for x in v:
            g = gcd(g, x)
        if g > 1:
            return tuple(x // g for x in v)
        return tuple(v)
    dens = [rat_den(x) for x in v]
    lcm = 1
    for d in dens:
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def rat_den(x) -> int:
    return int(x.denominator)


def canonical_int_vector(v: Vector) -> tuple[int, ...]:
    """Primitive integer vector with first nonzero entry positive."""
    ints = primitive_int_vector(v)
    for x in ints:
        if x != 0:
            return ints if x > 0 else tuple(-y for y in ints)
    return ints
