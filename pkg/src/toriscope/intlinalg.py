"""Exact integer vectors, matrices and lattice normal forms.

All vectors are tuples of Python ints (arbitrary precision), matrices are
sequences of equal-length row vectors.  Nothing here ever touches floats;
rational intermediates use ``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Matrix = tuple[Vec, ...]


# ---------------------------------------------------------------------------
# vector helpers
# ---------------------------------------------------------------------------

def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(k: int, a: Vec) -> Vec:
    return tuple(k * x for x in a)


def dot(a: Vec, b: Vec) -> int:
    return sum(x * y for x, y in zip(a, b, strict=True))


def is_zero(a: Vec) -> bool:
    return all(x == 0 for x in a)


def content(a: Vec) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in a:
        g = gcd(g, x)
    return g


def primitive(v: Vec) -> Vec:
    """Divide out the content; the zero vector is rejected."""
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    if g == 1:
        return tuple(v)
    return tuple(x // g for x in v)


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def hermite_normal_form(rows: Sequence[Vec]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form with transformation matrix.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``.  Pivot
    columns are assigned right-to-left to rows bottom-up, so a nonsingular
    square input yields a lower-triangular ``H`` with positive diagonal and
    the entries below each pivot reduced into ``[0, pivot)``.
    """
    if not rows:
        raise ValueError("empty matrix has no Hermite normal form")
    n = len(rows)
    m = len(rows[0])
    H = [list(r) for r in rows]
    if any(len(r) != m for r in H):
        raise ValueError("ragged matrix")
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def combine(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j
        Hi, Hj = H[i], H[j]
        for k in range(m):
            Hi[k] -= q * Hj[k]
        Ui, Uj = U[i], U[j]
        for k in range(n):
            Ui[k] -= q * Uj[k]

    r = n - 1
    for c in range(m - 1, -1, -1):
        if r < 0:
            break
        live = [i for i in range(r + 1) if H[i][c] != 0]
        if not live:
            continue
        while len(live) > 1:
            i0 = min(live, key=lambda i: abs(H[i][c]))
            for i in live:
                if i != i0:
                    combine(i, i0, H[i][c] // H[i0][c])
            live = [i for i in range(r + 1) if H[i][c] != 0]
        i0 = live[0]
        if i0 != r:
            H[i0], H[r] = H[r], H[i0]
            U[i0], U[r] = U[r], U[i0]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r + 1, n):
            q = H[i][c] // H[r][c]
            if q:
                combine(i, r, q)
        r -= 1

    return tuple(tuple(x) for x in H), tuple(tuple(x) for x in U)


def hnf_rows(rows: Sequence[Vec]) -> list[Vec]:
    """Nonzero rows of the row HNF, without the transformation matrix.

    Same pivot convention as :func:`hermite_normal_form` but an order of
    magnitude cheaper on tall matrices; use when only the row lattice
    matters.
    """
    if not rows:
        return []
    n = len(rows)
    m = len(rows[0])
    H = [list(r) for r in rows]
    r = n - 1
    for c in range(m - 1, -1, -1):
        if r < 0:
            break
        live = [i for i in range(r + 1) if H[i][c] != 0]
        if not live:
            continue
        while len(live) > 1:
            i0 = min(live, key=lambda i: abs(H[i][c]))
            for i in live:
                if i != i0:
                    q = H[i][c] // H[i0][c]
                    Hi, H0 = H[i], H[i0]
                    for k in range(m):
                        Hi[k] -= q * H0[k]
            live = [i for i in range(r + 1) if H[i][c] != 0]
        i0 = live[0]
        if i0 != r:
            H[i0], H[r] = H[r], H[i0]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
        for i in range(r + 1, n):
            q = H[i][c] // H[r][c]
            if q:
                Hi, Hr = H[i], H[r]
                for k in range(m):
                    Hi[k] -= q * Hr[k]
        r -= 1
    return [tuple(row) for row in H if any(x != 0 for x in row)]


def hnf_pivots(H: Sequence[Vec]) -> list[tuple[int, int]]:
    """Pivot positions of an HNF produced by :func:`hermite_normal_form`.

    Listed bottom row first (the processing order), as ``(row, col)`` pairs.
    """
    pivots = []
    for i in range(len(H) - 1, -1, -1):
        row = H[i]
        last = None
        for j in range(len(row) - 1, -1, -1):
            if row[j] != 0:
                last = j
                break
        if last is not None:
            pivots.append((i, last))
    return pivots


# ---------------------------------------------------------------------------
# determinants and rank
# ---------------------------------------------------------------------------

def determinant(rows: Sequence[Vec]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matrix_rank(rows: Sequence[Vec]) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    if not rows:
        return 0
    a = [list(r) for r in rows]
    n, m = len(a), len(a[0])
    rank = 0
    row = 0
    for col in range(m):
        piv = None
        for i in range(row, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        for i in range(row + 1, n):
            if a[i][col] != 0:
                f = a[i][col]
                g = a[row][col]
                for j in range(col, m):
                    a[i][j] = a[i][j] * g - f * a[row][j]
        rank += 1
        row += 1
        if row == n:
            break
    return rank


def is_unimodular_basis(vs: Sequence[Vec]) -> bool:
    """True iff the vectors are a basis of the full integer lattice."""
    if not vs:
        raise ValueError("empty vector list")
    d = len(vs[0])
    if len(vs) != d:
        raise ValueError(f"need exactly {d} vectors, got {len(vs)}")
    return abs(determinant(vs)) == 1


def adjugate_and_det(rows: Sequence[Vec]) -> tuple[Matrix, int]:
    """Adjugate matrix and determinant: ``M @ adj == det * I``.

    The adjugate is returned with a sign flip when ``det < 0`` so that the
    returned determinant is always positive (input must be nonsingular).
    Computed as det times the rational inverse (Gauss-Jordan).
    """
    n = len(rows)
    det = determinant(rows)
    if det == 0:
        raise ValueError("singular matrix has no adjugate inverse")
    a = [
        [Fraction(rows[i][j]) for j in range(n)]
        + [Fraction(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    pos = abs(det)
    adj = []
    for i in range(n):
        row = []
        for j in range(n):
            x = a[i][n + j] * pos
            if x.denominator != 1:
                raise AssertionError("adjugate entries must be integral")
            row.append(int(x))
        adj.append(tuple(row))
    return tuple(adj), pos


# ---------------------------------------------------------------------------
# kernels, spans, lattice membership
# ---------------------------------------------------------------------------

def right_kernel(rows: Sequence[Vec]) -> list[Vec]:
    """Basis of ``{x : r . x == 0 for every row r}``.

    The basis spans the full (saturated) kernel lattice.
    """
    if not rows:
        raise ValueError("kernel of an empty matrix is ambiguous")
    m = len(rows[0])
    cols = [tuple(r[j] for r in rows) for j in range(m)]
    H, U = hermite_normal_form(cols)
    return [U[i] for i in range(len(H)) if is_zero(H[i])]


def span_saturation(rows: Sequence[Vec]) -> list[Vec]:
    """Basis of the saturated lattice (rational span of rows) ∩ Z^m."""
    nonzero = [r for r in rows if not is_zero(r)]
    if not nonzero:
        return []
    perp = right_kernel(nonzero)
    if not perp:
        m = len(nonzero[0])
        return [tuple(1 if i == j else 0 for j in range(m)) for i in range(m)]
    return right_kernel(perp)


def in_row_lattice(basis: Sequence[Vec], v: Vec) -> bool:
    """Decide membership of ``v`` in the integer row span of ``basis``."""
    if not basis:
        return is_zero(v)
    H = hnf_rows(basis)
    w = list(v)
    for r, c in hnf_pivots(H):
        q = w[c] // H[r][c]
        if q:
            for k in range(len(w)):
                w[k] -= q * H[r][k]
    return all(x == 0 for x in w)


def lattice_index(vs: Sequence[Vec]) -> int:
    """Index of the integer row span inside the full lattice Z^d.

    Returns 0 when the rows do not span Q^d.
    """
    if not vs:
        raise ValueError("empty vector list")
    d = len(vs[0])
    H = hnf_rows(vs)
    pivots = hnf_pivots(H)
    if len(pivots) < d:
        return 0
    idx = 1
    for r, c in pivots:
        idx *= H[r][c]
    return idx


def solve_linear(rows: Sequence[Vec], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution ``x`` of ``A x = b`` (rows of A given), or None.

    Underdetermined systems get free variables set to zero.
    """
    n = len(rows)
    if n == 0:
        return ()
    m = len(rows[0])
    a = [[Fraction(x) for x in rows[i]] + [Fraction(rhs[i])] for i in range(n)]
    piv_cols: list[int] = []
    row = 0
    for col in range(m):
        piv = None
        for i in range(row, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for i in range(n):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        piv_cols.append(col)
        row += 1
        if row == n:
            break
    for i in range(row, n):
        if a[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for r, col in enumerate(piv_cols):
        x[col] = a[r][m]
    return tuple(x)


def express_in_basis(basis: Sequence[Vec], v: Vec) -> Vec | None:
    """Integer coordinates of ``v`` in the given (independent) row basis.

    Returns None if ``v`` is outside the rational span or the coordinates
    are not integral.
    """
    cols = [tuple(b[j] for b in basis) for j in range(len(v))]
    sol = solve_linear(cols, v)
    if sol is None:
        return None
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def spans_full_lattice(vs: Iterable[Vec]) -> bool:
    """True iff the integer span of the vectors is all of Z^d."""
    vs = [v for v in vs if not is_zero(v)]
    if not vs:
        return False
    return abs(lattice_index(vs)) == 1
