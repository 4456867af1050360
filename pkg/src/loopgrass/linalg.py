"""Exact linear algebra over Q.

Thin layer over python-flint. Rational matrices are cleared of denominators
row by row and reduced fraction-free over Z; nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from flint import fmpq, fmpq_mat, fmpz_mat


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    x = fmpq(x)
    return Fraction(int(x.p), int(x.q))


def qmat(rows: Sequence[Sequence], nrows: int | None = None, ncols: int | None = None) -> fmpq_mat:
    """Build an fmpq_mat from nested sequences of ints/Fractions/fmpq."""
    rows = [list(r) for r in rows]
    if nrows is None:
        nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if nrows == 0 or ncols == 0:
        return fmpq_mat(nrows, ncols)
    return fmpq_mat(nrows, ncols, [_q(x) for r in rows for x in r])


def _q(x) -> fmpq:
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    return fmpq(x)


def zeros(m: int, n: int) -> fmpq_mat:
    return fmpq_mat(m, n)


def identity(n: int) -> fmpq_mat:
    out = fmpq_mat(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def is_zero(M: fmpq_mat) -> bool:
    return all(x == 0 for x in M.entries())


def column(M: fmpq_mat, j: int) -> fmpq_mat:
    out = fmpq_mat(M.nrows(), 1)
    for i in range(M.nrows()):
        out[i, 0] = M[i, j]
    return out


def submatrix(M: fmpq_mat, rows: Sequence[int], cols: Sequence[int]) -> fmpq_mat:
    out = fmpq_mat(len(rows), len(cols))
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            out[a, b] = M[i, j]
    return out


def vstack(blocks: Sequence[fmpq_mat], ncols: int) -> fmpq_mat:
    m = sum(B.nrows() for B in blocks)
    out = fmpq_mat(m, ncols)
    r0 = 0
    for B in blocks:
        for i in range(B.nrows()):
            for j in range(ncols):
                out[r0 + i, j] = B[i, j]
        r0 += B.nrows()
    return out


def hstack(blocks: Sequence[fmpq_mat], nrows: int) -> fmpq_mat:
    n = sum(B.ncols() for B in blocks)
    out = fmpq_mat(nrows, n)
    c0 = 0
    for B in blocks:
        for i in range(nrows):
            for j in range(B.ncols()):
                out[i, c0 + j] = B[i, j]
        c0 += B.ncols()
    return out


def integer_rows(M: fmpq_mat) -> fmpz_mat:
    """Scale each row by its denominator lcm; the row space is unchanged."""
    m, n = M.nrows(), M.ncols()
    out = fmpz_mat(m, n)
    for i in range(m):
        den = 1
        for j in range(n):
            q = int(M[i, j].q)
            den = den * q // gcd(den, q)
        for j in range(n):
            x = M[i, j] * den
            out[i, j] = x.p
    return out


def rank(M: fmpq_mat) -> int:
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return integer_rows(M).rank()


def rref(M: fmpq_mat) -> tuple[fmpq_mat, list[int]]:
    """Reduced row echelon form and pivot columns."""
    if M.nrows() == 0 or M.ncols() == 0:
        return fmpq_mat(M.nrows(), M.ncols()), []
    R, rk = M.rref()
    pivots = []
    for i in range(rk):
        j = pivots[-1] + 1 if pivots else 0
        while R[i, j] == 0:
            j += 1
        pivots.append(j)
    return R, pivots


def primitive(v: Iterable) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector whose first nonzero entry is positive."""
    v = [to_fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def nullspace(M: fmpq_mat) -> list[tuple[int, ...]]:
    """Basis of {x : Mx = 0} as primitive integer vectors, via fraction-free reduction.

    The basis is the one read off the reduced echelon form (one vector per free
    column), so it is canonical for a given matrix.
    """
    m, n = M.nrows(), M.ncols()
    if n == 0:
        return []
    if m == 0:
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    R, _den, rk = integer_rows(M).rref()
    pivots = []
    for i in range(rk):
        j = pivots[-1] + 1 if pivots else 0
        while R[i, j] == 0:
            j += 1
        pivots.append(j)
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        # x_free = 1, x_pivot(i) = -R[i, free] / R[i, pivot(i)]
        x = [Fraction(0)] * n
        x[free] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -Fraction(int(R[i, free]), int(R[i, p]))
        basis.append(primitive(x))
    return basis


def matvec_is_zero(M: fmpq_mat, v: Sequence) -> bool:
    col = qmat([[x] for x in v], len(v), 1)
    return is_zero(M * col)


def solve_unique(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(A)
    x = qmat(A).solve(qmat([[y] for y in b], n, 1))
    return [to_fraction(x[i, 0]) for i in range(n)]


def leading_minors_positive(B: Sequence[Sequence[Fraction]]) -> bool:
    n = len(B)
    for k in range(1, n + 1):
        if qmat([row[:k] for row in B[:k]]).det() <= 0:
            return False
    return True
