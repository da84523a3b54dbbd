"""Exact linear algebra over the rationals.

Matrices are plain lists of rows whose entries are ``int`` or ``Fraction``.
Rank uses fraction-free (Bareiss) elimination on integer-scaled rows, which
keeps intermediate sizes bounded by minors of the input; everything else is
ordinary Gauss-Jordan on ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Number = int | Fraction
Matrix = Sequence[Sequence[Number]]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise TypeError(f"expected an exact rational, got {value!r}")
    return Fraction(value)


def integer_row(row: Sequence[Number]) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    if den == 1:
        return [int(x) for x in row]
    return [int(x * den) for x in row]


def primitive(vec: Sequence[int]) -> list[int]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g in (0, 1):
        return list(vec)
    return [x // g for x in vec]


def rank(rows: Matrix) -> int:
    m = [integer_row(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        top = m[r]
        p = top[c]
        for i in range(r + 1, len(m)):
            row = m[i]
            a = row[c]
            # Sylvester's identity: the division is exact even with skipped columns.
            if a:
                m[i] = [0] * (c + 1) + [(p * row[j] - a * top[j]) // prev for j in range(c + 1, ncols)]
            else:
                m[i] = [0] * (c + 1) + [(p * row[j]) // prev for j in range(c + 1, ncols)]
        prev = p
        r += 1
        if r == len(m):
            break
    return r


def rank_fraction(rows: Matrix) -> int:
    """Plain Gaussian elimination over ``Fraction``; slower reference for :func:`rank`."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot column indices."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def solve(a: Matrix, b: Sequence[Number]) -> list[Fraction] | None:
    """Solve a square system exactly; ``None`` when the matrix is singular."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def nullspace(rows: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}`` as a list of column vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -red[r][f]
        basis.append(vec)
    return basis


def dot(u: Sequence[Number], v: Sequence[Number]):
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def matmul(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]
