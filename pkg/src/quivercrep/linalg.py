"""Exact linear algebra over the rationals.

Matrices are plain lists of rows whose entries are ``int`` or ``Fraction``.
Everything here is small (a few hundred rows at most), so straightforward
Gaussian elimination with exact arithmetic is fast enough and never lies
about a rank.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product ``a @ b``; ``inner`` is needed when ``a`` has zero columns."""
    if not a:
        return []
    n = len(a[0]) if inner is None else inner
    if n == 0:
        cols = len(b[0]) if b else 0
        return zeros(len(a), cols)
    cols = len(b[0])
    bt = [list(col) for col in zip(*b)]
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in bt] for row in a]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of an integer or rational matrix (fraction-free elimination)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    if any(isinstance(x, Fraction) for r in m for x in r):
        return len(_rref(m)[1])
    # integer Bareiss-style elimination: only row operations with integers
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][c]
        prow = m[rk]
        for i in range(rk + 1, len(m)):
            f = m[i][c]
            if f:
                row = [p * x - f * y for x, y in zip(m[i], prow)]
                g = 0
                for x in row:
                    if x:
                        g = _gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    row = [x // g for x in row]
                m[i] = row
        rk += 1
        if rk == len(m):
            break
    return rk


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}`` as a list of column vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``a x = b``, or ``None`` if the system is inconsistent.

    Free variables are set to zero.
    """
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, pivots = _rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return x


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m)]
    red, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def column_space(m: Matrix, nrows: int) -> Matrix:
    """Independent columns spanning the image, returned as an nrows x k matrix."""
    if not m or not m[0]:
        return [[] for _ in range(nrows)]
    red, pivots = _rref(transpose(m))
    cols = red  # rows of rref(m^T) span the column space
    return transpose(cols) if cols else [[] for _ in range(nrows)]


def span_dim(vectors: Sequence[Sequence]) -> int:
    return rank(vectors)


def kernel_basis(m: Matrix, ncols: int) -> list[list[Fraction]]:
    return nullspace(m, ncols)


def intersect_dim(a: Sequence[Sequence], b: Sequence[Sequence]) -> int:
    """dim(span a ∩ span b) for lists of vectors in the same space."""
    return rank(a) + rank(b) - rank(list(a) + list(b))


def random_invertible(n: int, rng: random.Random, bound: int = 50) -> Matrix:
    while True:
        m = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if rank(m) == n:
            return m
