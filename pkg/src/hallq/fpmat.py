"""Small dense linear algebra over prime fields.

Matrices are tuples of row tuples with entries reduced mod p; a matrix with
zero rows is (), one with zero columns has empty row tuples. Everything here
is exact modular arithmetic, no floating point anywhere.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Sequence

Matrix = tuple[tuple[int, ...], ...]


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    if not a:
        return ()
    inner = len(a[0])
    cols = len(b[0]) if b else 0
    if inner == 0:
        return zeros(len(a), cols)
    out = []
    for row in a:
        out.append(
            tuple(sum(row[k] * b[k][j] for k in range(inner)) % p for j in range(cols))
        )
    return tuple(out)


def mat_vec(a: Matrix, v: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) % p for row in a)


def mat_inv(a: Matrix, p: int) -> Matrix:
    """Inverse by Gauss-Jordan; raises ValueError on a singular matrix."""
    n = len(a)
    if n == 0:
        return ()
    aug = [list(a[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], p - 2, p)
        aug[col] = [x * inv % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form of the row list; returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    ncols = len(mat[0]) if mat else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] % p), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        mat[r] = [x * inv % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[0])


def reduce_by_basis(
    v: Sequence[int], basis: Matrix, pivots: tuple[int, ...], p: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Reduce v against an RREF basis.

    Returns (coords, residue): coords are the coefficients on the basis rows
    and residue is v minus the span part. v lies in the span iff residue is 0.
    """
    coords = []
    res = list(v)
    for row, c in zip(basis, pivots):
        f = res[c] % p
        coords.append(f)
        if f:
            res = [(x - f * y) % p for x, y in zip(res, row)]
    return tuple(coords), tuple(x % p for x in res)


def subspaces(n: int, k: int, p: int) -> Iterator[Matrix]:
    """All k-dimensional subspaces of F_p^n as RREF bases, each exactly once.

    Enumeration order: pivot column sets lexicographically, then free entries
    in little-endian counter order. Deterministic across runs.
    """
    if k < 0 or k > n:
        return
    if k == 0:
        yield ()
        return
    for pivots in combinations(range(n), k):
        free_pos = []
        for r, c in enumerate(pivots):
            for j in range(c + 1, n):
                if j not in pivots:
                    free_pos.append((r, j))
        for vals in product(range(p), repeat=len(free_pos)):
            rows = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, j), x in zip(free_pos, vals):
                rows[r][j] = x
            yield tuple(tuple(row) for row in rows)


def nonpivot_columns(n: int, pivots: tuple[int, ...]) -> tuple[int, ...]:
    pset = set(pivots)
    return tuple(j for j in range(n) if j not in pset)
