"""Exact and floating rank/nullspace computations on dense matrices.

Matrices are plain lists of rows.  The exact path clears denominators per
row (rank is invariant under row scaling) and runs fraction-free Bareiss
elimination over the integers; the complex path counts singular values
above ``2**-40 * max(m, n) * sigma_max``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .algebra import Scalar, is_exact
from .errors import InputError

FLOAT_RANK_TOL = 2.0 ** -40


def _integer_rows(rows: Sequence[Sequence[Scalar]]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        denom = 1
        for x in fr:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        out.append([int(x * denom) for x in fr])
    return out


def rank_exact(rows: Sequence[Sequence[Scalar]]) -> int:
    """Rank over the rationals by fraction-free Gaussian elimination."""
    m = _integer_rows(rows)
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    if any(len(r) != ncols for r in m):
        raise InputError("ragged matrix")
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, nrows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != row:
            m[row], m[piv] = m[piv], m[row]
        pivot = m[row][col]
        for i in range(row + 1, nrows):
            mi, mr = m[i], m[row]
            f = mi[col]
            for j in range(col + 1, ncols):
                mi[j] = (mi[j] * pivot - f * mr[j]) // prev
            mi[col] = 0
        prev = pivot
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def rref_exact(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rref, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, nrows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for i in range(nrows):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    return m, pivots


def nullspace_exact(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Deterministic rational basis of the right kernel (one vector per free
    column of the RREF)."""
    if not rows:
        return [
            tuple(Fraction(1) if i == t else Fraction(0) for i in range(ncols))
            for t in range(ncols)
        ]
    rref, pivots = rref_exact(rows)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(tuple(vec))
    return basis


def rank_complex(rows: Sequence[Sequence[Scalar]]) -> int:
    import numpy as np

    if not rows or not rows[0]:
        return 0
    arr = np.array([[complex(x) for x in r] for r in rows], dtype=complex)
    s = np.linalg.svd(arr, compute_uv=False)
    if s.size == 0:
        return 0
    tol = FLOAT_RANK_TOL * max(arr.shape) * float(s[0])
    return int((s > tol).sum())


def matrix_rank(rows: Sequence[Sequence[Scalar]]) -> int:
    """Rank of a dense matrix: exact elimination when every entry is an
    int/Fraction, singular-value counting otherwise."""
    if not rows:
        return 0
    if all(is_exact(x) for r in rows for x in r):
        return rank_exact(rows)
    return rank_complex(rows)
