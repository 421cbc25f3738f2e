"""Exterior-algebra substrate: wedge products, Hodge star, the duality
pairing, and representations induced on exterior powers.

Conventions used throughout the package:

* points of d-space are handled in homogeneous coordinates, i.e. as vectors
  of length d+1 (last coordinate 1 for affine points);
* a grade-k element is stored as its coordinate vector of length C(d+1, k),
  indexed by strictly increasing k-tuples of {1, ..., d+1} in lexicographic
  order;
* scalars are exact ``fractions.Fraction`` values by default; ``complex``
  entries are accepted wherever a group character forces them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence, Union

from .errors import InputError

Scalar = Union[Fraction, int, float, complex]


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (int, Fraction))


# ---------------------------------------------------------------------------
# lexicographic indexing of strictly increasing tuples


class LexIndex:
    """Bijection between strictly increasing k-tuples of {1, ..., n} and
    positions 0 .. C(n, k)-1 in lexicographic order."""

    def __init__(self, n: int, k: int):
        if not 0 <= k <= n:
            raise InputError(f"grade {k} out of range for n={n}")
        self.n = n
        self.k = k
        self._tuples = tuple(combinations(range(1, n + 1), k))
        self._pos = {t: i for i, t in enumerate(self._tuples)}

    def __len__(self) -> int:
        return len(self._tuples)

    def tuples(self) -> tuple[tuple[int, ...], ...]:
        return self._tuples

    def position(self, t: Sequence[int]) -> int:
        try:
            return self._pos[tuple(t)]
        except KeyError:
            raise InputError(f"{tuple(t)} is not an increasing {self.k}-tuple of 1..{self.n}")

    def tuple_at(self, i: int) -> tuple[int, ...]:
        return self._tuples[i]


@lru_cache(maxsize=None)
def lex_index(n: int, k: int) -> LexIndex:
    return LexIndex(n, k)


def complement_sign(index_tuple: tuple[int, ...], n: int) -> tuple[tuple[int, ...], int]:
    """Complement of an increasing tuple in {1..n} and the sign of the
    permutation (i_1 .. i_k j_1 .. j_{n-k}) -> (1 .. n)."""
    chosen = set(index_tuple)
    comp = tuple(i for i in range(1, n + 1) if i not in chosen)
    seq = index_tuple + comp
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return comp, (-1) ** inversions


# ---------------------------------------------------------------------------
# small exact/inexact determinants


def det(rows: Sequence[Sequence[Scalar]]) -> Scalar:
    """Determinant of a square matrix.

    Exact inputs (int/Fraction) go through fraction-free Bareiss
    elimination; float/complex inputs use plain elimination with partial
    pivoting.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if all(is_exact(x) for r in rows for x in r):
        return _det_bareiss([[Fraction(x) for x in r] for r in rows])
    return _det_pivoted([list(r) for r in rows])


def _det_bareiss(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _det_pivoted(m: list[list[complex]]) -> complex:
    n = len(m)
    detval = 1.0 + 0.0j
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(m[i][k]))
        if abs(m[piv][k]) == 0.0:
            return 0.0j
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            detval = -detval
        detval *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return detval


# ---------------------------------------------------------------------------
# extensors


@dataclass(frozen=True)
class Extensor:
    """A grade-k element of the exterior power of R^{d+1} (or C^{d+1}),
    stored as its length-C(d+1,k) coordinate vector in lex order."""

    d: int
    k: int
    coords: tuple[Scalar, ...]

    def __post_init__(self):
        expected = comb(self.d + 1, self.k)
        if len(self.coords) != expected:
            raise InputError(
                f"grade-{self.k} extensor in dimension {self.d} needs "
                f"{expected} coordinates, got {len(self.coords)}"
            )

    @property
    def index(self) -> LexIndex:
        return lex_index(self.d + 1, self.k)

    def coord(self, t: Sequence[int]) -> Scalar:
        return self.coords[self.index.position(t)]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def __add__(self, other: "Extensor") -> "Extensor":
        self._check_shape(other)
        return Extensor(self.d, self.k, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Extensor") -> "Extensor":
        self._check_shape(other)
        return Extensor(self.d, self.k, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Extensor":
        return Extensor(self.d, self.k, tuple(-a for a in self.coords))

    def scale(self, c: Scalar) -> "Extensor":
        return Extensor(self.d, self.k, tuple(c * a for a in self.coords))

    def dot(self, other: "Extensor") -> Scalar:
        """Plain coordinatewise inner product of two same-grade elements."""
        self._check_shape(other)
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def _check_shape(self, other: "Extensor") -> None:
        if (self.d, self.k) != (other.d, other.k):
            raise InputError("extensor shape mismatch")


def zero_extensor(d: int, k: int) -> Extensor:
    return Extensor(d, k, (Fraction(0),) * comb(d + 1, k))


def wedge(vectors: Sequence[Sequence[Scalar]], d: int) -> Extensor:
    """Wedge product of k vectors of R^{d+1}: the coordinate at the
    increasing tuple (i_1,...,i_k) is the k x k minor of the stacked-column
    matrix on those rows."""
    k = len(vectors)
    if not 1 <= k <= d + 1:
        raise InputError(f"cannot wedge {k} vectors in dimension d={d}")
    for v in vectors:
        if len(v) != d + 1:
            raise InputError(f"expected homogeneous vectors of length {d + 1}, got {len(v)}")
    idx = lex_index(d + 1, k)
    coords = []
    for t in idx.tuples():
        rows = [[vectors[c][i - 1] for c in range(k)] for i in t]
        coords.append(det(rows))
    return Extensor(d, k, tuple(coords))


def hodge_star(x: Extensor) -> Extensor:
    """Hodge star: grade k -> grade d+1-k, with the sign of the permutation
    sending (I, complement(I)) to (1, ..., d+1) on each basis element."""
    n = x.d + 1
    out_idx = lex_index(n, n - x.k)
    out = [Fraction(0)] * len(out_idx)
    for pos, t in enumerate(x.index.tuples()):
        comp, sign = complement_sign(t, n)
        out[out_idx.position(comp)] = sign * x.coords[pos]
    return Extensor(x.d, n - x.k, tuple(out))


def cap_product(p: Extensor, q: Extensor) -> Scalar:
    """Duality pairing of complementary grades:
    sum over increasing tuples I of sign(I, complement) * p_I * q_{comp(I)}.

    For decomposable arguments this equals the determinant of the
    (d+1) x (d+1) matrix assembling the defining vectors.
    """
    if p.d != q.d or p.k + q.k != p.d + 1:
        raise InputError("cap product needs complementary grades in the same dimension")
    n = p.d + 1
    q_idx = q.index
    total: Scalar = Fraction(0)
    for pos, t in enumerate(p.index.tuples()):
        comp, sign = complement_sign(t, n)
        total += sign * p.coords[pos] * q.coords[q_idx.position(comp)]
    return total


# ---------------------------------------------------------------------------
# square matrices and induced representations


@dataclass(frozen=True)
class SquareMatrix:
    """Immutable square matrix over exact rationals or complex floats."""

    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise InputError("square matrix rows have inconsistent lengths")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Scalar]]) -> "SquareMatrix":
        return SquareMatrix(tuple(tuple(r) for r in rows))

    @staticmethod
    def identity(n: int) -> "SquareMatrix":
        return SquareMatrix(
            tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n))
        )

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Scalar:
        return self.rows[i][j]

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.n != other.n:
            raise InputError("matrix size mismatch")
        cols = list(zip(*other.rows))
        return SquareMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows
            )
        )

    def apply(self, vec: Sequence[Scalar]) -> tuple[Scalar, ...]:
        if len(vec) != self.n:
            raise InputError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.rows)

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix(tuple(zip(*self.rows)))

    def scale(self, c: Scalar) -> "SquareMatrix":
        return SquareMatrix(tuple(tuple(c * x for x in row) for row in self.rows))

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.n != other.n:
            raise InputError("matrix size mismatch")
        return SquareMatrix(
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows))
        )

    def trace(self) -> Scalar:
        return sum(self.rows[i][i] for i in range(self.n))

    def diagonal(self) -> tuple[Scalar, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def is_identity(self, tol: float = 0.0) -> bool:
        for i in range(self.n):
            for j in range(self.n):
                want = 1 if i == j else 0
                x = self.rows[i][j]
                if is_exact(x):
                    if x != want:
                        return False
                elif abs(x - want) > tol:
                    return False
        return True

    def is_orthogonal(self, tol: float = 1e-12) -> bool:
        return (self.transpose() @ self).is_identity(tol=tol)

    def is_diagonal_pm_one(self) -> bool:
        for i in range(self.n):
            for j in range(self.n):
                x = self.rows[i][j]
                if i == j:
                    if x not in (1, -1):
                        return False
                elif x != 0:
                    return False
        return True


def block_diag_one(a: SquareMatrix) -> SquareMatrix:
    """Augment a d x d matrix to (d+1) x (d+1) by a trailing 1 (homogeneous
    coordinates fix the last axis)."""
    n = a.n
    rows = [tuple(a.rows[i]) + (Fraction(0),) for i in range(n)]
    rows.append(tuple(Fraction(0) for _ in range(n)) + (Fraction(1),))
    return SquareMatrix(tuple(rows))


def induced_rep(a: SquareMatrix, k: int) -> SquareMatrix:
    """Action induced on the grade-k exterior power: entry [I, J] is the
    k x k minor of ``a`` on rows I and columns J.  Satisfies
    (A B)^(k) = A^(k) B^(k) and A^(k)(v_1 ^ ... ^ v_k) = (A v_1) ^ ... ^ (A v_k).
    """
    idx = lex_index(a.n, k)
    rows = []
    for I in idx.tuples():
        row = []
        for J in idx.tuples():
            minor = [[a.rows[i - 1][j - 1] for j in J] for i in I]
            row.append(det(minor))
        rows.append(tuple(row))
    return SquareMatrix(tuple(rows))
