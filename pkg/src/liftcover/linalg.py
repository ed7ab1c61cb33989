"""Exact rational vectors, matrices, and Gaussian elimination.

QVector/QMatrix are thin immutable containers (tuple subclasses) with
dimension-checked arithmetic.  The elimination routines are deterministic:
pivots are always chosen as the first usable row/column in index order, so
identical inputs produce identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .rationals import ZERO, ONE, rat


class QVector(tuple):
    """Immutable rational vector."""

    def __new__(cls, entries: Iterable):
        return super().__new__(cls, [rat(e) for e in entries])

    @property
    def dim(self) -> int:
        return len(self)

    def _check(self, other) -> None:
        if len(self) != len(other):
            raise ValueError(f"dimension mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other):
        self._check(other)
        return _raw(a + b for a, b in zip(self, other))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        self._check(other)
        return _raw(a - b for a, b in zip(self, other))

    def __neg__(self):
        return _raw(-a for a in self)

    def __mul__(self, scalar):
        s = rat(scalar)
        return _raw(a * s for a in self)

    __rmul__ = __mul__

    def dot(self, other):
        self._check(other)
        return sum((a * b for a, b in zip(self, other)), ZERO)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def __repr__(self):
        return "QVector(%s)" % ", ".join(str(a) for a in self)

    @staticmethod
    def zero(n: int) -> "QVector":
        return QVector([0] * n)

    @staticmethod
    def unit(n: int, i: int) -> "QVector":
        return QVector([1 if j == i else 0 for j in range(n)])


def _raw(entries) -> "QVector":
    # fast path: entries are already exact rationals (results of arithmetic)
    return tuple.__new__(QVector, entries)


class QMatrix(tuple):
    """Immutable rational matrix, stored as a tuple of QVector rows."""

    def __new__(cls, rows: Iterable, ncols: Optional[int] = None):
        rws = tuple(QVector(r) for r in rows)
        if rws:
            n = len(rws[0])
            if any(len(r) != n for r in rws):
                raise ValueError("rows of unequal length")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit column count")
            n = ncols
        obj = super().__new__(cls, rws)
        obj._n = n
        return obj

    @property
    def m(self) -> int:
        return len(self)

    @property
    def n(self) -> int:
        return self._n

    def row(self, i: int) -> QVector:
        return self[i]

    def col(self, j: int) -> QVector:
        return QVector(r[j] for r in self)

    def matvec(self, v: Sequence) -> QVector:
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        return _raw(r.dot(v) for r in self)

    def matmul(self, other: "QMatrix") -> "QMatrix":
        if self.n != other.m:
            raise ValueError("dimension mismatch")
        cols = [other.col(j) for j in range(other.n)]
        return QMatrix([[r.dot(c) for c in cols] for r in self], ncols=other.n)

    def transpose(self) -> "QMatrix":
        return QMatrix([self.col(j) for j in range(self.n)], ncols=self.m)

    def __add__(self, other):
        if self.m != other.m or self.n != other.n:
            raise ValueError("dimension mismatch")
        return QMatrix([r + s for r, s in zip(self, other)], ncols=self.n)

    def __sub__(self, other):
        if self.m != other.m or self.n != other.n:
            raise ValueError("dimension mismatch")
        return QMatrix([r - s for r, s in zip(self, other)], ncols=self.n)

    def scale(self, scalar) -> "QMatrix":
        s = rat(scalar)
        return QMatrix([r * s for r in self], ncols=self.n)

    def __repr__(self):
        return "QMatrix(%d x %d)" % (self.m, self.n)

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix([QVector.unit(n, i) for i in range(n)], ncols=n)

    @staticmethod
    def zero(m: int, n: int) -> "QMatrix":
        return QMatrix([[0] * n for _ in range(m)], ncols=n)

    @staticmethod
    def from_columns(cols: Iterable, nrows: Optional[int] = None) -> "QMatrix":
        cols = [QVector(c) for c in cols]
        if not cols:
            if nrows is None:
                raise ValueError("empty column list needs an explicit row count")
            return QMatrix([[] for _ in range(nrows)], ncols=0)
        return QMatrix(zip(*cols), ncols=len(cols))

    def columns(self):
        return [self.col(j) for j in range(self.n)]


def rref(mat: QMatrix):
    """Reduced row echelon form; returns (R, pivot column indices)."""
    rows = [list(r) for r in mat]
    m, n = mat.m, mat.n
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return QMatrix(rows, ncols=n), tuple(pivots)


def rank(mat: QMatrix) -> int:
    return len(rref(mat)[1])


def solve(a: QMatrix, b: Sequence) -> Optional[QVector]:
    """Some exact solution of A x = b, or None when the system is inconsistent.

    Underdetermined systems get the canonical solution with all free
    variables set to zero.
    """
    if len(b) != a.m:
        raise ValueError("dimension mismatch")
    aug = QMatrix([list(r) + [bv] for r, bv in zip(a, b)] if a.m else [],
                  ncols=a.n + 1)
    red, pivots = rref(aug)
    if a.n in pivots:
        return None
    x = [ZERO] * a.n
    for i, c in enumerate(pivots):
        x[c] = red[i][a.n]
    return QVector(x)


def nullspace_basis(a: QMatrix):
    """Canonical basis of {x : A x = 0} (one vector per free column of the RREF)."""
    red, pivots = rref(a)
    pivset = set(pivots)
    free = [c for c in range(a.n) if c not in pivset]
    basis = []
    for f in free:
        v = [ZERO] * a.n
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(QVector(v))
    return basis


def inverse(a: QMatrix) -> QMatrix:
    if a.m != a.n:
        raise ValueError("not square")
    aug = QMatrix([list(r) + [ONE if i == j else ZERO for j in range(a.n)]
                   for i, r in enumerate(a)], ncols=2 * a.n)
    red, pivots = rref(aug)
    if list(pivots) != list(range(a.n)):
        raise ValueError("matrix is singular")
    return QMatrix([r[a.n:] for r in red], ncols=a.n)


def determinant(a: QMatrix):
    if a.m != a.n:
        raise ValueError("not square")
    rows = [list(r) for r in a]
    n = a.n
    det = ONE
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        inv = ONE / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


@dataclass(frozen=True)
class Subspace:
    """Linear subspace given by a tuple of linearly independent basis vectors."""

    ambient: int
    basis: tuple

    def __init__(self, ambient: int, basis: Iterable):
        vecs = tuple(QVector(v) for v in basis)
        if any(v.dim != ambient for v in vecs):
            raise ValueError("basis vector of wrong ambient dimension")
        if vecs and rank(QMatrix(vecs, ncols=ambient)) != len(vecs):
            raise ValueError("basis vectors are not linearly independent")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", vecs)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> QMatrix:
        """Basis vectors as columns (ambient x dim)."""
        return QMatrix.from_columns(self.basis, nrows=self.ambient)

    def contains(self, v: Sequence) -> bool:
        if self.dim == 0:
            return all(x == 0 for x in v)
        return solve(self.matrix(), v) is not None

    def coords(self, v: Sequence) -> Optional[QVector]:
        """Coordinates of v in this basis, or None when v is outside the span."""
        if self.dim == 0:
            return QVector([]) if all(x == 0 for x in v) else None
        return solve(self.matrix(), v)

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(n, [QVector.unit(n, i) for i in range(n)])

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace(n, [])


def nullspace(a: QMatrix) -> Subspace:
    """Canonical Subspace {x : A x = 0}."""
    return Subspace(a.n, nullspace_basis(a))


def span(vectors: Iterable, ambient: int) -> Subspace:
    """Subspace spanned by arbitrary vectors; basis extracted greedily in input order."""
    vecs = [QVector(v) for v in vectors]
    if not vecs:
        return Subspace.zero(ambient)
    basis = [vecs[i] for i in _independent_rows(vecs, ambient)]
    return Subspace(ambient, basis)


def _independent_rows(vecs, ambient):
    """Indices of a maximal independent subset, greedily in input order."""
    chosen = []
    for i, v in enumerate(vecs):
        trial = chosen + [i]
        if rank(QMatrix([vecs[j] for j in trial], ncols=ambient)) == len(trial):
            chosen.append(i)
    return chosen


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient != b.ambient:
        raise ValueError("ambient dimension mismatch")
    return span(list(a.basis) + list(b.basis), a.ambient)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """V ∩ W, via the kernel of the stacked coefficient system."""
    if a.ambient != b.ambient:
        raise ValueError("ambient dimension mismatch")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient)
    # x in both spans: x = A s = B t; solve [A | -B] (s,t) = 0, read x = A s.
    stacked = QMatrix(
        [list(av) + [-bv for bv in brow] for av, brow in
         zip(a.matrix(), b.matrix())],
        ncols=a.dim + b.dim)
    kern = nullspace_basis(stacked)
    amat = a.matrix()
    vecs = [amat.matvec(QVector(k[: a.dim])) for k in kern]
    return span(vecs, a.ambient)


def orthogonal_complement(v: Subspace) -> Subspace:
    if v.dim == 0:
        return Subspace.full(v.ambient)
    return nullspace(QMatrix(v.basis, ncols=v.ambient))
