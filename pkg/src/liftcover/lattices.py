"""Lattices, truncated affine lattices, translation groups, and exact
lattice-point enumeration.

Canonical forms come from the column-style Hermite normal form:
lower-triangular, positive diagonal, entries left of each pivot reduced
modulo the pivot.  Two lattices are equal iff their canonical HNF bases
are equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .linalg import (QMatrix, QVector, Subspace, inverse, nullspace,
                     orthogonal_complement, rank, solve)
from .polyhedra import HPolyhedron, lineality_space, poly_equal
from .rationals import ONE, ZERO, is_integer, qceil, qfloor, rat


class NotLatticeSubspaceError(ValueError):
    """The subspace has no basis of lattice vectors spanning it."""


# ---------------------------------------------------------------------------
# Integer Hermite normal form (column style)
# ---------------------------------------------------------------------------

def hnf_columns(mat: Sequence[Sequence[int]], ncols: int,
                with_transform: bool = False):
    """Column HNF of an integer matrix given as rows.

    Returns (pivot_columns_matrix_as_rows, rank) where the first ``rank``
    columns are the canonical basis and the rest are zero; with
    ``with_transform`` also returns the unimodular U with  M U = H.
    """
    w = [list(map(int, row)) for row in mat]
    nrows = len(w)
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)] \
        if with_transform else None

    def colop_sub(dst, src, q):
        # column dst -= q * column src
        for i in range(nrows):
            w[i][dst] -= q * w[i][src]
        if u is not None:
            for i in range(ncols):
                u[i][dst] -= q * u[i][src]

    def colswap(a, b):
        for i in range(nrows):
            w[i][a], w[i][b] = w[i][b], w[i][a]
        if u is not None:
            for i in range(ncols):
                u[i][a], u[i][b] = u[i][b], u[i][a]

    def colneg(a):
        for i in range(nrows):
            w[i][a] = -w[i][a]
        if u is not None:
            for i in range(ncols):
                u[i][a] = -u[i][a]

    col = 0
    for r in range(nrows):
        if col >= ncols:
            break
        # gcd-reduce row r over columns col..end until one nonzero remains
        while True:
            nz = [j for j in range(col, ncols) if w[r][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: (abs(w[r][j]), j))
            done = True
            for j in nz:
                if j == jmin:
                    continue
                q = w[r][j] // w[r][jmin]
                colop_sub(j, jmin, q)
                if w[r][j] != 0:
                    done = False
            if done:
                if jmin != col:
                    colswap(jmin, col)
                break
        if col < ncols and w[r][col] != 0:
            if w[r][col] < 0:
                colneg(col)
            piv = w[r][col]
            for j in range(col):
                q = w[r][j] // piv
                if q:
                    colop_sub(j, col, q)
            col += 1
    if with_transform:
        return w, col, u
    return w, col


def _to_integer_matrix(vectors: Sequence[Sequence]) -> Tuple[List[List[int]], int]:
    """Scale rational column vectors by one positive integer so every entry
    is an integer; returns (rows, scale)."""
    lcm = 1
    for v in vectors:
        for x in v:
            den = rat(x).denominator
            lcm = lcm * den // gcd(lcm, den)
    nrows = len(vectors[0]) if vectors else 0
    rows = [[int(rat(v[i]) * lcm) for v in vectors] for i in range(nrows)]
    return rows, lcm


def hnf_basis(vectors: Sequence[Sequence], ambient: int) -> List[QVector]:
    """Canonical basis of the lattice generated by rational vectors."""
    vecs = [QVector(v) for v in vectors if not QVector(v).is_zero()]
    if not vecs:
        return []
    rows, scale = _to_integer_matrix(vecs)
    h, rk = hnf_columns(rows, len(vecs))
    return [QVector([rat(h[i][j], scale) for i in range(ambient)])
            for j in range(rk)]


def integer_kernel(mat: QMatrix) -> List[QVector]:
    """Canonical basis of {z integer : M z = 0} for a rational matrix M."""
    if mat.n == 0:
        return []
    if mat.m == 0:
        rows = [[0] * mat.n]
    else:
        # row scaling does not change the kernel
        rows = []
        for r in mat:
            lcm = 1
            for x in r:
                den = x.denominator
                lcm = lcm * den // gcd(lcm, den)
            rows.append([int(x * lcm) for x in r])
    h, rk, u = hnf_columns(rows, mat.n, with_transform=True)
    kern = [QVector([u[i][j] for i in range(mat.n)])
            for j in range(rk, mat.n)]
    return [QVector(v) for v in
            hnf_basis(kern, mat.n)] if kern else []


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Lattice spanned by linearly independent rational columns."""

    ambient: int
    basis: QMatrix  # ambient x k, columns are the generators

    def __init__(self, ambient: int, basis_columns: Iterable):
        cols = [QVector(c) for c in basis_columns]
        if any(c.dim != ambient for c in cols):
            raise ValueError("basis vector of wrong dimension")
        mat = QMatrix.from_columns(cols, nrows=ambient)
        if cols and rank(mat) != len(cols):
            raise ValueError("lattice basis columns are not independent")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", mat)
        canon = hnf_basis(cols, ambient)
        object.__setattr__(self, "_canonical",
                           tuple(tuple(v) for v in canon))

    @property
    def rank(self) -> int:
        return self.basis.n

    def canonical_basis(self) -> Tuple:
        return self._canonical

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.ambient == other.ambient
                and self._canonical == other._canonical)

    def __hash__(self):
        return hash((self.ambient, self._canonical))

    def coefficients(self, v: Sequence) -> Optional[Tuple[int, ...]]:
        """Integer coefficients of v in this basis, or None."""
        if self.rank == 0:
            return () if all(x == 0 for x in v) else None
        z = solve(self.basis, v)
        if z is None or not all(is_integer(x) for x in z):
            return None
        if self.basis.matvec(z) != QVector(v):
            return None
        return tuple(int(x) for x in z)

    def contains(self, v: Sequence) -> bool:
        return self.coefficients(v) is not None

    def span(self) -> Subspace:
        from .linalg import span as _span
        return _span(self.basis.columns(), self.ambient)

    @staticmethod
    def standard(n: int) -> "Lattice":
        return Lattice(n, [QVector.unit(n, i) for i in range(n)])

    @staticmethod
    def from_generators(vectors: Iterable, ambient: int) -> "Lattice":
        return Lattice(ambient, hnf_basis(list(vectors), ambient))


def transform_lattice_basis(lat: Lattice, m: QMatrix) -> Lattice:
    return Lattice(m.m, [m.matvec(c) for c in lat.basis.columns()])


def subspace_lattice_basis(v: Subspace, lat: Lattice) -> Lattice:
    """Basis of the lattice  lat ∩ V  via an integer-kernel HNF computation.

    Raises NotLatticeSubspaceError when the intersection does not span V
    (i.e. V is not a lattice subspace of lat)."""
    if v.ambient != lat.ambient:
        raise ValueError("ambient dimension mismatch")
    if v.dim == 0 or lat.rank == 0:
        return Lattice(lat.ambient, [])
    comp = orthogonal_complement(v)
    if comp.dim == 0:
        result = lat
    else:
        cons = QMatrix(comp.basis, ncols=v.ambient)  # rows annihilate V
        prod = cons.matmul(lat.basis)  # d x k
        kern = integer_kernel(prod)
        result = Lattice(lat.ambient,
                         [lat.basis.matvec(z) for z in kern])
    if result.rank != v.dim:
        raise NotLatticeSubspaceError(
            f"lattice meets the subspace in rank {result.rank} < {v.dim}")
    return result


# ---------------------------------------------------------------------------
# Truncated affine lattices S = (shift + Lattice) ∩ hull
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedAffineLattice:
    """S = (shift + Λ) ∩ hull with hull = conv(S) a rational polyhedron.

    The lattice must be full rank in its ambient space; 0 is never in S
    because the shift is not a lattice point.  The assumption
    hull = conv((shift+Λ) ∩ hull) is spot-checked on a window by
    ``validate_window``, not proven.
    """

    shift: QVector
    lattice: Lattice
    hull: HPolyhedron

    def __post_init__(self):
        n = self.lattice.ambient
        if self.shift.dim != n or self.hull.n != n:
            raise ValueError("dimension mismatch between shift, lattice, hull")
        if self.lattice.rank != n:
            raise ValueError("S requires a full-rank lattice")
        if self.lattice.contains(self.shift):
            raise ValueError("shift must not be a lattice point (0 would lie in S)")

    @property
    def ambient(self) -> int:
        return self.lattice.ambient

    def contains(self, x: Sequence) -> bool:
        return (self.lattice.contains(QVector(x) - self.shift)
                and self.hull.contains(x))

    def same_set(self, other: "TruncatedAffineLattice") -> bool:
        return (self.lattice == other.lattice
                and self.lattice.contains(self.shift - other.shift)
                and poly_equal(self.hull, other.hull))

    @staticmethod
    def standard(shift: Sequence,
                 hull: Optional[HPolyhedron] = None) -> "TruncatedAffineLattice":
        s = QVector(shift)
        return TruncatedAffineLattice(
            s, Lattice.standard(s.dim),
            hull if hull is not None else HPolyhedron.whole_space(s.dim))


def enumerate_points(s: TruncatedAffineLattice, lo: Sequence,
                     hi: Sequence) -> List[QVector]:
    """All points of S inside the closed box [lo, hi], in lexicographic
    order.  The box must be bounded (finite rational bounds)."""
    n = s.ambient
    lo = QVector(lo)
    hi = QVector(hi)
    if any(l > h for l, h in zip(lo, hi)):
        return []
    binv = inverse(s.lattice.basis)
    corners = []
    for pick in itertools.product(*zip(lo, hi)):
        corners.append(binv.matvec(QVector(pick) - s.shift))
    zlo = [qceil(min(c[i] for c in corners)) for i in range(n)]
    zhi = [qfloor(max(c[i] for c in corners)) for i in range(n)]
    shift = list(s.shift)
    cols = [list(c) for c in s.lattice.basis.columns()]
    identity_basis = all(
        cols[j][i] == (1 if i == j else 0) for j in range(n) for i in range(n))
    hull_rows = [(list(q), d) for q, d in s.hull.rows()]
    pts = []
    for z in itertools.product(*(range(a, b + 1) for a, b in zip(zlo, zhi))):
        if identity_basis:
            x = [shift[i] + z[i] for i in range(n)]
        else:
            x = list(shift)
            for j, zj in enumerate(z):
                if zj:
                    cj = cols[j]
                    x = [xi + zj * cj[i] for i, xi in enumerate(x)]
        ok = True
        for i in range(n):
            if not (lo[i] <= x[i] <= hi[i]):
                ok = False
                break
        if not ok:
            continue
        for q, d in hull_rows:
            if sum(a * b for a, b in zip(q, x)) > d:
                ok = False
                break
        if ok:
            pts.append(tuple(x))
    pts.sort()
    from .linalg import _raw
    return [_raw(p) for p in pts]


def validate_window(s: TruncatedAffineLattice, radius: int = 5) -> dict:
    """Window-relative sanity report: S nonempty on [-radius, radius]^n and
    every hull facet either touches an enumerated point or is flagged."""
    n = s.ambient
    pts = enumerate_points(s, [-radius] * n, [radius] * n)
    facet_touched = []
    for q, d in s.hull.rows():
        facet_touched.append(any(q.dot(p) == d for p in pts))
    return {
        "window": radius,
        "points_found": len(pts),
        "nonempty_on_window": bool(pts),
        "facets_touched": facet_touched,
    }


# ---------------------------------------------------------------------------
# Translation group W_S
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WLattice:
    """The translation lattice of S together with its carrier subspace
    (the lineality space of conv(S), which the lattice spans)."""

    basis: QMatrix  # ambient x k columns
    carrier: Subspace

    def __post_init__(self):
        for c in self.basis.columns():
            if not self.carrier.contains(c):
                raise ValueError("W basis vector outside its carrier")
        if self.basis.n != self.carrier.dim:
            raise ValueError("W must span its carrier")

    @property
    def ambient(self) -> int:
        return self.carrier.ambient

    @property
    def rank(self) -> int:
        return self.basis.n

    def lattice(self) -> Lattice:
        return Lattice(self.ambient, self.basis.columns())


def translation_group(s: TruncatedAffineLattice) -> WLattice:
    """W_S as a lattice spanning the lineality space of conv(S), computed
    as (lineality of hull) ∩ Λ via the HNF integer kernel."""
    lin = lineality_space(s.hull)
    if lin.dim == 0:
        return WLattice(QMatrix.from_columns([], nrows=s.ambient),
                        Subspace.zero(s.ambient))
    wlat = subspace_lattice_basis(lin, s.lattice)
    return WLattice(wlat.basis, lin)


def fundamental_domain(w: WLattice) -> HPolyhedron:
    """Closed parallelepiped {sum t_i w_i : 0 <= t_i <= 1} as an
    H-polyhedron in carrier coordinates."""
    if w.rank == 0:
        raise ValueError("fundamental domain of the trivial lattice")
    cmat = w.carrier.matrix()  # ambient x k
    coords = []
    for col in w.basis.columns():
        t = solve(cmat, col)
        coords.append(t)
    x = QMatrix.from_columns(coords, nrows=w.rank)  # k x k
    xinv = inverse(x)
    rows = []
    for i in range(w.rank):
        rows.append((xinv[i], ONE))
        rows.append((-xinv[i], ZERO))
    return HPolyhedron.from_rows(rows, w.rank)


# ---------------------------------------------------------------------------
# Products and affine images of S
# ---------------------------------------------------------------------------

def product(s1: TruncatedAffineLattice,
            s2: TruncatedAffineLattice) -> TruncatedAffineLattice:
    """S1 x S2: block lattice, concatenated shift, product hull."""
    n1, n2 = s1.ambient, s2.ambient
    cols = []
    for c in s1.lattice.basis.columns():
        cols.append(QVector(list(c) + [0] * n2))
    for c in s2.lattice.basis.columns():
        cols.append(QVector([0] * n1 + list(c)))
    rows = [(QVector(list(q) + [0] * n2), d) for q, d in s1.hull.rows()]
    rows += [(QVector([0] * n1 + list(q)), d) for q, d in s2.hull.rows()]
    return TruncatedAffineLattice(
        QVector(list(s1.shift) + list(s2.shift)),
        Lattice(n1 + n2, cols),
        HPolyhedron.from_rows(rows, n1 + n2))


def transform_lattice(s: TruncatedAffineLattice, m: QMatrix,
                      shift: Sequence) -> TruncatedAffineLattice:
    """M(S) + m for invertible M: maps lattice, shift, and hull."""
    minv = inverse(m)  # raises on singular M
    from .polyhedra import affine_image
    return TruncatedAffineLattice(
        m.matvec(s.shift) + QVector(shift),
        transform_lattice_basis(s.lattice, m),
        affine_image(s.hull, minv, shift))
