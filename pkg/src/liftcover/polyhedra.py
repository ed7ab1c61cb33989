"""H-polyhedra over exact rationals and the operations the rest of the
package is built on: feasibility, interior points, bounding boxes,
Fourier-Motzkin projection, and region subtraction.

Everything is deterministic.  LPs are solved by the exact simplex with
Bland's rule; row orders and pivot choices are canonical, so repeated runs
produce byte-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .linalg import QMatrix, QVector, Subspace, nullspace
from .rationals import ONE, ZERO, rat
from . import simplex


class EmptyPolyhedronError(ValueError):
    """Raised when an operation requires a nonempty polyhedron."""


class UnboundedError(ValueError):
    """Raised when an operation requires a bounded polyhedron."""


@dataclass(frozen=True)
class HPolyhedron:
    """{x in R^n : A x <= b}.  Rows may be redundant; redundancy removal is
    an explicit operation, never an invariant."""

    a: QMatrix
    b: QVector

    def __post_init__(self):
        if self.a.m != len(self.b):
            raise ValueError("row count of A does not match length of b")

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def m(self) -> int:
        return self.a.m

    def rows(self) -> List[Tuple[QVector, object]]:
        return [(self.a[i], self.b[i]) for i in range(self.m)]

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        if strict:
            return all(self.a[i].dot(x) < self.b[i] for i in range(self.m))
        return all(self.a[i].dot(x) <= self.b[i] for i in range(self.m))

    @staticmethod
    def from_rows(rows: Iterable[Tuple[Sequence, object]], n: int) -> "HPolyhedron":
        rows = list(rows)
        return HPolyhedron(QMatrix([r for r, _ in rows], ncols=n),
                           QVector([d for _, d in rows]))

    @staticmethod
    def whole_space(n: int) -> "HPolyhedron":
        return HPolyhedron(QMatrix([], ncols=n), QVector([]))

    @staticmethod
    def box(lo: Sequence, hi: Sequence) -> "HPolyhedron":
        n = len(lo)
        rows = []
        for i in range(n):
            rows.append((QVector.unit(n, i), hi[i]))
            rows.append((-QVector.unit(n, i), -rat(lo[i])))
        return HPolyhedron.from_rows(rows, n)

    def __repr__(self):
        return f"HPolyhedron({self.m} rows, dim {self.n})"


def intersect(p: HPolyhedron, q: HPolyhedron) -> HPolyhedron:
    if p.n != q.n:
        raise ValueError("ambient dimension mismatch")
    return HPolyhedron.from_rows(p.rows() + q.rows(), p.n)


def with_rows(p: HPolyhedron, rows: Iterable[Tuple[Sequence, object]]) -> HPolyhedron:
    return HPolyhedron.from_rows(p.rows() + list(rows), p.n)


def feasible_point(p: HPolyhedron) -> Optional[QVector]:
    res = simplex.solve_lp([ZERO] * p.n, list(p.a), list(p.b))
    return res.x if res.status == simplex.OPTIMAL else None


def is_empty(p: HPolyhedron) -> bool:
    return feasible_point(p) is None


def interior_point(p: HPolyhedron) -> Optional[QVector]:
    """A point satisfying every row strictly, via the slack-maximizing LP,
    or None when int(P) is empty.  Vacuous all-zero rows do not constrain
    the set and are ignored."""
    rows = []
    for q, d in p.rows():
        if q.is_zero():
            if d < 0:
                return None  # empty set
            continue  # 0.x <= d with d >= 0: vacuous
        rows.append((q, d))
    n = p.n
    if not rows:
        return QVector.zero(n)
    # max t  s.t.  q.x + t <= d for each row,  t <= 1
    lp_rows = [list(q) + [ONE] for q, _ in rows] + [[ZERO] * n + [ONE]]
    lp_rhs = [d for _, d in rows] + [ONE]
    c = [ZERO] * n + [ONE]
    res = simplex.solve_lp(c, lp_rows, lp_rhs)
    if res.status != simplex.OPTIMAL or res.value <= 0:
        return None
    return QVector(res.x[:n])


def maximize(p: HPolyhedron, c: Sequence) -> simplex.LPResult:
    return simplex.solve_lp(c, list(p.a), list(p.b))


def minimize(p: HPolyhedron, c: Sequence) -> simplex.LPResult:
    return simplex.solve_lp(c, list(p.a), list(p.b), sense="min")


def bounding_box(p: HPolyhedron):
    """Exact per-coordinate (lo, hi), None when some coordinate is
    unbounded.  Raises EmptyPolyhedronError on an empty polyhedron."""
    lo, hi = [], []
    for i in range(p.n):
        c = [ZERO] * p.n
        c[i] = ONE
        res = simplex.solve_lp(c, list(p.a), list(p.b))
        if res.status == simplex.INFEASIBLE:
            raise EmptyPolyhedronError("bounding box of empty polyhedron")
        if res.status == simplex.UNBOUNDED:
            return None
        hi.append(res.value)
        res = simplex.solve_lp(c, list(p.a), list(p.b), sense="min")
        if res.status == simplex.UNBOUNDED:
            return None
        lo.append(res.value)
    if p.n == 0 and feasible_point(p) is None:
        raise EmptyPolyhedronError("bounding box of empty polyhedron")
    return QVector(lo), QVector(hi)


def lineality_space(p: HPolyhedron) -> Subspace:
    return nullspace(p.a)


def recession_cone(p: HPolyhedron) -> HPolyhedron:
    return HPolyhedron(p.a, QVector.zero(p.m))


def translate(p: HPolyhedron, v: Sequence) -> HPolyhedron:
    return HPolyhedron(p.a, QVector(d + q.dot(v) for q, d in p.rows()))


def affine_image(p: HPolyhedron, m_inv: QMatrix, m_vec: Sequence) -> HPolyhedron:
    """Image {M x + m : x in P}, given the INVERSE of M."""
    anew = p.a.matmul(m_inv)
    shift = anew.matvec(m_vec)
    return HPolyhedron(anew, QVector(d + s for d, s in zip(p.b, shift)))


def _canonical_row(q: Sequence, d) -> Optional[Tuple]:
    """Scale a row by a positive rational so entries are coprime integers.
    Returns None for vacuous rows (zero normal, nonnegative rhs)."""
    q = [rat(x) for x in q]
    d = rat(d)
    if all(x == 0 for x in q):
        return None if d >= 0 else ("infeasible",)
    lcm = 1
    for x in q + [d]:
        den = x.denominator
        lcm = lcm * den // gcd(lcm, den)
    ints = [int(x * lcm) for x in q] + [int(d * lcm)]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(v // g for v in ints)


def normalized_rows(p: HPolyhedron) -> List[Tuple]:
    """Deduplicated, canonically scaled integer rows (drops vacuous rows)."""
    seen = set()
    out = []
    for q, d in p.rows():
        c = _canonical_row(q, d)
        if c is None:
            continue
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def remove_redundancy(p: HPolyhedron) -> HPolyhedron:
    """Irredundant description of a nonempty polyhedron (one LP per row).

    Rows are examined in canonical order; a row is dropped when it is
    implied by the remaining ones."""
    canon = normalized_rows(p)
    if any(r == ("infeasible",) for r in canon):
        raise EmptyPolyhedronError("cannot reduce an empty polyhedron")
    rows = [(QVector(r[:-1]), rat(r[-1])) for r in canon]
    keep = list(range(len(rows)))
    i = 0
    while i < len(keep):
        idx = keep[i]
        q, d = rows[idx]
        others = [rows[j] for j in keep if j != idx]
        lp_rows = [list(r) for r, _ in others] + [list(q)]
        lp_rhs = [e for _, e in others] + [d + 1]
        res = simplex.solve_lp(list(q), lp_rows, lp_rhs)
        if res.status == simplex.OPTIMAL and res.value <= d:
            keep.pop(i)
        else:
            i += 1
    return HPolyhedron.from_rows([rows[j] for j in keep], p.n)


def canonical_form(p: HPolyhedron) -> Tuple:
    """Canonical tuple-of-rows key for a full-dimensional polyhedron: the
    irredundant description is unique up to row scaling/order, both of
    which are normalized away."""
    reduced = remove_redundancy(p)
    return tuple(sorted(normalized_rows(reduced)))


def poly_contains_poly(outer: HPolyhedron, inner: HPolyhedron) -> bool:
    """inner ⊆ outer, decided by one LP per row of outer."""
    if is_empty(inner):
        return True
    for q, d in outer.rows():
        res = simplex.solve_lp(list(q), list(inner.a), list(inner.b))
        if res.status == simplex.UNBOUNDED or (
                res.status == simplex.OPTIMAL and res.value > d):
            return False
    return True


def poly_equal(p: HPolyhedron, q: HPolyhedron) -> bool:
    return poly_contains_poly(p, q) and poly_contains_poly(q, p)


def subtract(p: HPolyhedron, q: HPolyhedron, reduce: bool = True) -> List[HPolyhedron]:
    """Full-dimensional cells covering P minus int(Q).

    For Q = {q_i.x <= d_i}, emits P ∩ {q_1.x >= d_1},
    P ∩ {q_1.x <= d_1, q_2.x >= d_2}, ... keeping only cells with
    nonempty interior.  Requires P bounded and full-dimensional.
    """
    if p.n != q.n:
        raise ValueError("ambient dimension mismatch")
    if bounding_box(p) is None:
        raise UnboundedError("subtract requires a bounded minuend")
    if interior_point(p) is None:
        raise ValueError("subtract requires a full-dimensional minuend")
    cells = []
    prefix: List[Tuple[QVector, object]] = []
    for qi, di in q.rows():
        cell = HPolyhedron.from_rows(
            p.rows() + prefix + [(-qi, -di)], p.n)
        if interior_point(cell) is not None:
            cells.append(remove_redundancy(cell) if reduce else cell)
        prefix.append((qi, di))
    return cells


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination and projection
# ---------------------------------------------------------------------------

def _direction_canonical(q: Sequence, d):
    """Scale a row by a positive rational so the normal is a primitive
    integer vector; returns (normal key, scaled rhs), or None when the
    normal is zero."""
    if all(x == 0 for x in q):
        return None
    lcm = 1
    for x in q:
        den = x.denominator
        lcm = lcm * den // gcd(lcm, den)
    ints = [int(x * lcm) for x in q]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(v // g for v in ints), rat(d) * rat(lcm, g)


def _fm_eliminate_one(rows: List[Tuple[List, object]], j: int):
    """Eliminate variable j from inequality rows q.x <= d."""
    pos, neg, zero = [], [], []
    for q, d in rows:
        cj = q[j]
        if cj > 0:
            pos.append((q, d))
        elif cj < 0:
            neg.append((q, d))
        else:
            zero.append((q, d))
    out = list(zero)
    for qp, dp in pos:
        for qn, dn in neg:
            lam, mu = -qn[j], qp[j]
            comb = [lam * a + mu * b for a, b in zip(qp, qn)]
            out.append((comb, lam * dp + mu * dn))
    # syntactic cleanup: dedupe by normal direction, keeping the tightest rhs
    best = {}
    order = []
    infeasible = False
    for q, d in out:
        c = _direction_canonical(q, rat(d))
        if c is None:
            if d < 0:
                infeasible = True
            continue
        key, dval = c
        if key not in best:
            best[key] = dval
            order.append(key)
        elif dval < best[key]:
            best[key] = dval
    width = len(rows[0][0]) if rows else 0
    result = [([rat(x) for x in key], best[key]) for key in order]
    if infeasible:
        result.append(([ZERO] * width, rat(-1)))
    return result


def eliminate(p: HPolyhedron, kill: Sequence[int],
              eq_rows: Sequence[Tuple[Sequence, object]] = ()) -> HPolyhedron:
    """Project away the variables in ``kill`` (indices into 0..n-1),
    honoring additional equality rows.  Equalities are used for Gaussian
    substitution first; remaining kill-variables go through
    Fourier-Motzkin.  The result lives on the kept coordinates, in their
    original order."""
    n = p.n
    kill = sorted(set(kill))
    keep = [j for j in range(n) if j not in set(kill)]
    work = [([rat(x) for x in row], rat(d)) for row, d in eq_rows]
    ineqs = [([rat(x) for x in q], rat(d)) for q, d in p.rows()]

    # Gaussian substitution: use each equality to eliminate one kill-variable
    # from everything downstream.
    remaining_kill = list(kill)
    unused_eqs = []
    while work:
        row, d = work.pop(0)
        piv = next((j for j in remaining_kill if row[j] != 0), None)
        if piv is None:
            unused_eqs.append((row, d))
            continue
        pv = row[piv]
        sol = [-x / pv for x in row]  # x_piv = d/pv + sum_j sol[j] x_j
        sol[piv] = ZERO
        dd = d / pv

        def subst(target, piv=piv, sol=sol, dd=dd):
            trow, td = target
            f = trow[piv]
            if f == 0:
                return target
            new_row = [a + f * s for a, s in zip(trow, sol)]
            new_row[piv] = ZERO
            return new_row, td - f * dd

        ineqs = [subst(t) for t in ineqs]
        work = [subst(t) for t in work]
        remaining_kill.remove(piv)

    # Leftover equalities involve only kept variables: emit as paired rows.
    for row, d in unused_eqs:
        ineqs.append((list(row), d))
        ineqs.append(([-x for x in row], -d))

    rows = [(list(q), d) for q, d in ineqs]
    for j in remaining_kill:
        rows = _fm_eliminate_one(rows, j)

    out_rows = [([q[j] for j in keep], d) for q, d in rows]
    return HPolyhedron.from_rows(out_rows, len(keep))


def project(p: HPolyhedron, v: Subspace) -> HPolyhedron:
    """Orthogonal projection of P onto the subspace V, written in the
    coordinates of V's basis (t such that the projected point is V t)."""
    if v.ambient != p.n:
        raise ValueError("subspace ambient dimension mismatch")
    k, n = v.dim, p.n
    if k == 0:
        if is_empty(p):
            raise EmptyPolyhedronError("projection of empty polyhedron")
        return HPolyhedron.whole_space(0)
    vmat = v.matrix()  # n x k
    gram = vmat.transpose().matmul(vmat)  # k x k
    # Variables (t, x); equalities  G t - V^T x = 0;  inequalities on x.
    ineq_rows = [([ZERO] * k + list(q), d) for q, d in p.rows()]
    combined = HPolyhedron.from_rows(ineq_rows, k + n)
    eqs = []
    vt = vmat.transpose()  # k x n
    for i in range(k):
        eqs.append((list(gram[i]) + [-x for x in vt[i]], ZERO))
    return eliminate(combined, kill=list(range(k, k + n)), eq_rows=eqs)


# ---------------------------------------------------------------------------
# 2-d vertex extraction (only what SVG rendering needs)
# ---------------------------------------------------------------------------

def vertices_2d(p: HPolyhedron) -> List[QVector]:
    """Vertices of a bounded 2-d polyhedron in counterclockwise order."""
    if p.n != 2:
        raise ValueError("vertices_2d is for 2-d polyhedra")
    if bounding_box(p) is None:
        raise UnboundedError("vertices of an unbounded polyhedron")
    from .linalg import solve
    cand = set()
    rows = p.rows()
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            qi, qj = rows[i][0], rows[j][0]
            if qi[0] * qj[1] - qi[1] * qj[0] == 0:
                continue  # parallel normals never define a vertex
            mat = QMatrix([qi, qj], ncols=2)
            sol = solve(mat, QVector([rows[i][1], rows[j][1]]))
            if sol is not None and p.contains(sol):
                cand.add(tuple(sol))
    pts = [QVector(c) for c in sorted(cand)]
    if len(pts) <= 2:
        return pts
    cx = sum((x for x, _ in pts), ZERO) / len(pts)
    cy = sum((y for _, y in pts), ZERO) / len(pts)

    def half(v):
        dx, dy = v[0] - cx, v[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    import functools

    def cmp(u, v):
        hu, hv = half(u), half(v)
        if hu != hv:
            return -1 if hu < hv else 1
        cross = (u[0] - cx) * (v[1] - cy) - (u[1] - cy) * (v[0] - cx)
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return -1 if u < v else (1 if u > v else 0)

    return sorted(pts, key=functools.cmp_to_key(cmp))
