"""Normalized lattice-free bodies B = {r : a_i . r <= 1}, their gauge,
freeness and maximality verification, and the projection that reduces an
unbounded B ∩ conv(S) to the polytope case.

A body is always stored with the origin in its interior (rhs identically
1), which is what every formula downstream assumes.  Verdicts are exact
whenever B ∩ conv(S) is a polytope or can be made one by projecting out
the span of its recession cone; otherwise they are window-relative and
say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .lattices import (Lattice, TruncatedAffineLattice, enumerate_points,
                       transform_lattice_basis)
from .linalg import (QMatrix, QVector, Subspace, inverse, nullspace,
                     orthogonal_complement, subspace_intersection)
from .polyhedra import (HPolyhedron, bounding_box, intersect, is_empty,
                        lineality_space, project, recession_cone)
from .rationals import ONE, ZERO, rat
from . import simplex


class BodyError(ValueError):
    """Invalid body description (non-facet rows, duplicates, bad dims)."""


@dataclass(frozen=True)
class SFreeBody:
    """Polyhedron {r : a_i . r <= 1} with 0 interior; every row must be
    facet-defining (validated with one LP per row)."""

    normals: Tuple[QVector, ...]

    def __init__(self, normals: Iterable, validate: bool = True):
        vecs = tuple(QVector(a) for a in normals)
        if not vecs:
            raise BodyError("a body needs at least one facet normal")
        n = vecs[0].dim
        if any(v.dim != n for v in vecs):
            raise BodyError("facet normals of mixed dimension")
        if len(set(map(tuple, vecs))) != len(vecs):
            raise BodyError("duplicate facet normals")
        object.__setattr__(self, "normals", vecs)
        object.__setattr__(self, "_poly", HPolyhedron(
            QMatrix(vecs, ncols=n), QVector([1] * len(vecs))))
        if validate:
            bad = [i for i in range(len(vecs)) if not self._facet_defining(i)]
            if bad:
                raise BodyError(
                    f"rows {bad} are not facet-defining; drop or fix them")

    def _facet_defining(self, i: int) -> bool:
        vecs = self.normals
        n = vecs[0].dim
        if vecs[i].is_zero():
            return False
        if len(vecs) == 1:
            return True
        # max t  s.t.  a_i.r = 1,  a_j.r + t <= 1 (j != i),  t <= 1
        rows = [list(vecs[j]) + [ONE] for j in range(len(vecs)) if j != i]
        rows.append([ZERO] * n + [ONE])
        rhs = [ONE] * len(rows)
        res = simplex.solve_lp([ZERO] * n + [ONE], rows, rhs,
                               eq_rows=[list(vecs[i]) + [ZERO]], eq_rhs=[ONE])
        return res.status == simplex.OPTIMAL and res.value > 0

    @property
    def dim(self) -> int:
        return self.normals[0].dim

    @property
    def facet_count(self) -> int:
        return len(self.normals)

    @property
    def polyhedron(self) -> HPolyhedron:
        return self._poly

    def contains(self, r: Sequence, strict: bool = False) -> bool:
        if strict:
            return all(a.dot(r) < 1 for a in self.normals)
        return all(a.dot(r) <= 1 for a in self.normals)

    @staticmethod
    def from_inequalities(a: QMatrix, b: Sequence) -> "SFreeBody":
        """Accept A x <= b with strictly positive b and renormalize rows."""
        bv = [rat(x) for x in b]
        if any(x <= 0 for x in bv):
            raise BodyError("renormalization needs strictly positive rhs; "
                            "translate the body so the origin is interior")
        return SFreeBody([QVector(q) * (ONE / d) for q, d in zip(a, bv)])


class PsiValue(NamedTuple):
    value: object
    argmax: int


def eval_psi(body: SFreeBody, r: Sequence) -> PsiValue:
    """Gauge of the body: max_i a_i . r, with the lowest argmax index."""
    r = QVector(r)
    best = None
    best_i = -1
    for i, a in enumerate(body.normals):
        v = a.dot(r)
        if best is None or v > best:
            best, best_i = v, i
    return PsiValue(best, best_i)


def psi(body: SFreeBody, r: Sequence):
    return eval_psi(body, r).value


@dataclass(frozen=True)
class FacetSpace:
    """L_B: the subspace where all facet normals take a common value."""

    subspace: Subspace


def facet_space(body: SFreeBody) -> FacetSpace:
    a0 = body.normals[0]
    rows = [a - a0 for a in body.normals[1:]]
    return FacetSpace(nullspace(QMatrix(rows, ncols=body.dim)))


# ---------------------------------------------------------------------------
# Reduction of an unbounded B ∩ conv(S) onto the complement of the span of
# its recession cone
# ---------------------------------------------------------------------------

class ReductionError(ValueError):
    """The recession-cone projection does not apply to this input."""


@dataclass(frozen=True)
class Reduction:
    """Projection data: reduced pair lives in coordinates t with ambient
    point V t (V = coord_basis, an orthogonal-complement basis of the
    dropped subspace)."""

    s: TruncatedAffineLattice
    body: SFreeBody
    dropped: Subspace
    coord_basis: QMatrix  # ambient x k
    proj: QMatrix         # k x ambient, t = proj . x

    def lift(self, t: Sequence) -> QVector:
        return self.coord_basis.matvec(t)

    def project_point(self, x: Sequence) -> QVector:
        return self.proj.matvec(x)


def _cone_span(cone: HPolyhedron) -> Subspace:
    """Linear span of {x : A x <= 0}: the nullspace of the implicit
    equality rows."""
    eq_rows = []
    for i in range(cone.m):
        q = cone.a[i]
        if q.is_zero():
            continue
        # min q.x over the cone, clipped by q.x >= -1
        res = simplex.solve_lp(list(q), [list(r) for r in cone.a] + [[-x for x in q]],
                               list(cone.b) + [ONE], sense="min")
        if res.status == simplex.OPTIMAL and res.value == 0:
            eq_rows.append(q)
    if not eq_rows:
        return Subspace.full(cone.n)
    return nullspace(QMatrix(eq_rows, ncols=cone.n))


def try_reduce(s: TruncatedAffineLattice,
               body: SFreeBody) -> Optional[Reduction]:
    """Project out N = span(rec(B ∩ conv(S))) when B ∩ conv(S) is unbounded
    and B is invariant along N.  Returns None when B ∩ conv(S) is already
    a polytope; raises ReductionError when the projection does not apply."""
    k = intersect(body.polyhedron, s.hull)
    if is_empty(k):
        raise ReductionError("B ∩ conv(S) is empty")
    if bounding_box(k) is not None:
        return None
    ncone = _cone_span(recession_cone(k))
    if ncone.dim == 0:
        raise ReductionError("unbounded intersection with trivial recession span")
    for a in body.normals:
        for d in ncone.basis:
            if a.dot(d) != 0:
                raise ReductionError(
                    "body is not invariant along the recession span; "
                    "cannot project the normals")
    v = orthogonal_complement(ncone)
    vmat = v.matrix()  # n x k
    vt = vmat.transpose()
    gram = vt.matmul(vmat)
    proj = inverse(gram).matmul(vt)  # k x n
    normals_bar = [vt.matvec(a) for a in body.normals]
    # distinct normals must stay distinct: they lie in N-perp already
    body_bar = SFreeBody(normals_bar)
    lat_cols = [proj.matvec(c) for c in s.lattice.basis.columns()]
    lat_bar = Lattice.from_generators(lat_cols, v.dim)
    if lat_bar.rank != v.dim:
        raise ReductionError("projected lattice is not full rank")
    hull_bar = project(s.hull, v)
    s_bar = TruncatedAffineLattice(proj.matvec(s.shift), lat_bar, hull_bar)
    red = Reduction(s_bar, body_bar, ncone, vmat, proj)
    kbar = intersect(body_bar.polyhedron, hull_bar)
    if bounding_box(kbar) is None:
        raise ReductionError("projection left B ∩ conv(S) unbounded")
    return red


def _lift_point(red: Reduction, s: TruncatedAffineLattice,
                t_point: QVector, inside: SFreeBody) -> Optional[QVector]:
    """Find a point of the original S in the fiber over ``t_point`` that is
    strictly inside ``inside``; searches expanding windows."""
    n = s.ambient
    anchor = red.lift(t_point)
    radius = 2
    while radius <= 2 ** 12:
        lo = [a - radius for a in anchor]
        hi = [a + radius for a in anchor]
        for p in enumerate_points(s, lo, hi):
            if red.project_point(p) == t_point and inside.contains(p, strict=True):
                return p
        radius *= 2
    return None


# ---------------------------------------------------------------------------
# Freeness and maximality verdicts
# ---------------------------------------------------------------------------

FREE = "free"
VIOLATED = "violated"
FREE_ON_WINDOW = "free-on-window"
MAXIMAL = "maximal"
FACET_WITHOUT_POINT = "facet-without-point"
MAXIMAL_ON_WINDOW = "maximal-on-window"


@dataclass(frozen=True)
class FreenessVerdict:
    kind: str
    violator: Optional[QVector] = None
    window: Optional[int] = None

    @property
    def is_free(self) -> bool:
        return self.kind in (FREE, FREE_ON_WINDOW)

    @property
    def exact(self) -> bool:
        return self.kind in (FREE, VIOLATED)


@dataclass(frozen=True)
class MaximalityVerdict:
    kind: str
    facet: Optional[int] = None
    facet_points: Tuple = ()
    window: Optional[int] = None

    @property
    def is_maximal(self) -> bool:
        return self.kind in (MAXIMAL, MAXIMAL_ON_WINDOW)

    @property
    def exact(self) -> bool:
        return self.kind in (MAXIMAL, FACET_WITHOUT_POINT)


def _candidate_points(s: TruncatedAffineLattice,
                      body: SFreeBody) -> Optional[List[QVector]]:
    """S-points of B ∩ conv(S) when that intersection is a polytope."""
    k = intersect(body.polyhedron, s.hull)
    if is_empty(k):
        return []
    bb = bounding_box(k)
    if bb is None:
        return None
    pts = enumerate_points(s, bb[0], bb[1])
    return [p for p in pts if body.contains(p)]


def is_s_free(body: SFreeBody, s: TruncatedAffineLattice,
              window: int = 5) -> FreenessVerdict:
    """int(B) ∩ S = ∅?  Exact when B ∩ conv(S) is bounded or reducible;
    window-relative otherwise."""
    if body.dim != s.ambient:
        raise ValueError("dimension mismatch")
    pts = _candidate_points(s, body)
    if pts is not None:
        for p in pts:
            if body.contains(p, strict=True):
                return FreenessVerdict(VIOLATED, violator=p)
        return FreenessVerdict(FREE)
    try:
        red = try_reduce(s, body)
    except ReductionError:
        red = None
    if red is not None:
        sub = is_s_free(red.body, red.s, window)
        if sub.kind == VIOLATED:
            lifted = _lift_point(red, s, sub.violator, body)
            return FreenessVerdict(VIOLATED, violator=lifted)
        return FreenessVerdict(sub.kind, window=sub.window)
    # window-relative fallback
    n = s.ambient
    for p in enumerate_points(s, [-window] * n, [window] * n):
        if body.contains(p, strict=True):
            return FreenessVerdict(VIOLATED, violator=p)
    return FreenessVerdict(FREE_ON_WINDOW, window=window)


def _facet_relint_points(body: SFreeBody, pts: List[QVector]):
    """For each facet i, the S-candidates with a_i.s = 1 and a_j.s < 1."""
    out = []
    for i, a in enumerate(body.normals):
        found = []
        for p in pts:
            if a.dot(p) == 1 and all(
                    body.normals[j].dot(p) < 1
                    for j in range(len(body.normals)) if j != i):
                found.append(p)
        out.append(tuple(found))
    return out


def is_maximal(body: SFreeBody, s: TruncatedAffineLattice,
               window: int = 5) -> MaximalityVerdict:
    """Inclusion-maximality of an S-free body: a point of S in the relative
    interior of every facet.  Callers should have checked S-freeness."""
    pts = _candidate_points(s, body)
    if pts is not None:
        per_facet = _facet_relint_points(body, pts)
        for i, found in enumerate(per_facet):
            if not found:
                return MaximalityVerdict(FACET_WITHOUT_POINT, facet=i,
                                         facet_points=tuple(per_facet))
        return MaximalityVerdict(MAXIMAL, facet_points=tuple(per_facet))
    try:
        red = try_reduce(s, body)
    except ReductionError:
        red = None
    if red is not None:
        sub = is_maximal(red.body, red.s, window)
        return MaximalityVerdict(sub.kind, facet=sub.facet, window=sub.window)
    n = s.ambient
    pts = [p for p in enumerate_points(s, [-window] * n, [window] * n)
           if body.contains(p)]
    per_facet = _facet_relint_points(body, pts)
    missing = [i for i, f in enumerate(per_facet) if not f]
    if missing:
        return MaximalityVerdict(MAXIMAL_ON_WINDOW, facet=missing[0],
                                 facet_points=tuple(per_facet), window=window)
    return MaximalityVerdict(MAXIMAL_ON_WINDOW, facet_points=tuple(per_facet),
                             window=window)


def check_l_b_transversality(body: SFreeBody,
                             s: TruncatedAffineLattice) -> None:
    """Runtime check: when B ∩ conv(S) is a polytope, L_B meets
    lin(conv(S)) only at 0."""
    k = intersect(body.polyhedron, s.hull)
    if is_empty(k) or bounding_box(k) is None:
        return
    lb = facet_space(body).subspace
    lin = lineality_space(s.hull)
    meet = subspace_intersection(lb, lin)
    if meet.dim != 0:
        raise AssertionError(
            "L_B meets lin(conv(S)) nontrivially although B ∩ conv(S) "
            "is a polytope; the input violates the structural assumptions")
