"""The three covering-preserving operations: invertible affine images of
(S, B) pairs, weighted coproducts of bodies, and limit-family verification;
plus the per-facet linear maps that carry spindles onto their images.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .bodies import SFreeBody, is_maximal, is_s_free
from .covering import CoveringReport, check_covering
from .lattices import TruncatedAffineLattice, transform_lattice
from .linalg import QMatrix, QVector, inverse
from .polyhedra import bounding_box, intersect, is_empty
from .rationals import ONE, rat


@dataclass(frozen=True)
class AffineMap:
    """x -> M x + m with M invertible."""

    m_mat: QMatrix
    m_vec: QVector

    def __init__(self, m_mat, m_vec):
        mat = QMatrix(m_mat, ncols=len(m_vec)) if not isinstance(m_mat, QMatrix) else m_mat
        vec = QVector(m_vec)
        if mat.m != mat.n or mat.m != vec.dim:
            raise ValueError("affine map needs a square matrix matching m")
        inv = inverse(mat)  # raises on singular input
        object.__setattr__(self, "m_mat", mat)
        object.__setattr__(self, "m_vec", vec)
        object.__setattr__(self, "_inv", inv)

    @property
    def inverse_matrix(self) -> QMatrix:
        return self._inv

    def apply(self, x: Sequence) -> QVector:
        return self.m_mat.matvec(x) + self.m_vec

    def inverse_map(self) -> "AffineMap":
        return AffineMap(self._inv, -self._inv.matvec(self.m_vec))

    @staticmethod
    def translation(m_vec: Sequence) -> "AffineMap":
        v = QVector(m_vec)
        return AffineMap(QMatrix.identity(v.dim), v)


class OriginNotInteriorError(ValueError):
    """T(B) must keep the origin interior; carries the failing facet."""

    def __init__(self, message, facet):
        super().__init__(message)
        self.facet = facet


def transformed_normals(body: SFreeBody, t: AffineMap) -> Tuple[QVector, ...]:
    """Normals of M(B) + m:  (M^-1)^T a_i / (1 + a_i . M^-1 m)."""
    minv = t.inverse_matrix
    minv_t = minv.transpose()
    minv_m = minv.matvec(t.m_vec)
    out = []
    for i, a in enumerate(body.normals):
        denom = ONE + a.dot(minv_m)
        if denom <= 0:
            raise OriginNotInteriorError(
                f"facet {i}: transformed body does not keep 0 interior", i)
        out.append(minv_t.matvec(a) * (ONE / denom))
    return tuple(out)


def affine_transform(s: TruncatedAffineLattice, body: SFreeBody,
                     t: AffineMap) -> Tuple[TruncatedAffineLattice, SFreeBody]:
    """(T(S), T(B)) with T(B) renormalized to rhs 1."""
    if body.dim != s.ambient or t.m_vec.dim != s.ambient:
        raise ValueError("dimension mismatch")
    body_new = SFreeBody(transformed_normals(body, t))
    s_new = transform_lattice(s, t.m_mat, t.m_vec)
    return s_new, body_new


def facet_map(body: SFreeBody, t: AffineMap, i: int, r: Sequence) -> QVector:
    """Per-facet linear map  r -> M r + (a_i . r) m."""
    if not 0 <= i < body.facet_count:
        raise IndexError("facet index out of range")
    r = QVector(r)
    return t.m_mat.matvec(r) + t.m_vec * body.normals[i].dot(r)


def facet_map_matrix(body: SFreeBody, t: AffineMap, i: int) -> QMatrix:
    """Matrix of the facet map:  M + m a_i^T."""
    if not 0 <= i < body.facet_count:
        raise IndexError("facet index out of range")
    a = body.normals[i]
    rows = []
    for k in range(body.dim):
        rows.append([t.m_mat[k][j] + t.m_vec[k] * a[j]
                     for j in range(body.dim)])
    return QMatrix(rows, ncols=body.dim)


# ---------------------------------------------------------------------------
# Coproduct
# ---------------------------------------------------------------------------

def coproduct(b1: SFreeBody, b2: SFreeBody, mu) -> SFreeBody:
    """Weighted coproduct of B1/mu and B2/(1-mu): the body in the product
    space whose normals are all pairs (mu a1_i, (1-mu) a2_j)."""
    mu = rat(mu)
    if not (0 < mu < 1):
        raise ValueError("the weight must lie strictly between 0 and 1")
    one_minus = ONE - mu
    normals = []
    for a1 in b1.normals:
        for a2 in b2.normals:
            normals.append(QVector([x * mu for x in a1]
                                   + [y * one_minus for y in a2]))
    return SFreeBody(normals)


def coproduct_many(bodies: Sequence[SFreeBody], weights: Sequence) -> SFreeBody:
    """Iterated coproduct with explicit weights summing to 1 (associativity
    makes the bracketing irrelevant)."""
    ws = [rat(w) for w in weights]
    if len(ws) != len(bodies) or len(bodies) < 2:
        raise ValueError("need one weight per body, at least two bodies")
    if sum(ws[1:], ws[0]) != 1:
        raise ValueError("weights must sum to 1 exactly")
    if any(w <= 0 for w in ws):
        raise ValueError("weights must be positive")
    normals = [tuple(a) for a in bodies[0].normals]
    scaled = [[tuple(x * w for x in a) for a in b.normals]
              for b, w in zip(bodies, ws)]
    combos = scaled[0]
    for block in scaled[1:]:
        combos = [c + a for c in combos for a in block]
    return SFreeBody([QVector(c) for c in combos])


# ---------------------------------------------------------------------------
# Limit families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitInstance:
    """A finite sample of a converging family of bodies plus its limit,
    all sharing one S.  Samples share the facet count; the limit may have
    fewer facets when sample facets merge in the limit."""

    s: TruncatedAffineLattice
    samples: Tuple[SFreeBody, ...]
    limit: SFreeBody

    def __post_init__(self):
        if not self.samples:
            raise ValueError("a limit instance needs at least one sample")
        dims = {b.dim for b in self.samples} | {self.limit.dim}
        if dims != {self.s.ambient}:
            raise ValueError("all bodies must share the ambient dimension of S")
        counts = {b.facet_count for b in self.samples}
        if len(counts) != 1:
            raise ValueError("samples must share their facet count")


@dataclass(frozen=True)
class LimitBodyCheck:
    s_free: str
    maximal: str
    covering: Optional[CoveringReport]


@dataclass(frozen=True)
class LimitReport:
    sample_checks: Tuple[LimitBodyCheck, ...]
    limit_check: LimitBodyCheck
    limit_intersection_polytope: bool
    all_samples_covered: bool
    limit_covered: bool

    @property
    def consistent(self) -> bool:
        """Covered samples must not converge to an uncovered limit."""
        return (not self.all_samples_covered) or self.limit_covered


def _check_one(s: TruncatedAffineLattice, body: SFreeBody) -> LimitBodyCheck:
    fr = is_s_free(body, s)
    mx = is_maximal(body, s)
    cov = None
    if fr.is_free and mx.is_maximal:
        cov = check_covering(s, body)
    return LimitBodyCheck(fr.kind, mx.kind, cov)


def verify_limit(inst: LimitInstance) -> LimitReport:
    """Check the decidable hypotheses (freeness, maximality, polytope
    intersection) and the covering verdict of every sample and of the
    limit; entrywise convergence of the descriptions is the caller's
    claim and is not certified here."""
    sample_checks = tuple(_check_one(inst.s, b) for b in inst.samples)
    limit_check = _check_one(inst.s, inst.limit)
    k = intersect(inst.limit.polyhedron, inst.s.hull)
    poly = (not is_empty(k)) and bounding_box(k) is not None
    all_cov = all(c.covering is not None and c.covering.covered
                  for c in sample_checks)
    lim_cov = (limit_check.covering is not None
               and limit_check.covering.covered)
    return LimitReport(sample_checks, limit_check, poly, all_cov, lim_cov)
