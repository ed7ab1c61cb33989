"""Ready-made (S, body) pairs whose covering status is known by
construction: interval splits, crosspolytopes built as iterated interval
coproducts, canonically translated simplices, degenerating limit families
with 2^(k-1)+1 facets, and a truncated-lattice cone.

Every declared expectation is re-verified by the test suite, never
trusted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .bodies import SFreeBody
from .lattices import Lattice, TruncatedAffineLattice
from .linalg import QMatrix, QVector
from .polyhedra import HPolyhedron
from .rationals import ONE, ZERO, rat
from .transforms import AffineMap, LimitInstance, affine_transform


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    s: TruncatedAffineLattice
    body: SFreeBody
    expected_covering: bool
    provenance: str
    limit_instance: Optional[LimitInstance] = None


def split(n: int, axis: int = 0) -> GalleryEntry:
    """Slab |2 x_axis| <= 1 against the lattice shifted by 1/2 along the
    axis; the 1-d base case every other family builds on."""
    if not 0 <= axis < n:
        raise ValueError("axis out of range")
    shift = [rat(1, 2) if i == axis else ZERO for i in range(n)]
    body = SFreeBody([QVector([2 if i == axis else 0 for i in range(n)]),
                      QVector([-2 if i == axis else 0 for i in range(n)])])
    s = TruncatedAffineLattice.standard(shift)
    return GalleryEntry(f"split-{n}d-axis{axis}", s, body, True,
                        "unit-width slab between consecutive shifted "
                        "lattice hyperplanes")


def _interval_body(a, b) -> SFreeBody:
    """Normalized interval [a/(b-a), b/(b-a)] as a 1-d body."""
    w = b - a
    return SFreeBody([QVector([w / b]), QVector([w / a])])


def crosspolytope(a: Sequence, b: Sequence) -> GalleryEntry:
    """conv of the 2n axis points a_j e_j, b_j e_j, normalized; built as
    the weighted iterated coproduct of n intervals with weights
    1/(b_j - a_j) summing to 1."""
    a = QVector(a)
    b = QVector(b)
    n = a.dim
    if b.dim != n or n < 1:
        raise ValueError("need matching nonempty bounds")
    if any(not (aj < 0 < bj) for aj, bj in zip(a, b)):
        raise ValueError("bounds must satisfy a_j < 0 < b_j")
    weights = [ONE / (bj - aj) for aj, bj in zip(a, b)]
    if sum(weights[1:], weights[0]) != 1:
        raise ValueError("the reciprocal widths 1/(b_j - a_j) must sum to 1")
    shift = QVector([bj * w for bj, w in zip(b, weights)])
    if n == 1:
        body = _interval_body(a[0], b[0])
    else:
        from .transforms import coproduct_many
        intervals = [_interval_body(aj, bj) for aj, bj in zip(a, b)]
        body = coproduct_many(intervals, weights)
    expected = {tuple(ONE / bj if sj else ONE / aj for sj, bj, aj in
                      zip(signs, b, a))
                for signs in itertools.product([1, 0], repeat=n)}
    if set(map(tuple, body.normals)) != expected:
        raise AssertionError("coproduct normals disagree with the "
                             "direct crosspolytope description")
    s = TruncatedAffineLattice.standard(shift)
    return GalleryEntry(f"crosspolytope-{n}d", s, body, True,
                        "iterated weighted coproduct of unit-width "
                        "maximal-free intervals")


def simplex_type1(b: Sequence) -> GalleryEntry:
    """Simplex conv{0, b_1 e_1, ..., b_n e_n} with sum 1/b_j = 1,
    translated by -(1/2, ..., 1/2) so the origin is interior.  Covering is
    translation-invariant, so the re-anchoring is harmless."""
    b = QVector(b)
    n = b.dim
    if any(x <= 0 for x in b):
        raise ValueError("vertex scales must be positive")
    if sum((ONE / x for x in b), ZERO) != 1:
        raise ValueError("the reciprocals 1/b_j must sum to 1")
    normals = [QVector([-2 if i == j else 0 for i in range(n)])
               for j in range(n)]
    normals.append(QVector([2 / x for x in b]))
    s = TruncatedAffineLattice.standard([rat(-1, 2)] * n)
    return GalleryEntry(f"simplex-{n}d", s, SFreeBody(normals), True,
                        "axis simplex re-anchored by the half-integer "
                        "translation")


def simplex_limit_family(b: Sequence,
                         ts: Sequence[int] = (2, 4, 8, 16)) -> LimitInstance:
    """Crosspolytopes degenerating onto the translated simplex: parameters
    a^t = -1/t, b^t = b - 1/t keep the reciprocal-width constraint exact,
    and each sample is translated onto the simplex's S."""
    target = simplex_type1(b)
    b = QVector(b)
    n = b.dim
    samples = []
    for t in ts:
        at = QVector([rat(-1, t)] * n)
        bt = QVector([bj - rat(1, t) for bj in b])
        entry = crosspolytope(at, bt)
        # land on shift +1/2 (same S as -1/2 modulo the lattice) so the
        # origin stays interior to the translated sample
        move = QVector([rat(1, 2) - sj for sj in entry.s.shift])
        s_new, body_new = affine_transform(
            entry.s, entry.body, AffineMap.translation(move))
        if not s_new.same_set(target.s):
            raise AssertionError("translated sample has the wrong S")
        samples.append(body_new)
    return LimitInstance(target.s, tuple(samples), target.body)


def facet_family(k: int, ts: Sequence[int] = (2, 4, 8, 16)) -> GalleryEntry:
    """Body in dimension k with 2^(k-1)+1 facets: the coproduct of k
    intervals (a 2^k-facet crosspolytope) whose first interval degenerates,
    merging the 2^(k-1) lower facets into one."""
    if k < 2:
        raise ValueError("the construction needs dimension at least 2")
    half = rat(1, 2)
    c = k - 1
    samples = []
    target_shift = [half] * k
    s_target = TruncatedAffineLattice.standard(target_shift)
    for t in ts:
        a = [rat(-1, t)] + [rat(-c)] * (k - 1)
        b = [2 - rat(1, t)] + [rat(c)] * (k - 1)
        entry = crosspolytope(a, b)
        move = QVector([half - entry.s.shift[0]] + [ZERO] * (k - 1))
        s_new, body_new = affine_transform(
            entry.s, entry.body, AffineMap.translation(move))
        if not s_new.same_set(s_target):
            raise AssertionError("translated sample has the wrong S")
        samples.append(body_new)
    limit_normals = [QVector([-2] + [0] * (k - 1))]
    for signs in itertools.product([1, -1], repeat=k - 1):
        limit_normals.append(QVector(
            [rat(2, 3)] + [rat(4 * sj, 3 * c) for sj in signs]))
    limit_body = SFreeBody(limit_normals)
    inst = LimitInstance(s_target, tuple(samples), limit_body)
    return GalleryEntry(f"facet-family-{k}d", s_target, limit_body, True,
                        "limit of interval coproducts merging half the "
                        "facets into one", limit_instance=inst)


def cone2d(apex: Sequence, rays: Tuple[Sequence, Sequence],
           s: TruncatedAffineLattice) -> GalleryEntry:
    """Two-facet unbounded wedge with the given apex and ray directions,
    for a lattice truncated by a halfspace."""
    apex = QVector(apex)
    r1, r2 = QVector(rays[0]), QVector(rays[1])
    if apex.dim != 2 or r1.dim != 2 or r2.dim != 2 or s.ambient != 2:
        raise ValueError("the cone construction is two-dimensional")
    normals = []
    for ray, other in ((r1, r2), (r2, r1)):
        # the facet normal is pinned by  n . ray = 0,  n . apex = 1
        perp = QVector([-ray[1], ray[0]])
        scale = perp.dot(apex)
        if scale == 0:
            raise ValueError("a facet line passes through the origin; "
                             "translate the cone")
        n = perp * (ONE / scale)
        if n.dot(other) > 0:
            raise ValueError("rays do not span a cone with the origin inside")
        normals.append(n)
    body = SFreeBody(normals)
    if not body.contains([0, 0], strict=True):
        raise ValueError("origin is not interior to the cone")
    return GalleryEntry("cone-2d", s, body, True,
                        "wedge through adjacent shifted lattice points "
                        "over a halfspace-truncated lattice")


def default_cone2d() -> GalleryEntry:
    hull = HPolyhedron.from_rows([((-1, 0), rat(-1, 2))], 2)
    s = TruncatedAffineLattice.standard([rat(1, 2), rat(1, 2)], hull)
    return cone2d([rat(3, 2), 0], ((-1, rat(1, 2)), (-1, rat(-1, 2))), s)


def standard_entries() -> List[GalleryEntry]:
    """The curated verification gallery (all expected covered)."""
    return [
        split(1),
        split(2, axis=0),
        crosspolytope([-1, -1], [1, 1]),
        crosspolytope([rat(-3, 2)] * 3, [rat(3, 2)] * 3),
        simplex_type1([2, 2]),
        simplex_type1([3, 3, 3]),
        facet_family(2),
        facet_family(3),
        default_cone2d(),
    ]


def entry_names() -> List[str]:
    return [e.name for e in standard_entries()]


def entry_by_name(name: str) -> GalleryEntry:
    for e in standard_entries():
        if e.name == name:
            return e
    raise KeyError(f"no gallery entry named {name!r}")
