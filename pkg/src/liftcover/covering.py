"""Spindles, lifting regions, the exact covering decision, unique minimal
lifting values, and the independent grid-sampling oracle.

The covering question "does the lifting region tile space under the
translation lattice W?" is decided exactly:

1.  halfspaces are covered outright (their lifting region is everything);
2.  an unbounded B ∩ conv(S) is projected to the polytope case first;
3.  if the common-value space of the facet normals is not complementary
    to the carrier of W, the answer is no, with a far-out witness point;
4.  otherwise the fundamental domain of W is subtracted against every
    region translate that can meet it; surviving full-dimensional cells
    are counterexamples, an empty remainder yields a covering certificate.

All cell and translate orders are canonical, so reports are reproducible
byte for byte.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bodies import (FREE, MAXIMAL, FacetSpace, Reduction, SFreeBody,
                     check_l_b_transversality, eval_psi, facet_space,
                     is_maximal, is_s_free, psi, try_reduce)
from .lattices import (Lattice, TruncatedAffineLattice, WLattice,
                       enumerate_points, hnf_columns, translation_group)
from .linalg import (QMatrix, QVector, Subspace, rank, solve, span,
                     subspace_sum)
from .polyhedra import (HPolyhedron, UnboundedError, bounding_box,
                        canonical_form, interior_point, intersect, is_empty,
                        remove_redundancy, subtract, translate)
from .rationals import ONE, ZERO, qceil, qfloor, rat
from . import simplex

COVERED = "covered"
NOT_COVERED = "not-covered"
COVERED_AFTER_REDUCTION = "covered-after-reduction"


class InvalidBodyError(ValueError):
    """The body is not maximal S-free; carries the failing facet/point."""

    def __init__(self, message, facet=None, violator=None):
        super().__init__(message)
        self.facet = facet
        self.violator = violator


class CoveringUnsupportedError(ValueError):
    """Input outside the structural assumptions the reduction relies on."""


@dataclass(frozen=True)
class Spindle:
    """Region anchored at a boundary point s of B lying on facet k:
    {r : (a_i - a_k).r <= 0,  (a_i - a_k).(s - r) <= 0}."""

    anchor: QVector
    facet_index: int
    region: HPolyhedron


def make_spindle(body: SFreeBody, s: Sequence) -> Spindle:
    s = QVector(s)
    value, k = eval_psi(body, s)
    if value != 1:
        raise ValueError(
            "spindle anchor must lie on the boundary of the body "
            f"(gauge is {value}, not 1)")
    ak = body.normals[k]
    rows = []
    for i, a in enumerate(body.normals):
        if i == k:
            continue
        rows.append((a - ak, ZERO))
    for i, a in enumerate(body.normals):
        if i == k:
            continue
        d = ak - a
        rows.append((d, d.dot(s)))
    return Spindle(s, k, HPolyhedron.from_rows(rows, body.dim))


@dataclass(frozen=True)
class LiftingRegion:
    spindles: Tuple[Spindle, ...]

    def __iter__(self):
        return iter(self.spindles)

    def __len__(self):
        return len(self.spindles)


def lifting_region(s: TruncatedAffineLattice, body: SFreeBody) -> LiftingRegion:
    """One spindle per point of B ∩ S, deduplicated by region equality.
    Requires B ∩ conv(S) bounded (project unbounded inputs first)."""
    k = intersect(body.polyhedron, s.hull)
    if is_empty(k):
        return LiftingRegion(())
    bb = bounding_box(k)
    if bb is None:
        raise UnboundedError(
            "B ∩ conv(S) is unbounded; apply the recession-span projection first")
    anchors = []
    for p in enumerate_points(s, bb[0], bb[1]):
        g = psi(body, p)
        if g < 1:
            raise InvalidBodyError(
                f"point {tuple(p)} of S is interior to the body", violator=p)
        if g == 1:
            anchors.append(p)
    spindles = []
    seen = set()
    for a in anchors:
        sp = make_spindle(body, a)
        key = canonical_form(sp.region)
        if key not in seen:
            seen.add(key)
            spindles.append(sp)
    return LiftingRegion(tuple(spindles))


# ---------------------------------------------------------------------------
# Covering setup: everything expressed in W-basis coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Translate:
    spindle_index: int
    z: Tuple[int, ...]
    poly: HPolyhedron
    lo: QVector
    hi: QVector


@dataclass
class CoveringSetup:
    s: TruncatedAffineLattice          # working (possibly reduced) S
    body: SFreeBody                    # working body
    reduction: Optional[Reduction]
    region: LiftingRegion
    w: WLattice
    wmat: QMatrix                      # working-ambient x d
    lb: Subspace                       # facet space of the working body
    complementary: bool                # L_B + carrier = whole space?
    pieces: List[HPolyhedron] = field(default_factory=list)   # t-coords
    piece_boxes: List[Tuple[QVector, QVector]] = field(default_factory=list)
    translates: List[Translate] = field(default_factory=list)
    freeness_kind: str = FREE
    maximality_kind: str = MAXIMAL


def _piece_in_w_coords(region: HPolyhedron, wmat: QMatrix) -> HPolyhedron:
    rows = []
    wt = wmat.transpose()
    for q, d in region.rows():
        rows.append((wt.matvec(q), d))
    return remove_redundancy(HPolyhedron.from_rows(rows, wmat.n))


def _check_reduction_w_compat(s: TruncatedAffineLattice, red: Reduction) -> None:
    """The projection must map W_S onto the reduced translation lattice;
    the reduction is only covering-faithful under that identity."""
    w_up = translation_group(s)
    w_down = translation_group(red.s)
    img = Lattice.from_generators(
        [red.project_point(c) for c in w_up.basis.columns()], red.s.ambient)
    if img != w_down.lattice():
        raise CoveringUnsupportedError(
            "the translation lattice does not project onto the reduced one; "
            "this input is outside the supported reduction hypotheses")


def build_covering_setup(s: TruncatedAffineLattice, body: SFreeBody,
                         validate: bool = True) -> CoveringSetup:
    """Validate, reduce, and express the lifting region in W-basis
    coordinates together with every translate that can meet the
    fundamental domain [0,1]^d."""
    if body.dim != s.ambient:
        raise ValueError("dimension mismatch between body and S")
    red = try_reduce(s, body)
    if red is not None:
        _check_reduction_w_compat(s, red)
        ws, wb = red.s, red.body
    else:
        ws, wb = s, body

    freeness = is_s_free(wb, ws)
    if not freeness.is_free:
        raise InvalidBodyError(
            f"body is not S-free: S point {tuple(freeness.violator)} is interior",
            violator=freeness.violator)
    maximality = is_maximal(wb, ws)
    if not maximality.is_maximal:
        raise InvalidBodyError(
            f"body is not maximal S-free: facet {maximality.facet} has no "
            "S point in its relative interior", facet=maximality.facet)
    check_l_b_transversality(wb, ws)

    region = lifting_region(ws, wb)
    w = translation_group(ws)
    wmat = w.basis
    lb = facet_space(wb).subspace
    complementary = subspace_sum(lb, w.carrier).dim == ws.ambient

    setup = CoveringSetup(ws, wb, red, region, w, wmat, lb, complementary,
                          freeness_kind=freeness.kind,
                          maximality_kind=maximality.kind)
    if not complementary or w.rank == 0:
        return setup

    for sp in region:
        piece = _piece_in_w_coords(sp.region, wmat)
        if interior_point(piece) is None:
            continue
        bb = bounding_box(piece)
        if bb is None:
            raise CoveringUnsupportedError(
                "a region piece is unbounded in W coordinates; the "
                "transversality assumptions are violated")
        setup.pieces.append(piece)
        setup.piece_boxes.append(bb)

    d = w.rank
    for idx, (piece, (lo, hi)) in enumerate(zip(setup.pieces, setup.piece_boxes)):
        ranges = [range(qceil(-h), qfloor(ONE - l) + 1)
                  for l, h in zip(lo, hi)]
        for z in itertools.product(*ranges):
            zv = QVector(z)
            setup.translates.append(Translate(
                idx, tuple(z), translate(piece, zv), lo + zv, hi + zv))
    return setup


# ---------------------------------------------------------------------------
# Covering decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoveringReport:
    verdict: str
    witness: Optional[QVector] = None
    certificate: Optional[Tuple[Tuple[QVector, QVector], ...]] = None
    reduction: Optional[Reduction] = None
    spindle_count: int = 0
    translate_count: int = 0
    notes: Tuple[str, ...] = ()

    @property
    def covered(self) -> bool:
        return self.verdict in (COVERED, COVERED_AFTER_REDUCTION)


def _boxes_disjoint(lo1, hi1, lo2, hi2) -> bool:
    return any(h1 <= l2 or h2 <= l1
               for l1, h1, l2, h2 in zip(lo1, hi1, lo2, hi2))


def _subtract_all(domain: HPolyhedron, translates: Sequence[Translate]):
    """Subtract each translate in order; returns (surviving cells, indices
    of translates that removed something)."""
    d = domain.n
    cells = [(domain, bounding_box(domain))]
    used = []
    for ti, tr in enumerate(translates):
        if not cells:
            break
        new_cells = []
        removed = False
        for cell, (clo, chi) in cells:
            if _boxes_disjoint(clo, chi, tr.lo, tr.hi):
                new_cells.append((cell, (clo, chi)))
                continue
            if interior_point(intersect(cell, tr.poly)) is None:
                new_cells.append((cell, (clo, chi)))
                continue
            removed = True
            for piece in subtract(cell, tr.poly):
                new_cells.append((piece, bounding_box(piece)))
        if removed:
            used.append(ti)
        cells = new_cells
    return [c for c, _ in cells], used


def _witness_rejected(setup: CoveringSetup, t_point: QVector) -> bool:
    """Exact rejection: no translate of any piece contains the point."""
    for piece, (lo, hi) in zip(setup.pieces, setup.piece_boxes):
        ranges = [range(qceil(t - h), qfloor(t - l) + 1)
                  for t, l, h in zip(t_point, lo, hi)]
        for z in itertools.product(*ranges):
            if piece.contains(t_point - QVector(z)):
                return False
    return True


def _halfspace_report(s: TruncatedAffineLattice, body: SFreeBody,
                      red: Optional[Reduction]) -> CoveringReport:
    """A maximal S-free halfspace has lifting region equal to the whole
    space, hence is covered with a single-translate certificate."""
    ws = red.s if red is not None else s
    wb = red.body if red is not None else body
    maximality = is_maximal(wb, ws)
    anchor = None
    for pts in maximality.facet_points:
        if pts:
            anchor = pts[0]
            break
    notes = ("halfspace: lifting region is the whole space",)
    if maximality.kind != MAXIMAL:
        notes += (f"maximality verdict is window-relative ({maximality.kind})",)
    cert = ((anchor, QVector.zero(ws.ambient)),) if anchor is not None else None
    verdict = COVERED if red is None else COVERED_AFTER_REDUCTION
    return CoveringReport(verdict, certificate=cert, reduction=red,
                          spindle_count=1, notes=notes)


def _noncomplementary_witness(setup: CoveringSetup) -> QVector:
    """Witness construction when L_B + carrier is a proper subspace: go
    beyond the bounded region in a direction complementary to both."""
    n = setup.s.ambient
    cur = list(setup.w.carrier.basis)
    lbb = list(setup.lb.basis)
    for i in range(n):
        e = QVector.unit(n, i)
        trial = lbb + cur + [e]
        if rank(QMatrix(trial, ncols=n)) == len(trial):
            cur.append(e)
        if len(lbb) + len(cur) == n:
            break
    mmat = QMatrix.from_columns(cur, nrows=n)
    d = setup.w.rank
    extra = len(cur) - d
    if extra <= 0:
        raise AssertionError("complement construction failed")
    rho = ZERO
    for sp in setup.region:
        rows = []
        for q, dd in sp.region.rows():
            rows.append((mmat.transpose().matvec(q), dd))
        piece = HPolyhedron.from_rows(rows, len(cur))
        bb = bounding_box(piece)
        if bb is None:
            raise CoveringUnsupportedError(
                "region piece unbounded in the complement coordinates")
        for j in range(d, len(cur)):
            rho = max(rho, abs(bb[0][j]), abs(bb[1][j]))
    y = [ZERO] * len(cur)
    y[d] = rho + 1
    return mmat.matvec(QVector(y))


def _reject_ambient_witness(setup: CoveringSetup, x: QVector) -> bool:
    """x (working-ambient coords) is in no spindle translate: enumerate
    the integer translates whose piece could reach it."""
    wmat = setup.wmat
    d = setup.w.rank
    for sp in setup.region:
        # polyhedron {z : x - W z in region}
        rows = []
        for q, dd in sp.region.rows():
            wq = wmat.transpose().matvec(q)
            rows.append(([-c for c in wq], dd - q.dot(x)))
        zpoly = HPolyhedron.from_rows(rows, d)
        bb = bounding_box(zpoly)
        if bb is None:
            raise CoveringUnsupportedError("translate search space unbounded")
        ranges = [range(qceil(l), qfloor(h) + 1) for l, h in zip(bb[0], bb[1])]
        for z in itertools.product(*ranges):
            if sp.region.contains(x - wmat.matvec(QVector(z))):
                return False
    return True


def check_covering(s: TruncatedAffineLattice, body: SFreeBody,
                   verify: bool = True) -> CoveringReport:
    """Exact decision of  R(S,B) + W_S = R^n, with certificate or witness."""
    if body.dim != s.ambient:
        raise ValueError("dimension mismatch between body and S")
    if body.facet_count == 1:
        red = try_reduce(s, body)
        freeness = is_s_free(red.body if red else body, red.s if red else s)
        if not freeness.is_free:
            raise InvalidBodyError("halfspace is not S-free",
                                   violator=freeness.violator)
        return _halfspace_report(s, body, red)

    setup = build_covering_setup(s, body)
    notes = ()
    if setup.freeness_kind != FREE:
        notes += (f"freeness verdict: {setup.freeness_kind}",)
    if setup.maximality_kind != MAXIMAL:
        notes += (f"maximality verdict: {setup.maximality_kind}",)

    covered_verdict = (COVERED_AFTER_REDUCTION if setup.reduction is not None
                       else COVERED)

    if setup.w.rank == 0:
        # carrier = {0}: covered iff L_B is everything, i.e. a halfspace,
        # which was handled above.
        x = _noncomplementary_witness(setup)
        if not _reject_ambient_witness(setup, x):
            raise AssertionError("constructed witness is covered; internal error")
        witness = setup.reduction.lift(x) if setup.reduction else x
        return CoveringReport(NOT_COVERED, witness=witness,
                              reduction=setup.reduction,
                              spindle_count=len(setup.region), notes=notes)

    if not setup.complementary:
        x = _noncomplementary_witness(setup)
        if not _reject_ambient_witness(setup, x):
            raise AssertionError("constructed witness is covered; internal error")
        witness = setup.reduction.lift(x) if setup.reduction else x
        return CoveringReport(NOT_COVERED, witness=witness,
                              reduction=setup.reduction,
                              spindle_count=len(setup.region),
                              notes=notes + ("facet space not complementary "
                                             "to the carrier",))

    d = setup.w.rank
    domain = HPolyhedron.box([0] * d, [1] * d)
    cells, used = _subtract_all(domain, setup.translates)

    if not cells:
        cert = []
        for ti in used:
            tr = setup.translates[ti]
            anchor = setup.region.spindles[tr.spindle_index].anchor
            cert.append((anchor, setup.wmat.matvec(QVector(tr.z))))
        if verify:
            re_cells, _ = _subtract_all(
                domain, [setup.translates[ti] for ti in used])
            if re_cells:
                raise AssertionError("certificate fails re-subtraction check")
        return CoveringReport(covered_verdict, certificate=tuple(cert),
                              reduction=setup.reduction,
                              spindle_count=len(setup.region),
                              translate_count=len(setup.translates),
                              notes=notes)

    cells_sorted = sorted(cells, key=canonical_form)
    witness_t = interior_point(cells_sorted[0])
    if witness_t is None:
        raise AssertionError("surviving cell lost its interior; internal error")
    if verify and not _witness_rejected(setup, witness_t):
        raise AssertionError("witness point is covered; internal error")
    x = setup.wmat.matvec(witness_t)
    witness = setup.reduction.lift(x) if setup.reduction else x
    return CoveringReport(NOT_COVERED, witness=witness,
                          reduction=setup.reduction,
                          spindle_count=len(setup.region),
                          translate_count=len(setup.translates),
                          notes=notes)


# ---------------------------------------------------------------------------
# Grid oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleReport:
    covered_at_resolution: bool
    resolution: int
    sample: Optional[QVector] = None  # uncovered sample in W coordinates


def _scaled_rows(poly: HPolyhedron, res: int):
    """Integer form of q.x <= d for grid points x = i/res: returns rows
    (iq, rhs) with membership  iq . i <= rhs."""
    out = []
    for q, d in poly.rows():
        lcm = 1
        from math import gcd as _g
        for x in list(q) + [d]:
            lcm = lcm * x.denominator // _g(lcm, x.denominator)
        iq = [int(x * lcm) for x in q]
        rhs = int(d * lcm) * res
        out.append((iq, rhs))
    return out


def grid_oracle(s: TruncatedAffineLattice, body: SFreeBody,
                resolution: int = 64,
                setup: Optional[CoveringSetup] = None) -> OracleReport:
    """Sample the fundamental domain at pitch 1/resolution and test every
    sample exactly for membership in some region translate."""
    if resolution < 1:
        raise ValueError("resolution must be positive")
    if setup is None:
        setup = build_covering_setup(s, body)
    if body.facet_count == 1:
        return OracleReport(True, resolution)
    if setup.w.rank == 0 or not setup.complementary:
        return OracleReport(False, resolution,
                            sample=QVector.zero(max(setup.w.rank, 0)))
    d = setup.w.rank
    res = resolution
    tests = []
    for tr in setup.translates:
        ilo = [qceil(l * res) for l in tr.lo]
        ihi = [qfloor(h * res) for h in tr.hi]
        tests.append((ilo, ihi, _scaled_rows(tr.poly, res)))
    order = list(range(len(tests)))
    for ipt in itertools.product(range(res + 1), repeat=d):
        hit = None
        for oi, ti in enumerate(order):
            ilo, ihi, rows = tests[ti]
            if any(i < l or i > h for i, l, h in zip(ipt, ilo, ihi)):
                continue
            if all(sum(a * b for a, b in zip(iq, ipt)) <= rhs
                   for iq, rhs in rows):
                hit = oi
                break
        if hit is None:
            return OracleReport(False, resolution,
                                sample=QVector([rat(i, res) for i in ipt]))
        if hit:
            order.insert(0, order.pop(hit))
    return OracleReport(True, resolution)


# ---------------------------------------------------------------------------
# Unique minimal lifting
# ---------------------------------------------------------------------------

class CoveringNotEstablished(ValueError):
    pass


@dataclass(frozen=True)
class LiftValue:
    value: object
    w: QVector            # translation used, in the original ambient space
    in_region_point: QVector  # p + w, working coordinates


def _integer_solve(a: QMatrix, c: QVector) -> Optional[QVector]:
    """Some integer solution z of A z = c, via the column HNF transform."""
    if a.n == 0:
        return QVector([]) if all(x == 0 for x in c) else None
    from math import gcd as _g
    lcm = 1
    entries = [x for row in a for x in row] + list(c)
    for x in entries:
        lcm = lcm * x.denominator // _g(lcm, x.denominator)
    rows = [[int(x * lcm) for x in row] for row in a]
    target = [int(x * lcm) for x in c]
    h, rk, u = hnf_columns(rows, a.n, with_transform=True)
    # forward-substitute H y = target over the pivot columns
    y = [0] * a.n
    resid = list(target)
    col = 0
    for col in range(rk):
        prow = next((i for i in range(len(h)) if h[i][col] != 0), None)
        if prow is None:
            break
        if resid[prow] % h[prow][col] != 0:
            return None
        q = resid[prow] // h[prow][col]
        y[col] = q
        for i in range(len(h)):
            resid[i] -= q * h[i][col]
    if any(r != 0 for r in resid):
        return None
    z = [sum(u[i][j] * y[j] for j in range(a.n)) for i in range(a.n)]
    return QVector(z)


def minimal_lifting(s: TruncatedAffineLattice, body: SFreeBody, p: Sequence,
                    setup: Optional[CoveringSetup] = None,
                    require_covering: bool = True,
                    covering: Optional[CoveringReport] = None) -> LiftValue:
    """Value of the unique minimal lifting at p: finds w in W_S with
    p + w in the lifting region and returns gauge(p + w) together with w.
    Cross-checked against a brute-force minimum over a 2-fundamental-domain
    window."""
    p = QVector(p)
    if body.facet_count == 1:
        # lifting region is everything: the gauge itself is the lifting
        return LiftValue(psi(body, p), QVector.zero(s.ambient), p)
    if covering is None and require_covering:
        covering = check_covering(s, body)
    if require_covering and not covering.covered:
        raise CoveringNotEstablished(
            "covering not established: the lifting value would be valid "
            "but not certified minimal")
    if setup is None:
        setup = build_covering_setup(s, body)
    red = setup.reduction
    pw = red.project_point(p) if red is not None else p
    d = setup.w.rank
    if d == 0:
        raise CoveringNotEstablished("trivial translation lattice")
    # decompose pw = (L_B part) + wmat t
    cols = list(setup.lb.basis) + list(setup.wmat.columns())
    coeffs = solve(QMatrix.from_columns(cols, nrows=setup.s.ambient), pw)
    if coeffs is None:
        raise CoveringUnsupportedError("point outside L_B + carrier")
    t_p = QVector(coeffs[setup.lb.dim:])

    found = None
    for pi, (piece, (lo, hi)) in enumerate(zip(setup.pieces, setup.piece_boxes)):
        ranges = [range(qceil(l - t), qfloor(h - t) + 1)
                  for t, l, h in zip(t_p, lo, hi)]
        for z in itertools.product(*ranges):
            if piece.contains(t_p + QVector(z)):
                found = (pi, QVector(z))
                break
        if found:
            break
    if found is None:
        raise CoveringNotEstablished(
            "no translation takes the point into the lifting region "
            "(region does not cover; rerun with require_covering)")
    pi, z = found
    w_working = setup.wmat.matvec(z)
    value = psi(setup.body, pw + w_working)

    # brute-force cross-check over a 2-fundamental-domain window around z
    best = None
    for z2 in itertools.product(*(range(int(zi) - 2, int(zi) + 3) for zi in z)):
        cand = psi(setup.body, pw + setup.wmat.matvec(QVector(z2)))
        if best is None or cand < best:
            best = cand
    if best != value:
        raise AssertionError(
            "window minimum disagrees with the region-attained value; "
            "internal error")

    if red is not None:
        w_up = translation_group(s)
        proj_w = QMatrix([red.proj.matvec(c) for c in
                          w_up.basis.columns()], ncols=red.s.ambient).transpose() \
            if w_up.rank else QMatrix.from_columns([], nrows=red.s.ambient)
        zsol = _integer_solve(proj_w, w_working)
        if zsol is None:
            raise CoveringUnsupportedError(
                "reduced translation does not lift to the original lattice")
        w_amb = w_up.basis.matvec(zsol)
        if psi(body, p + w_amb) != value:
            raise AssertionError("lifted translation changed the gauge value")
        return LiftValue(value, w_amb, pw + w_working)
    return LiftValue(value, w_working, pw + w_working)
