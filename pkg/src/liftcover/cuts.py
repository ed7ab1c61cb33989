"""Cut generation from a covering-certified pair and exhaustive desk-scale
validation of the resulting inequality.

The inequality is  sum_i gauge(r_i) s_i + sum_j lift(p_j) y_j >= 1  over
the feasible set {(s, y) >= 0, integral y : R s + P y in S}.  With the
covering property certified, the lifted coefficients are the unique
minimal lifting values; without it they are still valid (a windowed upper
bound of the periodization) but flagged as uncertified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .bodies import SFreeBody, psi
from .covering import (CoveringReport, CoveringSetup, build_covering_setup,
                       check_covering, minimal_lifting)
from .lattices import TruncatedAffineLattice, enumerate_points
from .linalg import QMatrix, QVector, solve
from .rationals import ONE, ZERO, qceil, qfloor, rat
from . import simplex


@dataclass(frozen=True)
class MixedIntegerInstance:
    """Columns r_i for continuous variables and p_j for integer ones."""

    continuous_rays: Tuple[QVector, ...]
    integer_shifts: Tuple[QVector, ...]

    def __init__(self, continuous_rays, integer_shifts):
        rays = tuple(QVector(c) for c in continuous_rays)
        shifts = tuple(QVector(c) for c in integer_shifts)
        if not rays and not shifts:
            raise ValueError("an instance needs at least one column")
        dims = {v.dim for v in rays} | {v.dim for v in shifts}
        if len(dims) != 1:
            raise ValueError("columns of mixed dimension")
        object.__setattr__(self, "continuous_rays", rays)
        object.__setattr__(self, "integer_shifts", shifts)

    @property
    def dim(self) -> int:
        return (self.continuous_rays or self.integer_shifts)[0].dim

    @property
    def k(self) -> int:
        return len(self.continuous_rays)

    @property
    def ell(self) -> int:
        return len(self.integer_shifts)


@dataclass(frozen=True)
class Cut:
    psi_coeffs: Tuple
    pi_coeffs: Tuple
    lifting_witnesses: Tuple[QVector, ...]
    certified: bool

    def lhs(self, s_vals: Sequence, y_vals: Sequence):
        total = ZERO
        for c, v in zip(self.psi_coeffs, s_vals):
            total += c * rat(v)
        for c, v in zip(self.pi_coeffs, y_vals):
            total += c * rat(v)
        return total


def _windowed_lift(setup: CoveringSetup, body: SFreeBody, p: QVector,
                   window: int = 2):
    """Upper bound of the periodized gauge: min over translations in a
    window.  Always a valid lifting value, minimal only under covering."""
    red = setup.reduction
    pw = red.project_point(p) if red is not None else p
    d = setup.w.rank
    wb = setup.body
    if d == 0:
        return psi(wb, pw), QVector.zero(p.dim)
    cols = list(setup.lb.basis) + list(setup.wmat.columns())
    coeffs = solve(QMatrix.from_columns(cols, nrows=setup.s.ambient), pw)
    t_p = QVector(coeffs[setup.lb.dim:])
    center = [-qfloor(t) for t in t_p]
    best = None
    best_z = None
    for z in itertools.product(*(range(c - window, c + window + 1)
                                 for c in center)):
        val = psi(wb, pw + setup.wmat.matvec(QVector(z)))
        if best is None or val < best:
            best, best_z = val, QVector(z)
    w_working = setup.wmat.matvec(best_z)
    if red is not None:
        # report the reduced-space translation lifted naively; uncertified
        # values do not promise an exact ambient witness
        return best, red.lift(w_working)
    return best, w_working


class CoveringRequired(ValueError):
    pass


def generate_cut(s: TruncatedAffineLattice, body: SFreeBody,
                 inst: MixedIntegerInstance,
                 covering: Optional[CoveringReport] = None,
                 allow_uncertified: bool = False) -> Cut:
    """Coefficients gauge(r_i) for continuous columns and minimal-lifting
    values for integer columns."""
    if inst.dim != s.ambient:
        raise ValueError("instance dimension mismatch")
    if covering is None:
        covering = check_covering(s, body)
    psi_coeffs = tuple(psi(body, r) for r in inst.continuous_rays)
    if not inst.integer_shifts:
        return Cut(psi_coeffs, (), (), covering.covered)
    setup = build_covering_setup(s, body) if body.facet_count > 1 else None
    if covering.covered:
        pis = []
        wits = []
        for p in inst.integer_shifts:
            lv = minimal_lifting(s, body, p, setup=setup, covering=covering)
            pis.append(lv.value)
            wits.append(lv.w)
        return Cut(psi_coeffs, tuple(pis), tuple(wits), True)
    if not allow_uncertified:
        raise CoveringRequired(
            "covering not certified: lifted coefficients would be valid but "
            "not minimal; pass allow_uncertified=True to emit them anyway")
    pis = []
    wits = []
    for p in inst.integer_shifts:
        val, w = _windowed_lift(setup, body, QVector(p))
        pis.append(val)
        wits.append(w)
    return Cut(psi_coeffs, tuple(pis), tuple(wits), False)


@dataclass(frozen=True)
class CutValidation:
    status: str                     # "pass" | "violated" | "inconclusive"
    cells_checked: int
    feasible_cells: int
    violation: Optional[Tuple[QVector, QVector]] = None  # (s, y)


def validate_cut(s: TruncatedAffineLattice, inst: MixedIntegerInstance,
                 cut: Cut, y_lo: Sequence[int] = (), y_hi: Sequence[int] = (),
                 window: int = 3) -> CutValidation:
    """Exhaustive validation over a declared window: y ranges over the
    integer box, targets range over the S-points within the window, and
    for each cell the continuous part is minimized exactly by LP."""
    n = s.ambient
    k, ell = inst.k, inst.ell
    if len(cut.psi_coeffs) != k or len(cut.pi_coeffs) != ell:
        raise ValueError("cut shape does not match the instance")
    y_lo = list(y_lo) if y_lo else [0] * ell
    y_hi = list(y_hi) if y_hi else [2] * ell
    if len(y_lo) != ell or len(y_hi) != ell:
        raise ValueError("y bounds must match the number of integer columns")
    targets = enumerate_points(s, [-window] * n, [window] * n)
    if not targets:
        return CutValidation("inconclusive", 0, 0)
    rays = inst.continuous_rays
    cells = 0
    feasible = 0
    y_ranges = [range(a, b + 1) for a, b in zip(y_lo, y_hi)]
    for y in itertools.product(*y_ranges) if ell else [()]:
        py = QVector.zero(n)
        for yj, p in zip(y, inst.integer_shifts):
            py = py + p * yj
        pi_part = sum((c * yj for c, yj in zip(cut.pi_coeffs, y)), ZERO)
        for target in targets:
            rhs_vec = target - py
            cells += 1
            if k == 0:
                if rhs_vec.is_zero():
                    feasible += 1
                    if pi_part < 1:
                        return CutValidation("violated", cells, feasible,
                                             (QVector([]), QVector(y)))
                continue
            eq_rows = [[r[i] for r in rays] for i in range(n)]
            res = simplex.solve_lp(list(cut.psi_coeffs), eq_rows=eq_rows,
                                   eq_rhs=list(rhs_vec), a_rows=[], b=[],
                                   nonneg=True, sense="min")
            if res.status == simplex.INFEASIBLE:
                continue
            feasible += 1
            if res.status == simplex.UNBOUNDED:
                drop = sum((c * d for c, d in zip(cut.psi_coeffs, res.ray)),
                           ZERO)
                gap = pi_part + sum(
                    (c * v for c, v in zip(cut.psi_coeffs, res.x)), ZERO) - 1
                steps = qceil(-gap / drop) + 1 if drop < 0 else 1
                point = res.x + res.ray * steps
                return CutValidation("violated", cells, feasible,
                                     (point, QVector(y)))
            if res.value + pi_part < 1:
                return CutValidation("violated", cells, feasible,
                                     (res.x, QVector(y)))
    if feasible == 0:
        return CutValidation("inconclusive", cells, 0)
    return CutValidation("pass", cells, feasible)
