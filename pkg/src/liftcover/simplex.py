"""Exact rational simplex method.

Two-phase tableau simplex over exact rationals with Bland's rule
(anti-cycling): the entering column is the lowest-index improving column,
and ratio-test ties are broken by the lowest basic-variable index.  All
pivoting is therefore deterministic, and identical inputs yield identical
optima and certificates.

Problems are stated as

    max/min  c . x
    s.t.     A x <= b
             E x  = f
             x free     (or x >= 0 with nonneg=True)

Free variables are split internally as x = u - v.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .linalg import QVector
from .rationals import ONE, ZERO, rat

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[QVector] = None
    value: object = None
    ray: Optional[QVector] = None


def _pivot(rows, objs, basis, r, c):
    prow = rows[r]
    pv = prow[c]
    if pv != ONE:
        prow = [x / pv for x in prow]
        rows[r] = prow
    for i in range(len(rows)):
        if i != r:
            f = rows[i][c]
            if f:
                row = rows[i]
                rows[i] = [x - f * y for x, y in zip(row, prow)]
    for k in range(len(objs)):
        f = objs[k][c]
        if f:
            objs[k] = [x - f * y for x, y in zip(objs[k], prow)]
    basis[r] = c


def _bland_step(rows, objs, basis, ncols):
    """One simplex step on the first objective row; returns 'optimal',
    'unbounded' (with entering column), or 'pivoted'."""
    obj = objs[0]
    enter = next((j for j in range(ncols) if obj[j] < 0), None)
    if enter is None:
        return "optimal", None
    best = None  # (ratio, basic var index, row index)
    for i, row in enumerate(rows):
        a = row[enter]
        if a > 0:
            ratio = row[-1] / a
            key = (ratio, basis[i])
            if best is None or key < best[0]:
                best = (key, i)
    if best is None:
        return "unbounded", enter
    _pivot(rows, objs, basis, best[1], enter)
    return "pivoted", None


def _run_simplex(rows, objs, basis, ncols):
    while True:
        state, enter = _bland_step(rows, objs, basis, ncols)
        if state != "pivoted":
            return state, enter


def solve_lp(c: Sequence, a_rows: Sequence, b: Sequence,
             eq_rows: Sequence = (), eq_rhs: Sequence = (),
             nonneg: bool = False, sense: str = "max") -> LPResult:
    """Solve the LP described in the module docstring."""
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    n = len(c)
    c = [rat(x) for x in c]
    ineq = [([rat(x) for x in row], rat(rhs)) for row, rhs in zip(a_rows, b)]
    eqs = [([rat(x) for x in row], rat(rhs)) for row, rhs in zip(eq_rows, eq_rhs)]
    if any(len(row) != n for row, _ in ineq) or any(len(row) != n for row, _ in eqs):
        raise ValueError("row length does not match objective length")

    if n == 0:
        ok = all(rhs >= 0 for _, rhs in ineq) and all(rhs == 0 for _, rhs in eqs)
        return (LPResult(OPTIMAL, QVector([]), ZERO)
                if ok else LPResult(INFEASIBLE))

    # Column layout: n "plus" parts, then n "minus" parts (skipped when
    # nonneg), then one slack per inequality, then one artificial per row
    # that needs it.
    nvar = n if nonneg else 2 * n
    m1, m2 = len(ineq), len(eqs)
    m = m1 + m2
    nslack = m1
    base_cols = nvar + nslack

    rows = []
    basis = []
    art_cols = []
    for i, (row, rhs) in enumerate(ineq + eqs):
        body = list(row) if nonneg else list(row) + [-x for x in row]
        body += [ZERO] * nslack
        if i < m1:
            body[nvar + i] = ONE
        if rhs < 0:
            body = [-x for x in body]
            rhs = -rhs
        rows.append((body, rhs))
        # slack can start basic only if its coefficient stayed +1
        if i < m1 and body[nvar + i] == ONE:
            basis.append(nvar + i)
        else:
            basis.append(None)

    for i in range(m):
        if basis[i] is None:
            art_cols.append(base_cols + len(art_cols))
    total_cols = base_cols + len(art_cols)

    tab = []
    art_iter = iter(art_cols)
    for i, (body, rhs) in enumerate(rows):
        full = body + [ZERO] * len(art_cols) + [rhs]
        if basis[i] is None:
            col = next(art_iter)
            full[col] = ONE
            basis[i] = col
        tab.append(full)

    # Phase 1: minimize the sum of artificials.
    if art_cols:
        obj1 = [ZERO] * total_cols + [ZERO]
        for j in art_cols:
            obj1[j] = ONE
        for i in range(m):
            if basis[i] in art_cols:
                obj1 = [x - y for x, y in zip(obj1, tab[i])]
        objs = [obj1]
        state, _ = _run_simplex(tab, objs, basis, total_cols)
        # phase-1 objective cannot be unbounded (it is bounded below by 0)
        if -objs[0][-1] > 0:
            return LPResult(INFEASIBLE)
        # Drive any leftover artificials out of the basis.
        drop = []
        for i in range(m):
            if basis[i] in art_cols:
                piv = next((j for j in range(base_cols) if tab[i][j] != 0), None)
                if piv is None:
                    drop.append(i)
                else:
                    _pivot(tab, objs, basis, i, piv)
        for i in sorted(drop, reverse=True):
            del tab[i]
            del basis[i]
        # Remove artificial columns.
        keep = list(range(base_cols)) + [total_cols]
        tab = [[row[j] for j in keep] for row in tab]

    # Phase 2 objective: minimize -c.x for max, c.x for min.
    sign = -ONE if sense == "max" else ONE
    if nonneg:
        cost = [sign * x for x in c] + [ZERO] * nslack
    else:
        cost = [sign * x for x in c] + [-sign * x for x in c] + [ZERO] * nslack
    obj = list(cost) + [ZERO]
    for i, row in enumerate(tab):
        f = cost[basis[i]]
        if f:
            obj = [x - f * y for x, y in zip(obj, row)]
    objs = [obj]
    state, enter = _run_simplex(tab, objs, basis, base_cols)

    def current_x():
        vals = [ZERO] * base_cols
        for i, bcol in enumerate(basis):
            vals[bcol] = tab[i][-1]
        if nonneg:
            return QVector(vals[:n])
        return QVector([vals[j] - vals[n + j] for j in range(n)])

    if state == "unbounded":
        ray_vals = [ZERO] * base_cols
        ray_vals[enter] = ONE
        for i, bcol in enumerate(basis):
            ray_vals[bcol] = -tab[i][enter]
        if nonneg:
            ray = QVector(ray_vals[:n])
        else:
            ray = QVector([ray_vals[j] - ray_vals[n + j] for j in range(n)])
        return LPResult(UNBOUNDED, current_x(), None, ray)

    x = current_x()
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult(OPTIMAL, x, value)
