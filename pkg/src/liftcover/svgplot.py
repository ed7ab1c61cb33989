"""Deterministic SVG rendering of 2-d covering pictures: the body, the
spindles of its lifting region, their lattice translates over the
viewport, and the points of S.

No floats: exact rationals are rendered as fixed-precision decimal
strings by integer arithmetic.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .bodies import SFreeBody
from .covering import build_covering_setup
from .lattices import TruncatedAffineLattice, enumerate_points
from .linalg import QVector
from .polyhedra import HPolyhedron, intersect, interior_point, vertices_2d
from .rationals import rat

_VIEW = rat(2)          # viewport [-2, 2]^2
_CANVAS = 640           # px
_PREC = 3


def _dec(x) -> str:
    """Fixed-precision decimal string of an exact rational (no floats)."""
    x = rat(x)
    scale = 10 ** _PREC
    num = x.numerator * scale
    den = x.denominator
    q, r = divmod(num, den)
    if 2 * r >= den:
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{_PREC}d}"


def _px(x):
    # map [-VIEW, VIEW] to [0, CANVAS]; y flipped
    return (x + _VIEW) * rat(_CANVAS) / (2 * _VIEW)


def _pt(p) -> str:
    return f"{_dec(_px(p[0]))},{_dec(_px(-p[1]))}"


def _polygon(poly: HPolyhedron, style: str) -> Optional[str]:
    view = HPolyhedron.box([-_VIEW, -_VIEW], [_VIEW, _VIEW])
    clipped = intersect(poly, view)
    if interior_point(clipped) is None:
        return None
    verts = vertices_2d(clipped)
    if len(verts) < 3:
        return None
    points = " ".join(_pt(v) for v in verts)
    return f'<polygon points="{points}" {style}/>'


def render_covering(s: TruncatedAffineLattice, body: SFreeBody) -> str:
    """SVG of the lifting region, its translates over the viewport, the
    body outline, and the visible points of S."""
    if body.dim != 2:
        raise ValueError("rendering is two-dimensional")
    setup = build_covering_setup(s, body)
    if setup.reduction is not None:
        raise ValueError("rendering expects a pair that needs no reduction")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_CANVAS}" '
        f'height="{_CANVAS}" viewBox="0 0 {_CANVAS} {_CANVAS}">',
        f'<rect width="{_CANVAS}" height="{_CANVAS}" fill="white"/>',
    ]
    # axes
    mid = _dec(rat(_CANVAS, 2))
    parts.append(f'<line x1="0" y1="{mid}" x2="{_CANVAS}" y2="{mid}" '
                 'stroke="#cccccc" stroke-width="1"/>')
    parts.append(f'<line x1="{mid}" y1="0" x2="{mid}" y2="{_CANVAS}" '
                 'stroke="#cccccc" stroke-width="1"/>')

    # spindle translates over the viewport (in ambient coordinates)
    fill = 'fill="#9ecae1" fill-opacity="0.45" stroke="#3182bd" stroke-width="1"'
    wmat = setup.wmat
    d = setup.w.rank
    if d:
        from itertools import product as iproduct
        from .polyhedra import translate as poly_translate
        from .rationals import qceil, qfloor
        for sp in setup.region:
            for z in iproduct(range(-4, 5), repeat=d):
                if not any(z):
                    continue
                w = wmat.matvec(QVector(z))
                poly = poly_translate(sp.region, w)
                el = _polygon(poly, fill)
                if el:
                    parts.append(el)
    # the region itself, highlighted
    strong = 'fill="#fdae6b" fill-opacity="0.6" stroke="#e6550d" stroke-width="1.5"'
    for sp in setup.region:
        el = _polygon(sp.region, strong)
        if el:
            parts.append(el)
    # body outline
    outline = 'fill="none" stroke="#31a354" stroke-width="2"'
    el = _polygon(body.polyhedron, outline)
    if el:
        parts.append(el)
    # S points
    for p in enumerate_points(s, [-_VIEW, -_VIEW], [_VIEW, _VIEW]):
        parts.append(f'<circle cx="{_dec(_px(p[0]))}" cy="{_dec(_px(-p[1]))}" '
                     'r="3" fill="#333333"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
