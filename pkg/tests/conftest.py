"""Shared fixtures: canonical pairs, covering reports computed once per
session, seeded random-body and random-map generators."""

from __future__ import annotations

import random

import pytest

from liftcover.bodies import SFreeBody, is_maximal, is_s_free
from liftcover.covering import check_covering
from liftcover.gallery import standard_entries
from liftcover.lattices import TruncatedAffineLattice
from liftcover.linalg import QMatrix, QVector
from liftcover.polyhedra import bounding_box, intersect, interior_point
from liftcover.rationals import rat
from liftcover.transforms import AffineMap


@pytest.fixture(scope="session")
def split1():
    return (TruncatedAffineLattice.standard([rat(1, 2)]),
            SFreeBody([(2,), (-2,)]))


@pytest.fixture(scope="session")
def cross2():
    return (TruncatedAffineLattice.standard([rat(1, 2), rat(1, 2)]),
            SFreeBody([(1, 1), (1, -1), (-1, 1), (-1, -1)]))


@pytest.fixture(scope="session")
def gallery():
    return standard_entries()


@pytest.fixture(scope="session")
def gallery_reports(gallery):
    return {e.name: check_covering(e.s, e.body) for e in gallery}


def random_rational(rng: random.Random, num_range=6, dens=(1, 2, 3, 4)):
    return rat(rng.randint(-num_range, num_range), rng.choice(dens))


def random_vector(rng: random.Random, n: int, **kw) -> QVector:
    return QVector([random_rational(rng, **kw) for _ in range(n)])


def random_affine_map(rng: random.Random, n: int, body: SFreeBody,
                      max_entry: int = 3) -> AffineMap:
    """Invertible integer-matrix map with |entries| <= max_entry and a
    small rational shift keeping the origin interior in the image."""
    from liftcover.linalg import determinant
    while True:
        rows = [[rng.randint(-max_entry, max_entry) for _ in range(n)]
                for _ in range(n)]
        mat = QMatrix(rows, ncols=n)
        if determinant(mat) == 0:
            continue
        mvec = QVector([rat(rng.randint(-2, 2), rng.choice([1, 2, 3]))
                        for _ in range(n)])
        t = AffineMap(mat, mvec)
        preimage_origin = -t.inverse_matrix.matvec(mvec)
        if body.contains(preimage_origin, strict=True):
            return t


def random_point_in(rng: random.Random, poly, box=None, attempts=400):
    """Random rational point in a full-dimensional polyhedron, clipped to
    a box when the polyhedron is unbounded."""
    from liftcover.polyhedra import HPolyhedron
    if box is None:
        bb = bounding_box(poly)
        assert bb is not None, "give a clip box for unbounded polyhedra"
        lo, hi = bb
    else:
        lo, hi = box
    for _ in range(attempts):
        x = QVector([l + (h - l) * rat(rng.randint(0, 64), 64)
                     for l, h in zip(lo, hi)])
        if poly.contains(x):
            return x
    center = interior_point(poly)
    assert center is not None
    return center


def make_random_body(rng: random.Random, s: TruncatedAffineLattice, k: int):
    """Candidate k-facet body with one facet through each of k distinct
    S-points near the origin; None when the construction degenerates."""
    from liftcover.bodies import BodyError
    cand = [QVector([rat(2 * a + 1, 2), rat(2 * b + 1, 2)])
            for a in range(-2, 2) for b in range(-2, 2)]
    pts = rng.sample(cand, k)
    normals = []
    for p in pts:
        base = p * (1 / p.dot(p))
        perp = QVector([-p[1], p[0]])
        t = rat(rng.randint(-6, 6), rng.choice([5, 7, 9]))
        normals.append(base + perp * t)
    try:
        return SFreeBody(normals)
    except BodyError:
        return None


def random_maximal_bodies(seed: int, s: TruncatedAffineLattice, count: int,
                          max_box_side=12):
    """Deterministic stream of maximal S-free triangles/quadrilaterals."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        body = make_random_body(rng, s, rng.choice([3, 4]))
        if body is None:
            continue
        bb = bounding_box(intersect(body.polyhedron, s.hull))
        if bb is None or any(h - l > max_box_side for l, h in zip(*bb)):
            continue
        if is_s_free(body, s).kind != "free":
            continue
        if is_maximal(body, s).kind != "maximal":
            continue
        out.append(body)
    return out
