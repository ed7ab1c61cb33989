import random

import pytest
from hypothesis import given, settings, strategies as st

from liftcover.linalg import QMatrix, QVector, Subspace
from liftcover.polyhedra import (EmptyPolyhedronError, HPolyhedron,
                                 UnboundedError, bounding_box,
                                 canonical_form, interior_point, intersect,
                                 is_empty, lineality_space, poly_contains_poly,
                                 poly_equal, project, recession_cone,
                                 remove_redundancy, subtract, translate,
                                 vertices_2d)
from liftcover.rationals import rat

from conftest import random_point_in


def box(lo, hi):
    return HPolyhedron.box(lo, hi)


def test_interior_point_examples():
    assert interior_point(box([0, 0], [1, 1])) == QVector(["1/2", "1/2"])
    assert interior_point(HPolyhedron.from_rows([((1,), 0), ((-1,), 0)], 1)) is None
    assert interior_point(HPolyhedron.from_rows([((1,), -1), ((-1,), -2)], 1)) is None
    # vacuous rows do not hide an interior
    p = HPolyhedron.from_rows([((0, 0), 5), ((1, 0), 1)], 2)
    assert interior_point(p) is not None


def test_bounding_box_examples():
    assert bounding_box(box([0, 0], [1, 1])) == (QVector([0, 0]), QVector([1, 1]))
    assert bounding_box(HPolyhedron.from_rows([((-1,), 0)], 1)) is None
    tri = HPolyhedron.from_rows(
        [((-1, 0), 0), ((0, -1), 0), ((1, 1), 2)], 2)
    assert bounding_box(tri) == (QVector([0, 0]), QVector([2, 2]))
    with pytest.raises(EmptyPolyhedronError):
        bounding_box(HPolyhedron.from_rows([((1,), -1), ((-1,), -2)], 1))


def test_lineality_and_recession():
    half = HPolyhedron.from_rows([((1, 0), "1/2")], 2)
    assert lineality_space(half).basis == (QVector([0, 1]),)
    assert lineality_space(box([0, 0], [1, 1])).dim == 0
    assert lineality_space(HPolyhedron.whole_space(2)).dim == 2
    ray = HPolyhedron.from_rows([((-1,), -1)], 1)
    rc = recession_cone(ray)
    assert rc.contains([5]) and not rc.contains([-1])


def test_subtract_examples():
    p = box([0], [1])
    assert subtract(p, box([0], [1])) == []
    cells = subtract(p, box(["1/4"], ["1/2"]))
    assert len(cells) == 2
    ref = [box(["1/2"], [1]), box([0], ["1/4"])]
    assert {canonical_form(c) for c in cells} == {canonical_form(r) for r in ref}
    sq = box([0, 0], [1, 1])
    cells = subtract(sq, HPolyhedron.from_rows([((1, 1), 1)], 2))
    assert len(cells) == 1
    tri = HPolyhedron.from_rows(
        [((1, 0), 1), ((0, 1), 1), ((-1, -1), -1)], 2)
    assert poly_equal(cells[0], tri)


def test_subtract_preconditions():
    with pytest.raises(UnboundedError):
        subtract(HPolyhedron.from_rows([((-1,), 0)], 1), box([0], [1]))
    with pytest.raises(ValueError):
        subtract(HPolyhedron.from_rows([((1, 0), 0), ((-1, 0), 0)], 2),
                 box([0, 0], [1, 1]))


def test_subtract_sampling_invariant():
    """Spec invariant: sampled points of P lie in Q or in a cell; interior
    cell points avoid int(Q)."""
    rng = random.Random(7)
    for _ in range(6):
        lo = [rat(rng.randint(-4, 0), 2) for _ in range(2)]
        hi = [l + rat(rng.randint(1, 6), 2) for l in lo]
        p = box(lo, hi)
        qlo = [rat(rng.randint(-4, 2), 2) for _ in range(2)]
        qhi = [l + rat(rng.randint(1, 5), 2) for l in qlo]
        rows = [((1, 0), qhi[0]), ((-1, 0), -qlo[0]),
                ((0, 1), qhi[1]), ((0, -1), -qlo[1]),
                ((1, 1), qhi[0] + qhi[1] - rat(1, 4))]
        q = HPolyhedron.from_rows(rows, 2)
        cells = subtract(p, q)
        for _ in range(170):
            x = random_point_in(rng, p)
            assert q.contains(x) or any(c.contains(x) for c in cells)
        for c in cells:
            x = interior_point(c)
            assert not q.contains(x, strict=True)


def test_project_examples():
    sq = box([0, 0], [1, 1])
    e1 = Subspace(2, [(1, 0)])
    pr = project(sq, e1)
    assert poly_equal(pr, box([0], [1]))
    tri = HPolyhedron.from_rows(
        [((1, 1), 1), ((-1, 0), 0), ((0, -1), 0)], 2)
    assert poly_equal(project(tri, e1), box([0], [1]))
    half = HPolyhedron.from_rows([((0, 1), 0)], 2)
    pr = project(half, e1)
    assert pr.n == 1 and not is_empty(pr)
    assert bounding_box(pr) is None  # all of the line


def test_project_skew_subspace_exact_fibers():
    """A point is in the projection iff its fiber meets P (LP check)."""
    tri = HPolyhedron.from_rows(
        [((1, 1), 2), ((-1, 0), 0), ((0, -1), 0)], 2)
    v = Subspace(2, [(1, 1)])
    pr = project(tri, v)
    rng = random.Random(3)
    vmat = v.matrix()
    gram = vmat.transpose().matmul(vmat)
    for _ in range(40):
        t = rat(rng.randint(-40, 40), 16)
        inside = pr.contains([t])
        # fiber: {x in P : V^T x = G t}
        from liftcover import simplex
        res = simplex.solve_lp(
            [0, 0], [list(q) for q, _ in tri.rows()],
            [d for _, d in tri.rows()],
            eq_rows=[[1, 1]], eq_rhs=[gram[0][0] * t])
        assert inside == (res.status == simplex.OPTIMAL)


def test_redundancy_removal_and_canonical_form():
    p = HPolyhedron.from_rows(
        [((1, 0), 1), ((1, 0), 2), ((2, 0), 2), ((-1, 0), 0),
         ((0, 1), 1), ((0, -1), 0), ((1, 1), 5)], 2)
    r = remove_redundancy(p)
    assert r.m == 4
    assert canonical_form(p) == canonical_form(box([0, 0], [1, 1]))


def test_poly_equality_and_containment():
    sq = box([0, 0], [1, 1])
    assert poly_contains_poly(sq, box(["1/4", "1/4"], ["1/2", "1/2"]))
    assert not poly_contains_poly(sq, box([0, 0], [2, 1]))
    assert poly_equal(translate(sq, [1, 0]), box([1, 0], [2, 1]))
    # unbounded inner set is never contained in a bounded outer one
    assert not poly_contains_poly(sq, HPolyhedron.from_rows([((0, 1), 0)], 2))


def test_vertices_2d():
    sq = box([0, 0], [1, 1])
    vs = vertices_2d(sq)
    assert len(vs) == 4
    assert set(map(tuple, vs)) == {(0, 0), (1, 0), (1, 1), (0, 1)}
    with pytest.raises(UnboundedError):
        vertices_2d(HPolyhedron.from_rows([((0, 1), 0)], 2))


def test_zero_dimensional_ambient():
    p = HPolyhedron.whole_space(0)
    assert not is_empty(p)
    assert bounding_box(p) == (QVector([]), QVector([]))
    bad = HPolyhedron.from_rows([((), -1)], 0)
    assert is_empty(bad)
