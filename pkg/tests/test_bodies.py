import random

import pytest
from hypothesis import given, settings, strategies as st

from liftcover.bodies import (BodyError, FREE, FREE_ON_WINDOW, MAXIMAL,
                              MAXIMAL_ON_WINDOW, SFreeBody, eval_psi,
                              facet_space, is_maximal, is_s_free, psi,
                              try_reduce)
from liftcover.lattices import TruncatedAffineLattice
from liftcover.linalg import QMatrix, QVector
from liftcover.polyhedra import HPolyhedron, bounding_box, intersect
from liftcover.rationals import rat

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=16)


@pytest.fixture
def shifted2():
    return TruncatedAffineLattice.standard(["1/2", "1/2"])


def test_body_validation():
    with pytest.raises(BodyError):
        SFreeBody([])
    with pytest.raises(BodyError):
        SFreeBody([(1, 0), (1, 0)])
    with pytest.raises(BodyError):
        SFreeBody([(1, 0), (0, 1)] + [(2, 0)])  # (1,0) row is redundant
    with pytest.raises(BodyError):
        SFreeBody([(0, 0)])
    b = SFreeBody.from_inequalities(QMatrix([[1, 0], [0, 2]], ncols=2), [2, 1])
    assert set(map(tuple, b.normals)) == {(rat(1, 2), 0), (0, 2)}
    with pytest.raises(BodyError):
        SFreeBody.from_inequalities(QMatrix([[1, 0]], ncols=2), [0])


def test_psi_examples():
    b = SFreeBody([(2,), (-2,)])
    assert eval_psi(b, ["1/4"]) == (rat(1, 2), 0)
    assert eval_psi(b, [0]) == (0, 0)
    cross = SFreeBody([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert eval_psi(cross, ["1/2", 0]).value == rat(1, 2)
    # argmax ties resolve to the lowest index
    assert eval_psi(cross, ["1/2", 0]).argmax == 0


@given(st.lists(rationals, min_size=2, max_size=2),
       st.lists(rationals, min_size=2, max_size=2),
       st.fractions(min_value=0, max_value=5, max_denominator=6))
@settings(max_examples=80, deadline=None)
def test_psi_homogeneous_subadditive(r1, r2, lam):
    cross = SFreeBody([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    v1, v2 = QVector(r1), QVector(r2)
    assert psi(cross, v1 * rat(lam)) == rat(lam) * psi(cross, v1)
    assert psi(cross, v1 + v2) <= psi(cross, v1) + psi(cross, v2)


def test_psi_membership_characterization(shifted2):
    cross = SFreeBody([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    rng = random.Random(2)
    from liftcover.lattices import enumerate_points
    for p in enumerate_points(shifted2, [-2, -2], [2, 2]):
        assert psi(cross, p) >= 1
        if cross.contains(p):
            assert psi(cross, p) == 1
    for _ in range(50):
        x = QVector([rat(rng.randint(-16, 16), 8) for _ in range(2)])
        assert (psi(cross, x) <= 1) == cross.contains(x)


def test_is_s_free_examples(shifted2):
    s1 = TruncatedAffineLattice.standard(["1/2"])
    assert is_s_free(SFreeBody([(2,), (-2,)]), s1).kind == FREE
    v = is_s_free(SFreeBody([(1,), (-1,)]), s1)
    assert v.kind == "violated" and abs(v.violator[0]) == rat(1, 2)
    # halfspace over a halfspace-truncated lattice: exact via reduction
    half_hull = HPolyhedron.from_rows([((-1, 0), "-1/2")], 2)
    st_trunc = TruncatedAffineLattice.standard(["1/2", "1/2"], half_hull)
    assert is_s_free(SFreeBody([(2, 0)]), st_trunc).kind == FREE
    # untruncated: the halfspace has interior shifted-lattice points
    v = is_s_free(SFreeBody([(2, 0)]), shifted2)
    assert v.kind == "violated"


def test_is_maximal_examples(shifted2):
    s1 = TruncatedAffineLattice.standard(["1/2"])
    assert is_maximal(SFreeBody([(2,), (-2,)]), s1).kind == MAXIMAL
    v = is_maximal(SFreeBody([(4,), (-2,)]), s1)
    assert v.kind == "facet-without-point" and v.facet == 0
    cross = SFreeBody([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    m = is_maximal(cross, shifted2)
    assert m.kind == MAXIMAL
    assert all(len(pts) == 1 for pts in m.facet_points)


def test_facet_space_examples():
    assert facet_space(SFreeBody([(2,), (-2,)])).subspace.dim == 0
    assert facet_space(SFreeBody([(1, 0)])).subspace.dim == 2
    slab = SFreeBody([(2, 0), (-2, 0)])
    fs = facet_space(slab).subspace
    assert fs.basis == (QVector([0, 1]),)
    for d in fs.basis:
        for a in slab.normals:
            assert a.dot(d) == slab.normals[0].dot(d)


def test_reduce_unbounded_slab(shifted2):
    slab = SFreeBody([(2, 0), (-2, 0)])
    red = try_reduce(shifted2, slab)
    assert red is not None
    assert red.dropped.basis == (QVector([0, 1]),)
    assert set(map(tuple, red.body.normals)) == {(2,), (-2,)}
    assert red.s.same_set(TruncatedAffineLattice.standard(["1/2"]))
    kbar = intersect(red.body.polyhedron, red.s.hull)
    assert bounding_box(kbar) is not None


def test_reduce_identity_for_bounded(shifted2):
    cross = SFreeBody([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert try_reduce(shifted2, cross) is None


def test_reduce_translated_cone():
    # wedge over a halfspace-truncated lattice is already a polytope case
    half_hull = HPolyhedron.from_rows([((-1, 0), "-1/2")], 2)
    s = TruncatedAffineLattice.standard(["1/2", "1/2"], half_hull)
    cone = SFreeBody([("2/3", "4/3"), ("2/3", "-4/3")])
    assert try_reduce(s, cone) is None
    assert is_s_free(cone, s).kind == FREE
    assert is_maximal(cone, s).kind == MAXIMAL


def test_window_relative_verdicts(shifted2):
    # a halfspace against the full shifted lattice cannot be reduced:
    # its recession span is not in the lineality of the body
    body = SFreeBody([(2, 0)])
    line_hull = HPolyhedron.from_rows(
        [((1, 0), "1/2"), ((-1, 0), "-1/2")], 2)
    s_line = TruncatedAffineLattice.standard(["1/2", "1/2"], line_hull)
    v = is_s_free(body, s_line)
    assert v.kind in (FREE, FREE_ON_WINDOW)
    m = is_maximal(body, s_line)
    assert m.kind in (MAXIMAL, MAXIMAL_ON_WINDOW)
