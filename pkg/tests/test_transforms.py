import itertools
import random

import pytest

from liftcover.bodies import SFreeBody, is_maximal, is_s_free, psi
from liftcover.covering import (build_covering_setup, check_covering,
                                lifting_region, make_spindle)
from liftcover.gallery import crosspolytope, simplex_limit_family, split
from liftcover.lattices import TruncatedAffineLattice, product
from liftcover.linalg import QMatrix, QVector, inverse
from liftcover.polyhedra import (HPolyhedron, affine_image, poly_contains_poly,
                                 poly_equal)
from liftcover.rationals import rat
from liftcover.transforms import (AffineMap, LimitInstance,
                                  OriginNotInteriorError, affine_transform,
                                  coproduct, coproduct_many, facet_map,
                                  facet_map_matrix, transformed_normals,
                                  verify_limit)

from conftest import random_affine_map, random_point_in


def test_affine_map_validation():
    with pytest.raises(ValueError):
        AffineMap([[1, 1], [2, 2]], [0, 0])
    t = AffineMap([[2, 0], [0, 1]], [1, 0])
    assert t.apply([1, 1]) == QVector([3, 1])
    assert t.inverse_map().apply(t.apply(["1/3", "5/7"])) == QVector(["1/3", "5/7"])


def test_transformed_normals_examples(split1):
    _, b = split1
    t = AffineMap([[1]], ["1/4"])
    assert transformed_normals(b, t) == (QVector(["4/3"]), QVector([-4]))
    t0 = AffineMap([[1]], [0])
    assert transformed_normals(b, t0) == b.normals
    cross = SFreeBody([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    doubled = transformed_normals(cross, AffineMap([[2, 0], [0, 2]], [0, 0]))
    assert doubled == tuple(a * rat(1, 2) for a in cross.normals)


def test_transform_origin_precondition(split1):
    _, b = split1
    with pytest.raises(OriginNotInteriorError) as err:
        transformed_normals(b, AffineMap([[1]], [1]))
    assert err.value.facet is not None


def test_affine_transform_setwise(cross2):
    s, b = cross2
    rng = random.Random(13)
    for trial in range(5):
        t = random_affine_map(rng, 2, b)
        s2, b2 = affine_transform(s, b, t)
        for _ in range(20):
            r = QVector([rat(rng.randint(-24, 24), 8) for _ in range(2)])
            assert b.contains(r) == b2.contains(t.apply(r))
        # S maps onto S'
        from liftcover.lattices import enumerate_points
        for p in enumerate_points(s, [-2, -2], [2, 2]):
            assert s2.contains(t.apply(p))


def test_facet_map_examples(split1):
    _, b = split1
    t = AffineMap([[1]], ["1/4"])
    assert facet_map(b, t, 0, ["1/2"]) == QVector(["3/4"])
    t0 = AffineMap([[2]], [0])
    assert facet_map(b, t0, 1, ["1/2"]) == QVector([1])
    with pytest.raises(IndexError):
        facet_map(b, t, 5, ["1/2"])


def test_facet_map_inverse_round_trip(cross2):
    """The facet map of the inverse transform inverts the facet map."""
    s, b = cross2
    rng = random.Random(17)
    t = random_affine_map(rng, 2, b)
    s2, b2 = affine_transform(s, b, t)
    tinv = t.inverse_map()
    for i in range(b.facet_count):
        fwd = facet_map_matrix(b, t, i)
        back = facet_map_matrix(b2, tinv, i)
        assert back.matmul(fwd) == QMatrix.identity(2)
        for _ in range(10):
            r = QVector([rat(rng.randint(-16, 16), 8) for _ in range(2)])
            assert facet_map(b2, tinv, i, facet_map(b, t, i, r)) == r


def test_facet_map_carries_spindles(cross2):
    """Image of each spindle under its facet map is the image spindle."""
    s, b = cross2
    rng = random.Random(19)
    for trial in range(3):
        t = random_affine_map(rng, 2, b)
        s2, b2 = affine_transform(s, b, t)
        for sp in lifting_region(s, b):
            fmat = facet_map_matrix(b, t, sp.facet_index)
            img = affine_image(sp.region, inverse(fmat), QVector.zero(2))
            target = make_spindle(b2, t.apply(sp.anchor))
            assert poly_equal(img, target.region)


def test_patching_consistency(cross2):
    """Transformed points agree where translated spindles overlap."""
    s, b = cross2
    rng = random.Random(23)
    t = random_affine_map(rng, 2, b)
    setup = build_covering_setup(s, b)
    spindles = list(setup.region)
    wmat = setup.wmat
    checked = 0
    for s1, s2 in itertools.combinations(range(len(spindles)), 2):
        for zpair in itertools.product(range(-1, 2), repeat=4):
            w1 = wmat.matvec(QVector(zpair[:2]))
            w2 = wmat.matvec(QVector(zpair[2:]))
            from liftcover.polyhedra import translate, intersect, interior_point
            inter = intersect(translate(spindles[s1].region, w1),
                              translate(spindles[s2].region, w2))
            x = interior_point(inter)
            if x is None:
                continue
            i1, i2 = spindles[s1].facet_index, spindles[s2].facet_index
            lhs = facet_map(b, t, i1, x - w1) + t.m_mat.matvec(w1)
            rhs = facet_map(b, t, i2, x - w2) + t.m_mat.matvec(w2)
            assert lhs == rhs
            checked += 1
    assert checked >= 4


def test_collision_lemma(cross2):
    """Touching translates see the same gauge height, and interior
    collisions force equal facet normals."""
    s, b = cross2
    rng = random.Random(29)
    setup = build_covering_setup(s, b)
    spindles = list(setup.region)
    wmat = setup.wmat
    equal_height = 0
    interior_equal = 0
    for _ in range(300):
        sp1 = rng.choice(spindles)
        x1 = random_point_in(rng, sp1.region)
        z = QVector([rng.randint(-2, 2), rng.randint(-2, 2)])
        x2 = x1 - wmat.matvec(z)
        for sp2 in spindles:
            if sp2.region.contains(x2):
                a1 = b.normals[sp1.facet_index]
                a2 = b.normals[sp2.facet_index]
                assert a1.dot(x1) == a2.dot(x2)
                equal_height += 1
                if sp1.region.contains(x1, strict=True) and \
                        sp2.region.contains(x2, strict=True):
                    assert a1 == a2
                    interior_equal += 1
                break
    assert equal_height >= 100
    assert interior_equal >= 10


def test_covering_invariance_under_affine_maps(cross2):
    s, b = cross2
    rng = random.Random(37)
    base = check_covering(s, b).covered
    for _ in range(4):
        t = random_affine_map(rng, 2, b)
        s2, b2 = affine_transform(s, b, t)
        assert check_covering(s2, b2).covered == base


def test_coproduct_examples(split1):
    _, b = split1
    c = coproduct(b, b, rat(1, 2))
    assert set(map(tuple, c.normals)) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert c.facet_count == 4
    with pytest.raises(ValueError):
        coproduct(b, b, rat(1))
    with pytest.raises(ValueError):
        coproduct(b, b, 0)


def test_coproduct_many_weights():
    b = SFreeBody([(2,), (-2,)])
    c = coproduct_many([b, b, b], [rat(1, 3)] * 3)
    assert c.dim == 3 and c.facet_count == 8
    with pytest.raises(ValueError):
        coproduct_many([b, b], [rat(1, 3), rat(1, 3)])


def test_coproduct_triangle_interval_has_six_facets():
    tri = SFreeBody([(-2, 0), (0, -2), (1, 1)])
    interval = SFreeBody([(2,), (-2,)])
    c = coproduct(tri, interval, rat(1, 2))
    assert c.facet_count == 6
    assert c.dim == 3


def test_coproduct_spindle_product_containment(split1, cross2):
    s1, b1 = split1
    s2, b2 = cross2
    mu = rat(1, 2)
    c = coproduct(b1, b2, mu)
    sp = product(s1, s2)
    lr1 = lifting_region(s1, b1)
    lr2 = lifting_region(s2, b2)
    for r1 in lr1:
        for r2 in lr2:
            anchor = QVector(list(r1.anchor) + list(r2.anchor))
            spc = make_spindle(c, anchor)
            prod_rows = [(QVector(list(q) + [0, 0]), d)
                         for q, d in r1.region.rows()]
            prod_rows += [(QVector([0] + list(q)), d)
                          for q, d in r2.region.rows()]
            prod_poly = HPolyhedron.from_rows(prod_rows, 3)
            assert poly_contains_poly(spc.region, prod_poly)


def test_coproduct_freeness_maximality_covering(split1):
    s1, b1 = split1
    for mu in (rat(1, 4), rat(2, 3)):
        c = coproduct(b1, b1, mu)
        sp = product(s1, s1)
        assert is_s_free(c, sp).kind == "free"
        assert is_maximal(c, sp).kind == "maximal"
        assert check_covering(sp, c).covered


def test_verify_limit_constant_sequence(cross2):
    s, b = cross2
    inst = LimitInstance(s, (b, b), b)
    rep = verify_limit(inst)
    assert rep.all_samples_covered and rep.limit_covered and rep.consistent
    assert rep.limit_intersection_polytope


def test_verify_limit_crosspolytope_to_simplex():
    inst = simplex_limit_family([2, 2], ts=(2, 4))
    rep = verify_limit(inst)
    assert rep.all_samples_covered
    assert rep.limit_covered
    assert rep.consistent


def test_limit_instance_validation(cross2):
    s, b = cross2
    with pytest.raises(ValueError):
        LimitInstance(s, (), b)
    other = SFreeBody([(2, 0), (-2, 0), (0, 2), (0, -2)])
    with pytest.raises(ValueError):
        LimitInstance(s, (b, other), b)  # mixed facet counts


def test_sample_normals_approach_limit():
    """Monotone entrywise convergence spot-check for the limit family."""
    inst = simplex_limit_family([2, 2], ts=(2, 4, 8, 16))
    limit_set = sorted(map(tuple, inst.limit.normals))
    prev = None
    for sample in inst.samples:
        # match each limit normal to its closest sample normal
        total = rat(0)
        for ln in limit_set:
            best = None
            for sn in map(tuple, sample.normals):
                dist = sum(abs(a - b) for a, b in zip(sn, ln))
                best = dist if best is None or dist < best else best
            total += best
        if prev is not None:
            assert total <= prev
        prev = total
    assert prev <= rat(1, 2)
