import itertools
import math
import random

import numpy as np
from hypothesis import given, settings, strategies as st

from geomineq.bodies import make_cross_polytope, make_cube, make_simplex
from geomineq.polytope import (
    Hyperplane,
    convex_hull,
    linear_image,
    minkowski_sum,
    orthonormal_complement,
    project_complement,
    project_coordinate,
    project_volume_float,
    section_coordinate,
    section_hyperplane,
    section_volume_float,
    surface_area,
)
from geomineq.rational import Rat, rat

coords = st.integers(min_value=-4, max_value=4)


def points(n, k):
    return st.lists(st.lists(coords, min_size=n, max_size=n),
                    min_size=k, max_size=k)


def test_standard_volumes():
    assert make_cube(3).volume() == 1
    assert make_cross_polytope(3).volume() == Rat(4, 3)
    assert make_simplex(4).volume() == Rat(1, 24)
    assert make_cross_polytope(5).volume() == Rat(2**5, 120)


def test_high_dimensional_cube_volumes():
    assert make_cube(5).volume() == 1
    assert make_cube(6).volume() == 1
    box = convex_hull([list(p) for p in itertools.product(
        *[(rat(0), rat(c)) for c in (6, 5, 4, 2, 5)])])
    assert box.volume() == 1200


def test_hull_of_degenerate_set():
    p = convex_hull([[rat(0), rat(0)], [rat(1), rat(1)], [rat(2), rat(2)]])
    assert not p.is_full_dimensional()
    assert p.intrinsic_dim == 1
    assert math.isclose(float(p.volume()), 2 * math.sqrt(2), rel_tol=1e-12)


def test_vertex_reduction():
    pts = [[rat(0), rat(0)], [rat(2), rat(0)], [rat(0), rat(2)],
           [rat(2), rat(2)], [rat(1), rat(1)]]
    p = convex_hull(pts)
    assert p.n_vertices == 4
    assert p.volume() == 4


def test_contains():
    c = make_cube(3)
    assert c.contains([rat(1, 2), rat(1, 2), rat(1, 2)])
    assert c.contains([rat(0), rat(0), rat(0)])
    assert not c.contains([rat(1), rat(1), rat(2)])


def test_centroid():
    assert tuple(make_cube(2).centroid()) == (Rat(1, 2), Rat(1, 2))
    assert tuple(make_cross_polytope(3).centroid()) == (0, 0, 0)


def test_coordinate_projection_cube():
    c = make_cube(3)
    q = project_coordinate(c, (1, 2))
    assert q.ambient_dim == 2
    assert q.volume() == 1


def test_coordinate_projection_cross():
    b1 = make_cross_polytope(3)
    q = project_coordinate(b1, (1, 3))
    assert q.volume() == 2


def test_complement_projection_matches():
    b1 = make_cross_polytope(4)
    assert project_complement(b1, (2,)).volume() == \
        project_coordinate(b1, (1, 3, 4)).volume()


def test_coordinate_section_cross():
    b1 = make_cross_polytope(3)
    s = section_coordinate(b1, (1, 2))
    assert s.volume() == 2


def test_hyperplane_section_cube():
    c = make_cube(3).translate([rat(-1, 2)] * 3)
    plane = Hyperplane(normal=(rat(1), rat(1), rat(0)), offset=rat(0))
    s = section_hyperplane(c, plane)
    vol, rad = s.volume_sqrt_parts()
    assert vol * vol * rad == 2


def test_linear_image_scaling():
    b1 = make_cross_polytope(3)
    m = [[rat(2), rat(0), rat(0)], [rat(0), rat(3), rat(0)],
         [rat(0), rat(0), rat(5)]]
    assert linear_image(b1, m).volume() == 30 * b1.volume()


def test_minkowski_sum_cubes():
    c = make_cube(3)
    s = minkowski_sum(c, c)
    assert s.volume() == 8


def test_minkowski_segment_square():
    seg = convex_hull([[rat(0), rat(0)], [rat(1), rat(1)]])
    sq = make_cube(2)
    s = minkowski_sum(seg, sq)
    assert s.volume() == 3


def test_surface_area_cube():
    assert surface_area(make_cube(3)) == 6
    assert surface_area(make_cube(4)) == 8


def test_surface_area_cross():
    got = surface_area(make_cross_polytope(3))
    assert math.isclose(float(got), 4 * math.sqrt(3), rel_tol=1e-12)


def test_surface_area_segment():
    seg = convex_hull([[rat(0)], [rat(5)]])
    assert surface_area(seg) == 2


def test_dict_roundtrip():
    b1 = make_cross_polytope(3)
    again = type(b1).from_dict(b1.to_dict())
    assert again.volume() == b1.volume()
    assert sorted(map(tuple, again.vertices)) == \
        sorted(map(tuple, b1.vertices))


def test_orthonormal_complement_rows():
    u = np.array([0.0, 0.0, 1.0])
    basis = orthonormal_complement(u)
    assert basis.shape == (2, 3)
    assert np.allclose(basis @ u, 0.0)
    assert np.allclose(basis @ basis.T, np.eye(2))


def test_float_projection_matches_exact():
    c = make_cube(3)
    basis = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    got = project_volume_float(c, basis)
    assert math.isclose(got, 1.0, rel_tol=1e-9)


def test_float_section_matches_exact():
    b1 = make_cross_polytope(3)
    got = section_volume_float(b1, np.array([0.0, 0.0, 1.0]))
    assert math.isclose(got, 2.0, rel_tol=1e-9)


@given(points(2, 6))
def test_volume_translation_invariant(pts)    :
    p = convex_hull([[rat(x) for x in pt] for pt in pts])
    q = p.translate([rat(7), rat(-3)])
    assert p.volume() == q.volume()


@given(points(3, 6))
@settings(deadline=None)
def test_volume_permutation_invariant(pts):
    p = convex_hull([[rat(x) for x in pt] for pt in pts])
    if not p.is_full_dimensional():
        return
    perm = [[rat(0), rat(1), rat(0)], [rat(0), rat(0), rat(1)],
            [rat(1), rat(0), rat(0)]]
    assert linear_image(p, perm).volume() == p.volume()


@given(points(2, 5), points(2, 5))
@settings(deadline=None)
def test_minkowski_volume_superadditive(a, b):
    pa = convex_hull([[rat(x) for x in pt] for pt in a])
    pb = convex_hull([[rat(x) for x in pt] for pt in b])
    if not (pa.is_full_dimensional() and pb.is_full_dimensional()):
        return
    s = minkowski_sum(pa, pb)
    assert s.volume() >= pa.volume() + pb.volume()


@given(points(3, 8))
@settings(deadline=None, max_examples=40)
def test_projection_volume_monotone_in_body(pts):
    p = convex_hull([[rat(x) for x in pt] for pt in pts])
    if not p.is_full_dimensional():
        return
    sub = convex_hull(p.vertices[:4])
    for tau in ((1,), (1, 2), (2, 3)):
        assert project_coordinate(sub, tau).volume() <= \
            project_coordinate(p, tau).volume()


def test_brunn_minkowski_on_random_pairs():
    rnd = random.Random("bm-check")
    for _ in range(10):
        a = convex_hull([[rat(rnd.randint(-3, 3)) for _ in range(3)]
                         for _ in range(7)])
        b = convex_hull([[rat(rnd.randint(-3, 3)) for _ in range(3)]
                         for _ in range(7)])
        if not (a.is_full_dimensional() and b.is_full_dimensional()):
            continue
        s = minkowski_sum(a, b)
        lhs = float(s.volume()) ** (1 / 3)
        rhs = float(a.volume()) ** (1 / 3) + float(b.volume()) ** (1 / 3)
        assert lhs >= rhs - 1e-9


def test_loomis_whitney_cube_tight():
    c = make_cube(3)
    prod = Rat(1)
    for i in (1, 2, 3):
        tau = tuple(j for j in (1, 2, 3) if j != i)
        prod *= project_coordinate(c, tau).volume()
    assert c.volume() ** 2 == prod


def test_projections_of_simplex():
    s = make_simplex(3)
    for tau in itertools.combinations((1, 2, 3), 2):
        assert project_coordinate(s, tau).volume() == Rat(1, 2)
