import itertools
import math
import random

import numpy as np
from hypothesis import given, settings, strategies as st

from geomineq.bodies import make_cross_polytope, make_cube, make_random_hull
from geomineq.mixed import (
    MixedVolumeEngine,
    ball_approx,
    box_mixed_volume_permanent,
    box_polytope,
    fedotov_factorization_check,
    intrinsic_volume,
    kubota_cauchy_check,
    mixed_volume,
    mixed_volume_via_interpolation,
    quermassintegral,
    segment_pair_mixed,
    unit_ball_volume,
)
from geomineq.polytope import convex_hull, linear_image, minkowski_sum
from geomineq.rational import Rat, rat

sides = st.lists(st.integers(min_value=1, max_value=5), min_size=3, max_size=3)


def permanent(m):
    n = len(m)
    total = Rat(0)
    for perm in itertools.permutations(range(n)):
        prod = Rat(1)
        for i, j in enumerate(perm):
            prod *= m[i][j]
        total += prod
    return total


def test_mixed_volume_of_equal_bodies_is_volume():
    c = make_cube(3)
    b1 = make_cross_polytope(3)
    assert mixed_volume([c, c, c]) == 1
    assert mixed_volume([b1], multiplicities=[3]) == Rat(4, 3)


def test_mixed_volume_cube_cross():
    c = make_cube(3)
    b1 = make_cross_polytope(3)
    assert mixed_volume([c, b1], multiplicities=[2, 1]) == 2


def test_mixed_volume_slot_symmetry():
    c = make_cube(3)
    b1 = make_cross_polytope(3)
    s = convex_hull([[rat(0)] * 3, [rat(1), rat(1), rat(0)]])
    orders = [(c, b1, s), (s, c, b1), (b1, s, c)]
    values = {mixed_volume(list(o)) for o in orders}
    assert len(values) == 1


def test_mixed_volume_minkowski_linearity():
    rnd = random.Random("mv-linear")
    for _ in range(5):
        pts = lambda: [[rat(rnd.randint(-2, 2)) for _ in range(3)]
                       for _ in range(6)]
        a, a2, b = convex_hull(pts()), convex_hull(pts()), convex_hull(pts())
        if not all(p.is_full_dimensional() for p in (a, a2, b)):
            continue
        lhs = mixed_volume([minkowski_sum(a, a2), b], multiplicities=[1, 2])
        rhs = mixed_volume([a, b], multiplicities=[1, 2]) + \
            mixed_volume([a2, b], multiplicities=[1, 2])
        assert lhs == rhs


def test_mixed_volume_translation_invariance():
    c = make_cube(3)
    b1 = make_cross_polytope(3)
    moved = b1.translate([rat(5), rat(-2), rat(3)])
    assert mixed_volume([c, moved], multiplicities=[2, 1]) == \
        mixed_volume([c, b1], multiplicities=[2, 1])


@given(sides, sides, sides)
@settings(deadline=None, max_examples=25)
def test_box_permanent_identity(r1, r2, r3):
    rows = [[rat(x) for x in row] for row in (r1, r2, r3)]
    boxes = [box_polytope(row) for row in rows]
    assert box_mixed_volume_permanent(rows) == permanent(rows) / 6
    assert mixed_volume(boxes) == box_mixed_volume_permanent(rows)


def test_segment_pair_mixed_exact():
    assert segment_pair_mixed([rat(1), rat(0)], [rat(0), rat(1)]) == Rat(1, 2)
    assert segment_pair_mixed([rat(1), rat(1)], [rat(2), rat(2)]) == 0
    got = segment_pair_mixed([rat(2), rat(0)], [rat(1), rat(3)])
    assert got == 3


def test_segment_pair_matches_engine():
    u = [rat(1), rat(2)]
    v = [rat(-1), rat(1)]
    su = convex_hull([[rat(0), rat(0)], u])
    sv = convex_hull([[rat(0), rat(0)], v])
    assert mixed_volume([su, sv]) == segment_pair_mixed(u, v)


def test_projection_identity_cube():
    c = make_cube(3)
    seg = convex_hull([[rat(0)] * 3, [rat(0), rat(0), rat(1)]])
    assert 3 * mixed_volume([c, c, seg]) == 1


def test_interpolation_agrees_with_polarization():
    a = make_cube(3)
    b = make_cross_polytope(3)
    eng = MixedVolumeEngine()
    for ma in (1, 2):
        got = mixed_volume_via_interpolation(a, b, ma, 3 - ma, engine=eng)
        assert got == mixed_volume([a, b], multiplicities=[ma, 3 - ma],
                                   engine=eng)


def test_fedotov_slack_zero():
    c = make_cube(4)
    k2 = make_random_hull(4, 8, seed=3)
    l1 = convex_hull([[rat(0)] * 4, [rat(0), rat(0), rat(1), rat(0)],
                      [rat(0), rat(0), rat(0), rat(1)],
                      [rat(0), rat(0), rat(1), rat(1)]])
    rep = fedotov_factorization_check((1, 2), [c, k2], [l1, l1])
    assert rep.lhs == rep.rhs


def test_unit_ball_volume():
    assert math.isclose(unit_ball_volume(0), 1.0, rel_tol=1e-12)
    assert math.isclose(unit_ball_volume(1), 2.0, rel_tol=1e-12)
    assert math.isclose(unit_ball_volume(2), math.pi, rel_tol=1e-12)
    assert math.isclose(unit_ball_volume(3), 4 * math.pi / 3, rel_tol=1e-12)


def test_ball_approx_sandwich():
    approx = ball_approx(3, 3)
    for v in approx.inner.vertices:
        assert sum(x * x for x in v) <= 1
    rad_sq = approx.inradius * approx.inradius
    for v in approx.inner.vertices:
        norm_sq = sum(x * x for x in v)
        assert norm_sq >= rad_sq
    assert approx.inner.volume() < unit_ball_volume(3) < approx.outer.volume()


def test_quermassintegral_cube_interval():
    lo, hi = quermassintegral(make_cube(3), 1, 4)
    assert lo <= 2 <= hi
    assert float(hi - lo) < 0.2


def test_quermassintegral_extremes():
    c = make_cube(3)
    lo, hi = quermassintegral(c, 0, 3)
    assert lo == hi == 1


def test_intrinsic_volume_cube():
    lo, hi = intrinsic_volume(make_cube(3), 2, 4)
    assert lo <= 3.0000001 and 2.9999999 <= hi
    lo, hi = intrinsic_volume(make_cube(3), 1, 4)
    assert lo <= 3.0000001 and 2.9999999 <= hi


def test_kubota_cauchy_cube():
    rep = kubota_cauchy_check(make_cube(3), samples=2000, seed=1)
    assert math.isclose(rep.calibrated_constant, 4.0, rel_tol=1e-12)
    assert abs(rep.ratio - 4.0) <= 4 * rep.ratio_stderr
    assert rep.constant_note


def test_scaling_is_homogeneous_per_slot():
    a = make_cube(3)
    b = make_cross_polytope(3)
    base = mixed_volume([a, b], multiplicities=[2, 1])
    assert mixed_volume([a.scale(rat(2)), b], multiplicities=[2, 1]) == \
        4 * base
    assert mixed_volume([a, b.scale(rat(3))], multiplicities=[2, 1]) == \
        3 * base


def test_linear_image_multiplies_by_determinant():
    b = make_cross_polytope(3)
    m = [[rat(2), rat(0), rat(0)], [rat(0), rat(1), rat(0)],
         [rat(0), rat(0), rat(1)]]
    assert mixed_volume([linear_image(b, m)], multiplicities=[3]) == \
        2 * b.volume()
