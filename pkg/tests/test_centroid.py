import math

import numpy as np
import pytest

from geomineq.bodies import make_centered_cube, make_cross_polytope, make_cube
from geomineq.centroid import (
    NormalizedBody,
    duality_ratio,
    inclusion_ratio,
    make_directions,
    normalize,
    nth_root_exact,
    support_Zp,
    z_inf_body,
    zp_projection,
)
from geomineq.rational import Rat, rat


def cube_Zp_support(p):
    """h_{Z_p(Q_n)}(e_1) for the centered unit cube: moment of |x_1|."""
    return (0.5 ** p / (p + 1)) ** (1 / p)


def test_normalize_centers_and_scales():
    nb = normalize(make_cube(3))
    assert nb.n == 3
    assert nb.volume == 1
    assert tuple(nb.base.centroid()) == (0, 0, 0)
    assert nb.lam_exact == 1


def test_normalize_rejects_flat_body():
    from geomineq.polytope import convex_hull
    flat = convex_hull([[rat(0), rat(0)], [rat(1), rat(0)]])
    with pytest.raises(ValueError):
        normalize(flat)


def test_nth_root_exact():
    assert nth_root_exact(rat(8), 3) == 2
    assert nth_root_exact(rat(27, 8), 3) == Rat(3, 2)
    assert nth_root_exact(rat(2), 2) is None


def test_normalize_scaling_lambda():
    body = make_centered_cube(3).scale(rat(2))
    nb = normalize(body)
    assert nb.lam_exact == Rat(1, 2)
    assert nb.materialized is not None
    assert nb.materialized.volume() == 1


def test_support_cube_closed_form():
    nb = normalize(make_centered_cube(3))
    for p in (1.0, 2.0):
        est = support_Zp(nb, p, [1.0, 0.0, 0.0], samples=40000, seed=5)
        assert est.within(cube_Zp_support(p), sigmas=3.5)
        assert est.stderr < 0.01


def test_support_is_even():
    nb = normalize(make_centered_cube(3))
    a = support_Zp(nb, 2.0, [0.0, 1.0, 0.0], samples=20000, seed=9)
    b = support_Zp(nb, 2.0, [0.0, -1.0, 0.0], samples=20000, seed=9)
    assert math.isclose(a.value, b.value, rel_tol=1e-12)


def test_support_monotone_in_p():
    nb = normalize(make_cross_polytope(3))
    y = [1.0, 0.0, 0.0]
    vals = [support_Zp(nb, p, y, samples=30000, seed=2).value
            for p in (1.0, 2.0, 4.0)]
    assert vals[0] <= vals[1] + 1e-3
    assert vals[1] <= vals[2] + 1e-3


def test_z_inf_body_of_cube():
    nb = normalize(make_centered_cube(2))
    z = z_inf_body(nb)
    assert z.contains([rat(1, 2), rat(1, 2)])
    assert z.volume() == 4 * Rat(1, 4)


def test_make_directions_unit_norm():
    dirs = make_directions(3, 20, seed=4)
    norms = np.linalg.norm(dirs, axis=1)
    assert np.allclose(norms, 1.0)
    assert dirs.shape[1] == 3
    assert dirs.shape[0] >= 20


def test_zp_projection_full_space_matches_support():
    nb = normalize(make_centered_cube(2))
    proj = zp_projection(nb, 2.0, (1, 2), extra_directions=12,
                         samples=20000, seed=3)
    assert proj.volume_lo <= proj.volume_hi
    assert proj.volume_lo > 0


def test_duality_ratio_cube_plane():
    nb = normalize(make_centered_cube(3))
    dr = duality_ratio(nb, (1, 2), samples=30000, seed=0)
    assert not dr.degenerate
    assert dr.k == 2
    assert 0.3 < dr.lo <= dr.hi < 1.2
    assert dr.section_volume == pytest.approx(1.0, rel=1e-9)


def test_duality_ratio_line_subspace():
    nb = normalize(make_centered_cube(3))
    dr = duality_ratio(nb, (2,), samples=30000, seed=1)
    assert dr.k == 1
    assert dr.lo <= dr.hi


def test_inclusion_ratio_orders_p():
    nb = normalize(make_centered_cube(3))
    rep = inclusion_ratio(nb, 1.0, 3.0, samples=15000, seed=7)
    assert rep.max_ratio_q_over_p >= 1.0 - 1e-6
    assert rep.min_ratio_p_over_inf <= 1.0 + 1e-6
