import itertools
import math
import random
import time

from geomineq.bodies import (
    make_box,
    make_centered_cube,
    make_cross_polytope,
    make_cube,
    make_diagonal_image,
    make_random_hull,
    standard_corpus,
)
from geomineq.centroid import duality_ratio, normalize, support_Zp
from geomineq.covers import UniformCover, enumerate_covers, gamma, loomis_whitney_cover
from geomineq.harness import (
    PASS,
    BodyCache,
    check_af_triple,
    check_berwald,
    check_bt_cover,
    check_dual_cover,
    check_hug_schneider_r2,
    check_meyer,
    check_nonorthogonal_pair,
    check_restricted_cover,
    check_sz,
    duality_ratio_band,
    hug_schneider_constant,
)
from geomineq.mixed import (
    box_mixed_volume_permanent,
    box_polytope,
    fedotov_factorization_check,
    kubota_cauchy_check,
    mixed_volume,
    segment_pair_mixed,
)
from geomineq.plconcave import PLConcave, berwald_sides, random_concave
from geomineq.polytope import convex_hull, project_complement, section_coordinate
from geomineq.rational import Rat, rat
from geomineq.suite import csv_text, default_suite, run_suite


def unit_segment(n, axis):
    tip = [rat(1) if c == axis else rat(0) for c in range(1, n + 1)]
    return convex_hull([[rat(0)] * n, tip])


def equal_cardinality_covers(n):
    out = []
    for r in range(2, n + 1):
        for s in range(1, r):
            if (s * n) % r:
                continue
            d = s * n // r
            if d >= n:
                continue
            out.extend(enumerate_covers(range(1, n + 1), s, r,
                                        equal_cardinality=d))
    return out


def covers_up_to_r3(sigma):
    out = []
    for r in (2, 3):
        for s in range(1, r):
            out.extend(enumerate_covers(sigma, s, r))
    return out


def random_body_stream(n, count, seed):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        kind = i % 10
        if kind == 8:
            out.append(make_box([rat(rng.randint(1, 5), rng.randint(1, 3))
                                 for _ in range(n)]))
        elif kind == 9:
            out.append(make_diagonal_image(
                make_cross_polytope(n),
                [rat(rng.randint(1, 4), rng.randint(1, 2)) for _ in range(n)]))
        else:
            out.append(make_random_hull(n, rng.randint(n + 2, 2 * n + 2),
                                        seed=rng.randrange(1 << 30)))
    return out


def exact_pass(rep):
    return rep.path == "exact" and rep.verdict == PASS


def test_criterion_01_exact_equality_cases():
    start = time.monotonic()
    for n in range(2, 7):
        cube = make_cube(n)
        cache = BodyCache(cube)
        rep = check_bt_cover(cube, loomis_whitney_cover(n), cache)
        assert exact_pass(rep) and rep.slack_exact == 0
        for cover in equal_cardinality_covers(n):
            rep = check_bt_cover(cube, cover, cache)
            assert exact_pass(rep) and rep.slack_exact == 0, (n, cover)
    for n in range(2, 7):
        rep = check_meyer(make_cross_polytope(n))
        assert exact_pass(rep) and rep.slack_exact == 0
        lam = [rat(i + 1, 2) for i in range(n)]
        rep = check_meyer(make_diagonal_image(make_cross_polytope(n), lam))
        assert exact_pass(rep) and rep.slack_exact == 0
    assert time.monotonic() - start < 10


def test_criterion_02_gamma_closed_forms():
    start = time.monotonic()
    for n in range(3, 9):
        for r in range(2, n):
            assert gamma(n, r, 1, r) == Rat(n ** r, r ** r * math.comb(n, r))
        assert gamma(n, 2, 1, 2) == Rat(n, 2 * (n - 1))
    assert time.monotonic() - start < 1


def test_criterion_03_randomized_theorem_coverage():
    start = time.monotonic()
    count = 500
    for n in (2, 3, 4):
        bodies = random_body_stream(n, count, seed=1000 + n)
        sigma_full = tuple(range(1, n + 1))
        full_covers = covers_up_to_r3(sigma_full)
        proper_covers = []
        for d in range(1, n):
            for tau in itertools.combinations(sigma_full, d):
                proper_covers.extend(covers_up_to_r3(tau))
        for body in bodies:
            cache = BodyCache(body)
            for cover in full_covers:
                assert exact_pass(check_bt_cover(body, cover, cache))
            for cover in proper_covers:
                assert exact_pass(check_restricted_cover(body, cover, cache))
            assert exact_pass(check_meyer(body, cache))
            for i, j in itertools.combinations(sigma_full, 2):
                u = [rat(1) if c == i else rat(0) for c in sigma_full]
                v = [rat(-1) if c == j else rat(0) for c in sigma_full]
                assert exact_pass(check_nonorthogonal_pair(body, u, v))
        for i in range(0, count - 2, 3):
            a, b, c = bodies[i], bodies[i + 1], bodies[i + 2]
            assert exact_pass(check_af_triple(a, b, c, context=[a] * (n - 2)))
            assert exact_pass(check_sz(a, [b, c]))
        if n >= 3:
            for i in range(0, count - 3, 4):
                assert exact_pass(check_sz(bodies[i], bodies[i + 1 : i + 4]))
    assert time.monotonic() - start < 600


def test_criterion_04_mixed_volume_oracles():
    rng = random.Random(404)
    for i in range(100):
        n = 2 + i % 4
        sides = [[rat(rng.randint(1, 6), rng.randint(1, 2)) for _ in range(n)]
                 for _ in range(n)]
        boxes = [box_polytope(t) for t in sides]
        assert mixed_volume(boxes) == box_mixed_volume_permanent(sides)
    for i in range(100):
        n = 2 + i % 3
        body = make_random_hull(n, n + 4, seed=500 + i)
        axis = 1 + i % n
        lhs = n * mixed_volume([body, unit_segment(n, axis)],
                               multiplicities=[n - 1, 1])
        assert lhs == project_complement(body, (axis,)).volume()
    for i in range(50):
        n = 3 + i % 2
        tau = tuple(sorted(rng.sample(range(1, n + 1), rng.randint(1, n - 1))))
        delta = [j for j in range(1, n + 1) if j not in tau]
        ks = [make_random_hull(n, n + 3, seed=900 + 7 * i + j)
              for j in range(len(tau))]
        ls = []
        for j in range(len(delta)):
            small = make_random_hull(len(delta), len(delta) + 2,
                                     seed=1300 + 11 * i + j)
            pts = []
            for v in small.vertices:
                full = [rat(0)] * n
                for c, val in zip(delta, v):
                    full[c - 1] = val
                pts.append(full)
            ls.append(convex_hull(pts))
        rep = fedotov_factorization_check(tau, ks, ls)
        assert rep.lhs == rep.rhs, (i, tau)
    for i in range(25):
        u = [rat(rng.randint(-5, 5)), rat(rng.randint(1, 5))]
        scale = rat(rng.randint(1, 4), rng.randint(1, 3))
        v = [-u[1] * scale, u[0] * scale]
        seg_u = convex_hull([[rat(0), rat(0)], list(u)])
        seg_v = convex_hull([[rat(0), rat(0)], list(v)])
        want = mixed_volume([seg_u, seg_v])
        got = segment_pair_mixed(u, v)
        assert got == want
        approx = segment_pair_mixed([float(x) for x in u],
                                    [float(x) for x in v])
        assert math.isclose(approx, float(want), rel_tol=1e-12, abs_tol=1e-12)


def test_criterion_05_polarization_tightness_witness():
    a = make_cube(2)
    b = unit_segment(2, 1)
    c = unit_segment(2, 2)
    assert mixed_volume([a, a]) == 1
    assert mixed_volume([b, c]) == Rat(1, 2)
    assert mixed_volume([a, b]) == Rat(1, 2)
    assert mixed_volume([a, c]) == Rat(1, 2)
    assert mixed_volume([a, a]) * mixed_volume([b, c]) == Rat(1, 2)
    assert 2 * mixed_volume([a, b]) * mixed_volume([a, c]) == Rat(1, 2)
    rep = check_af_triple(a, b, c)
    assert exact_pass(rep)
    assert rep.lhs.exact == rep.rhs.exact == Rat(1, 2)
    assert rep.slack_exact == 0


def test_criterion_06_centroid_support_oracle():
    for n in (2, 3, 4):
        nb = normalize(make_centered_cube(n))
        y = [1.0] + [0.0] * (n - 1)
        for p in (1, 2, 3):
            est = support_Zp(nb, float(p), y, samples=100000, seed=0)
            closed = (0.5 ** p / (p + 1)) ** (1 / p)
            assert abs(est.value - closed) <= 3 * est.stderr, (n, p)
    for body in standard_corpus():
        nb = normalize(body)
        y = [1.0] + [0.0] * (body.ambient_dim - 1)
        prev = None
        for p in (1.0, 2.0, 4.0):
            est = support_Zp(nb, p, y, samples=20000, seed=1)
            if prev is not None:
                assert est.value + 3 * (est.stderr + prev.stderr) >= prev.value
            prev = est


def test_criterion_07_duality_constant_bands():
    band_lo, band_hi = duality_ratio_band()
    for body in standard_corpus():
        nb = normalize(body)
        for k in (1, 2):
            if k >= body.ambient_dim:
                continue
            dr = duality_ratio(nb, list(range(1, k + 1)), samples=40000, seed=0)
            if dr.degenerate:
                continue
            assert band_lo <= dr.lo and dr.hi <= band_hi, (body.name, k)
    b1 = make_cross_polytope(3)
    assert b1.volume() == Rat(4, 3)
    assert section_coordinate(b1, (3,)).volume() == 2
    parts_product = (section_coordinate(b1, (2, 3)).volume()
                     * section_coordinate(b1, (1, 3)).volume())
    assert parts_product == 4
    rep = check_dual_cover(b1, UniformCover([(1,), (2,)], 1))
    assert rep.verdict == PASS
    assert abs(rep.extra["c0_hat"] - math.sqrt(1.5) / 2) <= 1e-12


def test_criterion_08_berwald():
    facet_segment = convex_hull([[rat(0)], [rat(1)]])
    phi = PLConcave.from_polytope(facet_segment, [rat(1), rat(0)])
    for p, q in ((1, 3), (2, 5)):
        x, y = berwald_sides(phi, p, q)
        assert x == 1 and y == 1
    pairs = [(p, q) for p in (1, 2, 3) for q in (2, 3, 4) if p < q]
    for i in range(200):
        m = 1 + i % 3
        p, q = pairs[i % len(pairs)]
        rep = check_berwald(random_concave(m, seed=8000 + i), p, q)
        assert exact_pass(rep), (i, m, p, q)


def test_criterion_09_kubota_statistical_check():
    kub = kubota_cauchy_check(make_centered_cube(3), samples=10000, seed=0)
    assert kub.surface == 6.0
    assert kub.calibrated_constant == 4.0
    assert abs(kub.ratio - 4.0) <= 3 * kub.ratio_stderr
    assert kub.printed_constant != kub.calibrated_constant
    assert kub.constant_note


def test_criterion_10_hug_schneider_r2():
    for i in range(20):
        k1 = make_random_hull(3, 7, seed=600 + i)
        k2 = make_random_hull(3, 7, seed=700 + i)
        rep = check_hug_schneider_r2(k1, k2, q=4)
        assert rep.path == "interval"
        assert rep.verdict == PASS, i
    for n in range(3, 11):
        b = hug_schneider_constant(n)
        assert 1.0 < b < n / (n - 1)


def test_criterion_11_suite_determinism():
    first = run_suite(default_suite(seed=0))
    second = run_suite(default_suite(seed=0))
    assert first.exit_code == 0
    assert all(rep.ok for rep in first.reports)
    assert csv_text(first.reports) == csv_text(second.reports)
