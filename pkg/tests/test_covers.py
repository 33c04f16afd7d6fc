import itertools
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from geomineq.covers import (
    JohnFrame,
    NonUniformCoverError,
    UniformCover,
    binomial_general,
    complement_cover,
    enumerate_covers,
    format_cover,
    gamma,
    john_check,
    loomis_whitney_cover,
    parse_cover,
    validate_cover,
)
from geomineq.rational import Rat, rat


def brute_force_covers(sigma, s, r):
    """Oracle: multisets of r nonempty subsets covering each index s times."""
    sigma = tuple(sigma)
    subsets = []
    for size in range(1, len(sigma) + 1):
        subsets.extend(itertools.combinations(sigma, size))
    found = set()
    for combo in itertools.combinations_with_replacement(subsets, r):
        counts = Counter(i for part in combo for i in part)
        if all(counts[i] == s for i in sigma) and set(counts) == set(sigma):
            found.add(tuple(sorted(combo)))
    return found


def test_loomis_whitney_cover():
    lw = loomis_whitney_cover(3)
    assert lw.parts == ((1, 2), (1, 3), (2, 3))
    assert lw.s == 2
    assert lw.sigma == (1, 2, 3)
    assert lw.r == 3


def test_format_parse_roundtrip():
    lw = loomis_whitney_cover(4)
    assert parse_cover(format_cover(lw), s=lw.s) == lw
    c = parse_cover("1|2|1,2", s=2)
    assert c.parts == ((1,), (1, 2), (2,))


def test_parse_infers_s():
    c = parse_cover("1,2|1,3|2,3")
    assert c.s == 2


def test_validate_rejects_nonuniform():
    bad = UniformCover([(1,), (1, 2)], 1)
    with pytest.raises(NonUniformCoverError):
        validate_cover(bad)


def test_validate_rejects_index_outside_sigma():
    bad = UniformCover([(1, 3)], 1, sigma=(1, 2))
    with pytest.raises(ValueError):
        validate_cover(bad)


@pytest.mark.parametrize("n,s,r", [(3, 2, 3), (3, 1, 2), (4, 1, 2),
                                   (4, 2, 3), (4, 3, 4), (2, 1, 2)])
def test_enumerate_matches_brute_force(n, s, r):
    sigma = range(1, n + 1)
    got = {tuple(sorted(c.parts)) for c in enumerate_covers(sigma, s, r)}
    assert got == brute_force_covers(sigma, s, r)


def test_enumerate_equal_cardinality():
    covers = enumerate_covers(range(1, 5), 3, 4, equal_cardinality=3)
    assert all(all(len(p) == 3 for p in c.parts) for c in covers)
    assert loomis_whitney_cover(4) in covers


def test_complement_cover():
    lw = loomis_whitney_cover(3)
    comp = complement_cover(lw)
    assert sorted(comp.parts) == [(1,), (2,), (3,)]
    assert comp.s == 1
    assert complement_cover(comp) == lw


def test_gamma_known_values():
    assert gamma(4, 2, 1, 2) == Rat(2, 3)
    assert gamma(3, 2, 1, 2) == Rat(3, 4)
    assert gamma(5, 3, 1, 3) == Rat(25, 54)
    with pytest.raises(ValueError):
        gamma(3, 3, 2, 3)


def test_gamma_closed_form_r_equals_d():
    import math
    for n in range(3, 9):
        for r in range(2, n):
            expect = Rat(n, r) ** r / math.comb(n, r)
            assert gamma(n, r, 1, r) == expect


def test_binomial_general():
    assert binomial_general(rat(5, 2), 2) == Rat(15, 8)
    assert binomial_general(rat(4), 2) == 6
    assert binomial_general(rat(1, 2), 0) == 1


def test_john_frame_standard_basis():
    frame = JohnFrame.standard_basis(3)
    ok, err = john_check(frame)
    assert ok
    assert err == 0.0
    assert frame.dim == 3
    assert frame.m == 3


def test_john_check_rejects_bad_weights():
    frame = JohnFrame([(rat(1), rat(0)), (rat(0), rat(1))],
                      [rat(1), rat(2)])
    ok, err = john_check(frame)
    assert not ok
    assert err > 0


def test_john_frame_hexagonal():
    frame = JohnFrame(
        [(1.0, 0.0),
         (-0.5, 0.8660254037844386),
         (-0.5, -0.8660254037844386)],
        [2 / 3, 2 / 3, 2 / 3])
    ok, err = john_check(frame, tol=1e-12)
    assert ok


@given(st.integers(min_value=2, max_value=6))
def test_lw_cover_validates(n):
    counts = validate_cover(loomis_whitney_cover(n))
    assert counts == {i: n - 1 for i in range(1, n + 1)}


@given(st.integers(min_value=2, max_value=7), st.integers(min_value=1, max_value=5))
def test_gamma_at_most_one(n, d):
    if d >= n:
        return
    value = gamma(n, d, 1, 2)
    if d * 2 >= 2:
        assert value <= 1
