import json

import pytest
from hypothesis import given, settings, strategies as st

from geomineq.bodies import (
    SHAPES,
    generate_body,
    load_body,
    make_box,
    make_centered_cube,
    make_cross_polytope,
    make_cube,
    make_diagonal_image,
    make_random_hull,
    make_simplex,
    make_zonotope,
    resolve_body,
    save_body,
    standard_corpus,
)
from geomineq.rational import Rat, rat


def test_named_shapes():
    assert make_cube(2).volume() == 1
    assert make_centered_cube(4).volume() == 1
    assert make_cross_polytope(2).volume() == 2
    assert make_simplex(3).volume() == Rat(1, 6)
    assert make_box([rat(2), rat(3)]).volume() == 6


def test_shape_names():
    assert make_cube(3).name == "cube:3"
    assert make_cross_polytope(2).name == "cross:2"


@given(st.integers(min_value=2, max_value=4), st.integers(min_value=0, max_value=30))
@settings(deadline=None, max_examples=20)
def test_random_hull_full_dimensional(n, seed):
    p = make_random_hull(n, n + 3, seed)
    assert p.ambient_dim == n
    assert p.is_full_dimensional()
    assert p.volume() > 0


def test_random_hull_deterministic():
    a = make_random_hull(3, 7, seed=42)
    b = make_random_hull(3, 7, seed=42)
    assert sorted(map(tuple, a.vertices)) == sorted(map(tuple, b.vertices))


def test_random_hull_seed_sensitivity():
    a = make_random_hull(3, 7, seed=1)
    b = make_random_hull(3, 7, seed=2)
    assert sorted(map(tuple, a.vertices)) != sorted(map(tuple, b.vertices))


def test_zonotope():
    z = make_zonotope(3, 5, seed=0)
    assert z.is_full_dimensional()
    c = z.centroid()
    moved = z.translate([-x for x in c])
    for v in moved.vertices:
        assert moved.contains([-x for x in v])


def test_diagonal_image():
    base = make_cross_polytope(3)
    img = make_diagonal_image(base, [rat(1), rat(2), rat(3)])
    assert img.volume() == 6 * base.volume()


def test_generate_body_specs():
    assert generate_body("cube:3", 0).volume() == 1
    assert generate_body("cross:2", 0).volume() == 2
    assert generate_body("simplex:4", 0).volume() == Rat(1, 24)
    box = generate_body("box:2,1/2", 0)
    assert box.volume() == 1
    hull = generate_body("random-hull:3,8", 5)
    assert hull.is_full_dimensional()
    zono = generate_body("zonotope:2,4", 1)
    assert zono.is_full_dimensional()
    diag = generate_body("diag:1,1,2:cross:3", 0)
    assert diag.volume() == 2 * Rat(4, 3)


def test_generate_body_rejects_unknown():
    with pytest.raises(ValueError):
        generate_body("dodecahedron:3", 0)


def test_save_load_roundtrip(tmp_path):
    p = make_random_hull(3, 9, seed=8)
    path = tmp_path / "body.json"
    save_body(p, path)
    q = load_body(path)
    assert q.volume() == p.volume()
    assert sorted(map(tuple, q.vertices)) == sorted(map(tuple, p.vertices))
    doc = json.loads(path.read_text())
    assert "vertices" in doc


def test_resolve_body_path_or_spec(tmp_path):
    p = make_cube(2)
    path = tmp_path / "square.json"
    save_body(p, path)
    assert resolve_body(str(path), 0).volume() == 1
    assert resolve_body("cube:2", 0).volume() == 1


def test_standard_corpus():
    corpus = standard_corpus(dims=(2, 3), hulls_per_dim=2, seed=0)
    names = [b.name for b in corpus]
    assert any(name.startswith("cube") for name in names)
    assert any(name.startswith("cross") for name in names)
    assert all(b.is_full_dimensional() for b in corpus)
    again = standard_corpus(dims=(2, 3), hulls_per_dim=2, seed=0)
    assert [sorted(map(tuple, b.vertices)) for b in corpus] == \
        [sorted(map(tuple, b.vertices)) for b in again]


def test_shapes_registry():
    assert "cube" in SHAPES
    assert "random-hull" in SHAPES
