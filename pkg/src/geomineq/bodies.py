"""Generators for the standard body families and JSON round-tripping.

Every generator is deterministic: random families draw from
``random.Random(seed)`` with small integer or small-denominator
rational coordinates, so a (spec string, seed) pair identifies one
body across runs and platforms.  Names carry the provenance so report
rows stay readable.
"""

from __future__ import annotations

import itertools
import json
import random
from pathlib import Path
from typing import Sequence

from .polytope import Polytope, convex_hull, linear_image
from .rational import Rat, rat, rat_str

SHAPES = ("cube", "box", "cross", "simplex", "random-hull", "zonotope", "diag")


def make_cube(n: int) -> Polytope:
    """The unit cube [0, 1]^n."""
    n = int(n)
    if n < 1:
        raise ValueError("need n >= 1")
    pts = [tuple(Rat(b) for b in bits) for bits in itertools.product((0, 1), repeat=n)]
    return convex_hull(pts, name=f"cube:{n}")


def make_centered_cube(n: int) -> Polytope:
    """The centered cube [-1/2, 1/2]^n."""
    return make_cube(n).translate([rat(-1, 2)] * int(n))


def make_box(sides: Sequence) -> Polytope:
    """The box with side lengths ``sides``, one corner at the origin."""
    lams = [rat(s) for s in sides]
    if not lams or any(l <= 0 for l in lams):
        raise ValueError("box sides must be positive")
    pts = [tuple(l * b for l, b in zip(lams, bits))
           for bits in itertools.product((0, 1), repeat=len(lams))]
    return convex_hull(pts, name="box:" + ",".join(rat_str(l) for l in lams))


def make_cross_polytope(n: int) -> Polytope:
    """The cross-polytope conv{±e_1, ..., ±e_n}."""
    n = int(n)
    if n < 1:
        raise ValueError("need n >= 1")
    pts = []
    for i in range(n):
        for sign in (1, -1):
            v = [Rat(0)] * n
            v[i] = Rat(sign)
            pts.append(tuple(v))
    return convex_hull(pts, name=f"cross:{n}")


def make_simplex(n: int) -> Polytope:
    """The standard simplex conv{0, e_1, ..., e_n}."""
    n = int(n)
    if n < 1:
        raise ValueError("need n >= 1")
    pts = [tuple(Rat(0) for _ in range(n))]
    for i in range(n):
        v = [Rat(0)] * n
        v[i] = Rat(1)
        pts.append(tuple(v))
    return convex_hull(pts, name=f"simplex:{n}")


def _random_rat(rnd: random.Random, span: int) -> Rat:
    return rat(rnd.randint(-2 * span, 2 * span), rnd.randint(1, 2))


def make_random_hull(n: int, m: int, seed: int = 0, span: int = 4) -> Polytope:
    """The hull of m random rational points, retried until full-dimensional."""
    n, m = int(n), int(m)
    if m < n + 1:
        raise ValueError("need at least n + 1 points")
    rnd = random.Random(f"random-hull:{n},{m},{seed}")
    for _ in range(100):
        pts = [tuple(_random_rat(rnd, span) for _ in range(n)) for _ in range(m)]
        body = convex_hull(pts, name=f"random-hull:{n},{m},seed{seed}")
        if body.is_full_dimensional():
            return body
    raise RuntimeError("could not draw a full-dimensional hull")


def make_zonotope(n: int, k: int, seed: int = 0, span: int = 2) -> Polytope:
    """The Minkowski sum of k random integer segments [0, v_i]."""
    n, k = int(n), int(k)
    if k < n:
        raise ValueError("need at least n segments")
    rnd = random.Random(f"zonotope:{n},{k},{seed}")
    for _ in range(100):
        segs = []
        for _ in range(k):
            v = tuple(Rat(rnd.randint(-span, span)) for _ in range(n))
            if any(c != 0 for c in v):
                segs.append(v)
        if len(segs) < k:
            continue
        body = Polytope.single_point((0,) * n)
        for v in segs:
            seg = convex_hull([(Rat(0),) * n, v])
            body = body.minkowski_sum(seg)
        if body.is_full_dimensional():
            return convex_hull(body.vertices, name=f"zonotope:{n},{k},seed{seed}")
    raise RuntimeError("could not draw a full-dimensional zonotope")


def make_diagonal_image(base: Polytope, lams: Sequence) -> Polytope:
    """The image of ``base`` under diag(lams)."""
    lams = [rat(l) for l in lams]
    if len(lams) != base.ambient_dim:
        raise ValueError("one scale per coordinate required")
    if any(l == 0 for l in lams):
        raise ValueError("diagonal scales must be nonzero")
    n = len(lams)
    matrix = [[lams[i] if i == j else Rat(0) for j in range(n)] for i in range(n)]
    tag = ",".join(rat_str(l) for l in lams)
    return linear_image(base, matrix, name=f"diag({tag})*{base.name or 'body'}")


def generate_body(spec: str, seed: int = 0) -> Polytope:
    """Build a body from a spec string.

    Formats: ``cube:N``, ``box:L1,...,LN``, ``cross:N``, ``simplex:N``,
    ``random-hull:N,M``, ``zonotope:N,K``, and ``diag:L1,...,LN:<base spec>``.
    Lengths and scales accept "p/q" rationals.  Random families use
    ``seed``; deterministic shapes ignore it.
    """
    spec = spec.strip()
    head, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"bad body spec {spec!r}: expected 'shape:params'")
    try:
        if head == "cube":
            return make_cube(int(rest))
        if head == "box":
            return make_box([rat(_parse_token(t)) for t in rest.split(",")])
        if head == "cross":
            return make_cross_polytope(int(rest))
        if head == "simplex":
            return make_simplex(int(rest))
        if head == "random-hull":
            n, m = (int(t) for t in rest.split(","))
            return make_random_hull(n, m, seed=seed)
        if head == "zonotope":
            n, k = (int(t) for t in rest.split(","))
            return make_zonotope(n, k, seed=seed)
        if head == "diag":
            lam_text, sep2, base_spec = rest.partition(":")
            if not sep2:
                raise ValueError("diag needs a base spec, e.g. diag:1,2,3:cross:3")
            lams = [rat(_parse_token(t)) for t in lam_text.split(",")]
            return make_diagonal_image(generate_body(base_spec, seed=seed), lams)
    except ValueError as exc:
        raise ValueError(f"bad body spec {spec!r}: {exc}") from exc
    raise ValueError(f"bad body spec {spec!r}: unknown shape {head!r} "
                     f"(known: {', '.join(SHAPES)})")


def _parse_token(text: str):
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return rat(int(num), int(den))
    return int(text)


def standard_corpus(dims: Sequence[int] = (2, 3, 4, 5),
                    hulls_per_dim: int = 5, seed: int = 0) -> list[Polytope]:
    """The fixed body corpus behind the versioned empirical bands:
    cube, cross-polytope, and simplex per dimension plus seeded random
    hulls (5 per dimension, 20 in total at the defaults)."""
    out = []
    for n in dims:
        out.append(make_cube(n))
        out.append(make_cross_polytope(n))
        out.append(make_simplex(n))
        for i in range(hulls_per_dim):
            out.append(make_random_hull(n, 2 * n + 4, seed=seed * 1000 + 17 * n + i))
    return out


def save_body(body: Polytope, path) -> None:
    """Write a body as JSON with 'p/q' vertex coordinates."""
    Path(path).write_text(json.dumps(body.to_dict(), indent=2) + "\n")


def load_body(path) -> Polytope:
    """Read a body written by save_body."""
    data = json.loads(Path(path).read_text())
    return Polytope.from_dict(data)


def resolve_body(text: str, seed: int = 0) -> Polytope:
    """Interpret CLI body arguments: a .json file path or a spec string."""
    if text.endswith(".json"):
        return load_body(text)
    return generate_body(text, seed=seed)
