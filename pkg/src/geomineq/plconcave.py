"""Piecewise-linear concave functions with exact power integrals.

A PL function is stored as a triangulated domain (points, simplices)
with one value per point.  Over a single simplex with vertex values
c_0..c_m the integral of the p-th power has the closed form

    integral = |S| * m! p! / (m+p)! * h_p(c_0, ..., c_m),

where h_p is the complete homogeneous symmetric polynomial; everything
stays rational for integer p, which is what exact moment-comparison
inequalities need.  Non-integer exponents go through seeded Dirichlet
Monte-Carlo instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import det_exact, solve_square
from .polytope import Polytope
from .rational import Rat, rat


@dataclass(frozen=True)
class PLConcave:
    """A non-negative concave PL function given on a simplicial complex."""

    points: tuple[tuple, ...]
    simplices: tuple[tuple[int, ...], ...]
    values: tuple

    def __init__(self, points: Sequence[Sequence], simplices: Sequence[Sequence[int]],
                 values: Sequence):
        pts = tuple(tuple(rat(c) for c in p) for p in points)
        sims = tuple(tuple(int(i) for i in s) for s in simplices)
        vals = tuple(rat(v) for v in values)
        if len(vals) != len(pts):
            raise ValueError("one value per triangulation point required")
        if not pts or not sims:
            raise ValueError("need at least one point and one simplex")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "simplices", sims)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_polytope(cls, body: Polytope, values: Sequence) -> "PLConcave":
        """Attach vertex values to a full-dimensional polytope's triangulation."""
        if not body.is_full_dimensional():
            raise ValueError("domain must be full-dimensional")
        return cls(body.vertices, body.triangulation(), values)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def _simplex_volume(self, simplex: tuple[int, ...]) -> Rat:
        m = self.dim
        base = self.points[simplex[0]]
        rows = [tuple(c - b for c, b in zip(self.points[i], base))
                for i in simplex[1:]]
        return abs(rat(det_exact(rows))) / math.factorial(m)

    def domain_volume(self) -> Rat:
        """Exact total volume of the triangulated domain."""
        return sum((self._simplex_volume(s) for s in self.simplices), Rat(0))

    def _affine_piece(self, simplex: tuple[int, ...]):
        """Coefficients (a, b) with <a, x> + b matching the values on a simplex."""
        m = self.dim
        rows = [list(self.points[i]) + [rat(1)] for i in simplex]
        rhs = [self.values[i] for i in simplex]
        sol = solve_square(rows, rhs)
        if sol is None:
            raise ValueError("degenerate simplex in triangulation")
        return sol[:m], sol[m]

    def validate(self) -> None:
        """Enforce non-negativity and concavity, both exactly.

        Concavity of a PL function on a triangulation is equivalent to
        every affine piece dominating the function at every
        triangulation point (each piece is a supporting function for a
        concave graph); that global form subsumes the usual shared-edge
        midpoint test and needs no tolerance.
        """
        m = self.dim
        for simplex in self.simplices:
            if len(set(simplex)) != m + 1:
                raise ValueError(f"simplex {simplex} must have {m + 1} distinct points")
        if any(v < 0 for v in self.values):
            raise ValueError("function values must be non-negative")
        for simplex in self.simplices:
            a, b = self._affine_piece(simplex)
            for idx, point in enumerate(self.points):
                ext = sum((ai * ci for ai, ci in zip(a, point)), rat(b))
                if ext < self.values[idx]:
                    raise ValueError(
                        f"concavity violated: piece {simplex} extends below "
                        f"point {idx}"
                    )

    def integral_power(self, p: int) -> Rat:
        """Exact integral of phi^p over the domain for integer p >= 0."""
        p = int(p)
        if p < 0:
            raise ValueError("exponent must be non-negative")
        m = self.dim
        factor = rat(math.factorial(m) * math.factorial(p),
                     math.factorial(m + p))
        total = Rat(0)
        for simplex in self.simplices:
            vol = self._simplex_volume(simplex)
            if vol == 0:
                continue
            total += vol * factor * _complete_homogeneous(
                [self.values[i] for i in simplex], p)
        return total

    def integral_power_float(self, p: float, samples: int = 200_000,
                             seed: int = 0) -> tuple[float, float]:
        """Monte-Carlo (value, stderr) of the integral of phi^p, any p > 0.

        One Dirichlet batch is split across simplices in proportion to
        their volumes; the same batch can serve several exponents when
        the caller fixes the seed.
        """
        if p <= 0:
            raise ValueError("exponent must be positive")
        rng = np.random.default_rng(seed)
        vols = np.asarray([float(self._simplex_volume(s))
                           for s in self.simplices])
        total_vol = vols.sum()
        weights = vols / total_vol
        counts = rng.multinomial(samples, weights)
        vals_f = np.asarray([float(v) for v in self.values])
        chunks = []
        for simplex, cnt in zip(self.simplices, counts):
            if cnt == 0:
                continue
            bary = rng.dirichlet(np.ones(self.dim + 1), size=cnt)
            chunks.append(bary @ vals_f[list(simplex)])
        phi = np.concatenate(chunks)
        powered = phi ** p
        mean = float(powered.mean())
        stderr = float(powered.std(ddof=1) / math.sqrt(samples))
        return total_vol * mean, total_vol * stderr


def _complete_homogeneous(values: Sequence, p: int) -> Rat:
    """h_p(values) by the standard prefix recurrence, exactly."""
    h = [Rat(0)] * (p + 1)
    h[0] = Rat(1)
    for v in values:
        vr = rat(v)
        for j in range(1, p + 1):
            h[j] += vr * h[j - 1]
    return h[p]


def berwald_sides(phi: PLConcave, p: int, q: int) -> tuple[Rat, Rat]:
    """The rational cores (X, Y) of the moment comparison.

    X = C(m+q, m) <phi^q> and Y = C(m+p, m) <phi^p> with <.> the
    domain average; the inequality X^{1/q} <= Y^{1/p} is equivalent to
    X^p <= Y^q, which is decided without roots.
    """
    m = phi.dim
    vol = phi.domain_volume()
    if vol == 0:
        raise ValueError("domain has zero volume")
    x = math.comb(m + q, m) * phi.integral_power(q) / vol
    y = math.comb(m + p, m) * phi.integral_power(p) / vol
    return x, y


def random_concave(m: int, seed: int = 0, span: int = 4) -> PLConcave:
    """A random non-negative concave PL function on a random m-simplex.

    The simplex is star-subdivided at a random interior point whose
    value sits a non-negative bump above the affine interpolation, so
    the graph is the upper hull of the lifted points and the function
    is genuinely piecewise linear (affine only when the bump is zero).
    """
    import random as _random

    rnd = _random.Random(seed)
    m = int(m)
    if m < 1:
        raise ValueError("need dimension m >= 1")
    while True:
        corners = [tuple(rat(rnd.randint(-span, span)) for _ in range(m))
                   for _ in range(m + 1)]
        rows = [tuple(c - b for c, b in zip(p, corners[0])) for p in corners[1:]]
        if det_exact(rows) != 0:
            break
        seed_shift = rnd.randint(0, 1 << 30)
        rnd.seed(seed_shift)
    weights = [rat(rnd.randint(1, span)) for _ in range(m + 1)]
    total = sum(weights, Rat(0))
    interior = tuple(
        sum((w * p[i] for w, p in zip(weights, corners)), Rat(0)) / total
        for i in range(m)
    )
    corner_vals = [rat(rnd.randint(0, 2 * span), rnd.randint(1, 2)) for _ in corners]
    interp = sum((w * v for w, v in zip(weights, corner_vals)), Rat(0)) / total
    bump = rat(rnd.randint(0, 2 * span), rnd.randint(1, 3))
    points = corners + [interior]
    center_idx = m + 1
    simplices = []
    for drop in range(m + 1):
        face = [i for i in range(m + 1) if i != drop]
        simplices.append(tuple(face + [center_idx]))
    phi = PLConcave(points, simplices, corner_vals + [interp + bump])
    phi.validate()
    return phi
