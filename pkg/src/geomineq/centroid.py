"""Monte-Carlo support oracle for L_p centroid bodies.

For a convex body K of volume one, the L_p centroid body Z_p(K) has
support function h(y) = (integral over K of |<x,y>|^p dx)^{1/p}.  The
bodies are never materialized in full: the module estimates support
values in chosen directions, assembles inner/outer polytopal
approximants of coordinate-subspace projections, and reports the
empirical duality and inclusion ratios those support values induce.

Normalization to volume one multiplies K by lambda = |K|^{-1/n}, which
is usually irrational.  The centered, unscaled base body is sampled
instead and lambda enters through exact homogeneity exponents
(h scales by lambda^{1+n/p}, a (n-k)-dimensional section by
lambda^{n-k}), so Monte-Carlo error never compounds with
normalization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polytope import Polytope, convex_hull, section_coordinate
from .rational import Rat, rat

_BATCH_TAG = 91


def nth_root_exact(x, n: int) -> Rat | None:
    """Exact rational n-th root of a positive rational, or None."""
    xr = rat(x)
    if xr <= 0:
        raise ValueError("need a positive value")
    num, den = int(xr.numerator), int(xr.denominator)
    rn = _int_nth_root(num, n)
    rd = _int_nth_root(den, n)
    if rn is None or rd is None:
        return None
    return Rat(rn, rd)


def _int_nth_root(m: int, n: int) -> int | None:
    if m == 0:
        return 0
    root = round(m ** (1.0 / n))
    for cand in (root - 1, root, root + 1):
        if cand >= 0 and cand ** n == m:
            return cand
    return None


class TriangulationSampler:
    """Exact-uniform sampler of a full-dimensional polytope.

    Uses the stored fan triangulation: a simplex is picked with
    probability proportional to its volume and a point drawn with flat
    Dirichlet barycentric weights.  Dimension-robust and rejection-free.
    """

    def __init__(self, body: Polytope):
        if not body.is_full_dimensional():
            raise ValueError("sampling needs a full-dimensional body")
        self.body = body
        verts = body.vertices_float()
        n = body.ambient_dim
        simplices = body.triangulation()
        self._corners = []
        weights = []
        for simplex in simplices:
            pts = verts[list(simplex)]
            weights.append(abs(np.linalg.det(pts[1:] - pts[0])))
            self._corners.append(pts)
        w = np.asarray(weights, dtype=float)
        total = w.sum()
        if total <= 0:
            raise ValueError("triangulation has zero total volume")
        self._weights = w / total
        self._dim = n

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw ``count`` uniform points as a (count, n) float array."""
        counts = rng.multinomial(count, self._weights)
        chunks = []
        for pts, m in zip(self._corners, counts):
            if m == 0:
                continue
            bary = rng.dirichlet(np.ones(self._dim + 1), size=m)
            chunks.append(bary @ pts)
        out = np.concatenate(chunks, axis=0)
        rng.shuffle(out)
        return out


class NormalizedBody:
    """A centered convex body together with its symbolic volume-1 scale."""

    def __init__(self, body: Polytope):
        if not body.is_full_dimensional():
            raise ValueError("normalization needs a full-dimensional body")
        centroid = body.centroid()
        if any(c != 0 for c in centroid):
            body = body.translate(tuple(-c for c in centroid))
        self.base = body
        self.n = body.ambient_dim
        self.volume = body.volume()
        if not self.volume > 0:
            raise ValueError("zero volume body cannot be normalized")
        self.lam_exact = nth_root_exact(1 / rat(self.volume), self.n)
        self.lam = (float(self.lam_exact) if self.lam_exact is not None
                    else float(1 / rat(self.volume)) ** (1.0 / self.n))
        self.materialized = (body.scale(self.lam_exact)
                             if self.lam_exact is not None else None)
        self._sampler: TriangulationSampler | None = None

    @property
    def sampler(self) -> TriangulationSampler:
        if self._sampler is None:
            self._sampler = TriangulationSampler(self.base)
        return self._sampler

    def section_base_volume(self, tau: Sequence[int]) -> Rat:
        """Exact base-body volume of the section with {x_j = 0, j in tau}."""
        sec = section_coordinate(self.base, tau)
        k = len(set(int(j) for j in tau))
        if sec.is_empty() or sec.intrinsic_dim < self.n - k:
            return Rat(0)
        return rat(sec.volume())

    def section_volume(self, tau: Sequence[int]) -> float:
        """Normalized-body section volume: lambda^{n-k} times the base value."""
        k = len(set(int(j) for j in tau))
        return self.lam ** (self.n - k) * float(self.section_base_volume(tau))

    def support_Zinf(self, y: Sequence[float]) -> float:
        """Support of Z_inf = conv(K, -K) for the normalized body."""
        ya = np.asarray([float(c) for c in y], dtype=float)
        vals = self.base.vertices_float() @ ya
        return self.lam * float(np.max(np.abs(vals)))


def normalize(body: Polytope) -> NormalizedBody:
    """Center a body and attach its exact volume-1 scale factor.

    When |K|^{-1/n} is rational the scaled polytope is materialized
    (``materialized`` attribute, exact volume one); otherwise the scale
    stays symbolic and every estimator applies the right power of it.
    """
    return NormalizedBody(body)


@dataclass(frozen=True)
class SupportEstimate:
    """One-direction Monte-Carlo estimate of h_{Z_p(K)}(y)."""

    direction: tuple
    p: float
    value: float
    stderr: float
    samples: int
    seed: int

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.value - target) <= sigmas * self.stderr


def _direction_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def support_Zp(nb: NormalizedBody, p: float, y: Sequence[float],
               samples: int = 100_000, seed: int = 0,
               direction_index: int = 0) -> SupportEstimate:
    """Estimate h_{Z_p(K)}(y) for the volume-normalized body.

    Per-direction RNG streams are keyed by (seed, direction_index) so a
    parallel schedule cannot change any estimate.  The standard error
    comes from the delta method applied to the empirical p-th moment.
    """
    if p < 1:
        raise ValueError("need p >= 1")
    ya = np.asarray([float(c) for c in y], dtype=float)
    if ya.shape != (nb.n,):
        raise ValueError(f"direction must have dimension {nb.n}")
    if not np.any(ya):
        return SupportEstimate(direction=tuple(ya), p=p, value=0.0, stderr=0.0,
                               samples=samples, seed=seed)
    rng = _direction_rng(seed, direction_index)
    points = nb.sampler.sample(rng, samples)
    powered = np.abs(points @ ya) ** p
    mean = float(powered.mean())
    se_mean = float(powered.std(ddof=1) / math.sqrt(samples))
    integral = float(nb.volume) * mean
    value = nb.lam ** (1.0 + nb.n / p) * integral ** (1.0 / p)
    stderr = value * se_mean / (p * mean) if mean > 0 else 0.0
    return SupportEstimate(direction=tuple(ya), p=p, value=value,
                           stderr=stderr, samples=samples, seed=seed)


def make_directions(dim: int, extra: int, seed: int) -> np.ndarray:
    """The signed basis plus a seeded low-discrepancy spherical point set."""
    eye = np.eye(dim)
    rows = [eye, -eye]
    if extra > 0:
        from scipy.stats import norm, qmc

        halton = qmc.Halton(d=dim, scramble=True, seed=seed)
        u = np.clip(halton.random(extra), 1e-12, 1 - 1e-12)
        g = norm.ppf(u)
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        rows.append(g / norms)
    return np.concatenate(rows, axis=0)


@dataclass(frozen=True)
class ZpProjection:
    """Inner/outer polytopal approximants of P_F(Z_p(K)) for coordinate F."""

    p: float
    tau: tuple[int, ...]
    directions: np.ndarray
    support: np.ndarray
    inner_vertices: np.ndarray
    outer_vertices: np.ndarray
    volume_lo: float
    volume_hi: float
    samples: int
    seed: int


_OUTER_PAD = 1.0 + 1e-9


def zp_projection(nb: NormalizedBody, p: float, tau: Sequence[int],
                  extra_directions: int | None = None,
                  samples: int = 100_000, seed: int = 0) -> ZpProjection:
    """Approximate the projection of Z_p(K) onto the coordinate subspace F_tau.

    The support function of a projection is the restriction of the
    support function, so only directions inside F are needed.  One
    shared sample batch serves every direction: with a common empirical
    measure, Hoelder's inequality makes every estimated touching point
    obey every estimated support bound, so inner is contained in outer
    by construction rather than by luck.  The outer halfspaces get a
    relative 1e-9 pad to absorb float roundoff in that argument.
    """
    if p < 1:
        raise ValueError("need p >= 1")
    idx = sorted(set(int(j) for j in tau))
    if not idx or idx[0] < 1 or idx[-1] > nb.n:
        raise ValueError(f"tau must be a subset of 1..{nb.n}")
    k = len(idx)
    extra = 64 * k if extra_directions is None else int(extra_directions)
    dirs = make_directions(k, extra, seed)

    lift = np.zeros((dirs.shape[0], nb.n))
    for col, j in enumerate(idx):
        lift[:, j - 1] = dirs[:, col]

    rng = _direction_rng(seed, _BATCH_TAG)
    points = nb.sampler.sample(rng, samples)
    gram = points @ lift.T
    abs_pow = np.abs(gram) ** p
    means = abs_pow.mean(axis=0)
    vol = float(nb.volume)
    scale = nb.lam ** (1.0 + nb.n / p)
    support = scale * (vol * means) ** (1.0 / p)

    signed = np.sign(gram) * np.abs(gram) ** (p - 1.0)
    j_base = vol * (signed.T @ points[:, [j - 1 for j in idx]]) / samples
    touch = scale * (vol * means)[:, None] ** ((1.0 - p) / p) * j_base
    inner_pts = np.concatenate([touch, -touch], axis=0)

    if k == 1:
        h = float(support.max()) * _OUTER_PAD
        t = float(np.abs(touch).max())
        return ZpProjection(p=p, tau=tuple(idx), directions=dirs,
                            support=support,
                            inner_vertices=np.array([[-t], [t]]),
                            outer_vertices=np.array([[-h], [h]]),
                            volume_lo=2.0 * t, volume_hi=2.0 * h,
                            samples=samples, seed=seed)

    from scipy.spatial import ConvexHull, HalfspaceIntersection

    halfspaces = np.hstack([dirs, -(support * _OUTER_PAD)[:, None]])
    hs = HalfspaceIntersection(halfspaces, np.zeros(k))
    outer_pts = hs.intersections
    outer_hull = ConvexHull(outer_pts)
    inner_hull = ConvexHull(inner_pts)
    return ZpProjection(p=p, tau=tuple(idx), directions=dirs, support=support,
                        inner_vertices=inner_pts[inner_hull.vertices],
                        outer_vertices=outer_pts[outer_hull.vertices],
                        volume_lo=float(inner_hull.volume),
                        volume_hi=float(outer_hull.volume),
                        samples=samples, seed=seed)


@dataclass(frozen=True)
class DualityRatio:
    """Interval for |K cap F^perp|^{1/k} |P_F(Z_k(K))|^{1/k}."""

    tau: tuple[int, ...]
    k: int
    section_volume: float
    projection_lo: float
    projection_hi: float
    lo: float
    hi: float
    degenerate: bool
    samples: int
    seed: int


def duality_ratio(nb: NormalizedBody, tau: Sequence[int],
                  samples: int = 100_000, seed: int = 0,
                  extra_directions: int | None = None) -> DualityRatio:
    """Empirical duality ratio of a coordinate subspace F = F_tau, with p = k.

    Combines the exact section volume |K cap F^perp| (scaled through
    the symbolic normalization) with the Z_k projection volume
    interval.  F = R^n leaves a zero-dimensional section and is
    reported degenerate instead of inventing a convention.
    """
    idx = sorted(set(int(j) for j in tau))
    k = len(idx)
    if k >= nb.n:
        return DualityRatio(tau=tuple(idx), k=k, section_volume=float("nan"),
                            projection_lo=float("nan"),
                            projection_hi=float("nan"), lo=float("nan"),
                            hi=float("nan"), degenerate=True, samples=samples,
                            seed=seed)
    section = nb.section_volume(idx)
    if section <= 0:
        return DualityRatio(tau=tuple(idx), k=k, section_volume=section,
                            projection_lo=float("nan"),
                            projection_hi=float("nan"), lo=float("nan"),
                            hi=float("nan"), degenerate=True, samples=samples,
                            seed=seed)
    proj = zp_projection(nb, float(k), idx, extra_directions=extra_directions,
                         samples=samples, seed=seed)
    return DualityRatio(
        tau=tuple(idx), k=k, section_volume=section,
        projection_lo=proj.volume_lo, projection_hi=proj.volume_hi,
        lo=(section * proj.volume_lo) ** (1.0 / k),
        hi=(section * proj.volume_hi) ** (1.0 / k),
        degenerate=False, samples=samples, seed=seed)


@dataclass(frozen=True)
class InclusionReport:
    """Empirical constants for the Z_p inclusion and section-duality facts."""

    p: float
    q: float
    max_ratio_q_over_p: float
    argmax_direction: tuple
    min_ratio_p_over_inf: float
    argmin_direction: tuple
    section_products: tuple
    samples: int
    seed: int


def inclusion_ratio(nb: NormalizedBody, p: float, q: float,
                    extra_directions: int = 64, samples: int = 50_000,
                    seed: int = 0) -> InclusionReport:
    """Worst-case empirical ratios between Z_q, Z_p, and Z_inf supports.

    Reports max h_{Z_q}/h_{Z_p} over the direction set (inclusion
    Z_q inside c*(q/p)*Z_p), min h_{Z_p}/h_{Z_inf} (inclusion of a
    multiple of Z_inf = conv(K, -K), which is exact), and the
    coordinate-direction products h_{Z_p}(e_i) * |K cap e_i^perp|.
    """
    if not 1 <= p <= q:
        raise ValueError("need 1 <= p <= q")
    dirs = make_directions(nb.n, extra_directions, seed)
    best_qp = -math.inf
    best_qp_dir = ()
    best_pinf = math.inf
    best_pinf_dir = ()
    for j, y in enumerate(dirs):
        est_p = support_Zp(nb, p, y, samples=samples, seed=seed,
                           direction_index=j)
        if q == p:
            est_q = est_p
        else:
            est_q = support_Zp(nb, q, y, samples=samples, seed=seed,
                               direction_index=j)
        if est_p.value > 0:
            ratio = est_q.value / est_p.value
            if ratio > best_qp:
                best_qp, best_qp_dir = ratio, tuple(y)
        h_inf = nb.support_Zinf(y)
        if h_inf > 0:
            ratio = est_p.value / h_inf
            if ratio < best_pinf:
                best_pinf, best_pinf_dir = ratio, tuple(y)
    products = []
    for i in range(1, nb.n + 1):
        e_i = [0.0] * nb.n
        e_i[i - 1] = 1.0
        est = support_Zp(nb, p, e_i, samples=samples, seed=seed,
                         direction_index=i - 1)
        products.append(est.value * nb.section_volume([i]))
    return InclusionReport(p=p, q=q, max_ratio_q_over_p=best_qp,
                           argmax_direction=best_qp_dir,
                           min_ratio_p_over_inf=best_pinf,
                           argmin_direction=best_pinf_dir,
                           section_products=tuple(products),
                           samples=samples, seed=seed)


def z_inf_body(nb: NormalizedBody) -> Polytope:
    """Z_inf(K) = conv(K, -K) of the centered base body, exactly."""
    verts = list(nb.base.vertices)
    verts.extend(tuple(-c for c in v) for v in nb.base.vertices)
    return convex_hull(verts, name="z-inf")
