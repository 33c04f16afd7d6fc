"""Inequality checks with uniform, machine-readable reports.

Each ``check_*`` function evaluates one volume inequality on concrete
bodies and returns an :class:`InequalityReport` that records both
sides as tagged quantities, the verdict, and the numeric path taken.

Verdict policy: ``fail`` is only ever produced by exact arithmetic, by
certified rational interval endpoints, or by an explicitly configured
acceptance band.  Pure float comparisons return ``pass`` when the
margin clears a relative tolerance and ``inconclusive`` otherwise, so
a float round-off can never report a theorem as violated.
"""

from __future__ import annotations

import math
import random as _random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .bodies import make_cross_polytope, make_cube, make_random_hull
from .covers import (JohnFrame, UniformCover, format_cover, gamma, john_check,
                     parse_cover, validate_cover)
from .mixed import MixedVolumeEngine, ball_approx, default_ball_quality, mixed_volume, unit_ball_volume
from .plconcave import PLConcave, berwald_sides
from .polytope import (
    Polytope,
    convex_hull,
    FloatBody,
    orthonormal_complement,
    project_coordinate,
    project_volume_float,
    section_coordinate,
    section_volume_float,
    surface_area,
)
from .rational import Rat, is_exact, rat, rat_str

FLOAT_RTOL = 1e-9

PASS = "pass"
FAIL = "fail"
DEGENERATE = "degenerate"
INCONCLUSIVE = "inconclusive"


# -- report plumbing -----------------------------------------------------------


@dataclass(frozen=True)
class Quantity:
    """One side of an inequality: a float window plus optional exact data."""

    lo: float
    hi: float
    exact: Rat | None = None
    interval: tuple[Rat, Rat] | None = None

    @classmethod
    def from_exact(cls, x) -> "Quantity":
        x = rat(x)
        f = _to_float(x)
        return cls(lo=f, hi=f, exact=x)

    @classmethod
    def from_float(cls, x: float) -> "Quantity":
        x = float(x)
        return cls(lo=x, hi=x)

    @classmethod
    def from_interval(cls, lo, hi) -> "Quantity":
        lo, hi = rat(lo), rat(hi)
        if lo > hi:
            raise ValueError("interval endpoints out of order")
        return cls(lo=_to_float(lo), hi=_to_float(hi), interval=(lo, hi))

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one inequality check.

    ``relation`` is "<=" or ">=" and reads left to right, so the check
    asserts ``lhs relation rhs``.  ``slack`` is the satisfied-side
    margin (non-negative iff the inequality holds at the midpoints)
    and ``ratio`` is lhs/rhs; the ``*_exact`` twins are present
    whenever both sides are exact rationals.
    """

    check: str
    body: str
    params: dict
    relation: str
    lhs: Quantity
    rhs: Quantity
    verdict: str
    path: str
    ratio: float | None
    ratio_exact: Rat | None
    slack: float | None
    slack_exact: Rat | None
    elapsed: float
    notes: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict in (PASS, DEGENERATE)


def _to_float(x) -> float:
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf


def _finish(check: str, body: str, params: Mapping, relation: str,
            lhs: Quantity, rhs: Quantity, verdict: str, path: str,
            t0: float, notes: Sequence[str] = (), extra: dict | None = None,
            ) -> InequalityReport:
    ratio = lhs.mid / rhs.mid if rhs.mid not in (0.0, -0.0) else None
    slack = (rhs.mid - lhs.mid) if relation == "<=" else (lhs.mid - rhs.mid)
    ratio_exact = None
    slack_exact = None
    if lhs.exact is not None and rhs.exact is not None:
        if rhs.exact != 0:
            ratio_exact = lhs.exact / rhs.exact
        slack_exact = (rhs.exact - lhs.exact) if relation == "<=" \
            else (lhs.exact - rhs.exact)
    return InequalityReport(
        check=check, body=body,
        params={k: str(v) for k, v in dict(params).items()},
        relation=relation, lhs=lhs, rhs=rhs, verdict=verdict, path=path,
        ratio=ratio, ratio_exact=ratio_exact, slack=slack,
        slack_exact=slack_exact, elapsed=time.perf_counter() - t0,
        notes=tuple(notes), extra=dict(extra or {}),
    )


def _degenerate(check: str, body: str, params: Mapping, relation: str,
                t0: float, reason: str) -> InequalityReport:
    zero = Quantity.from_float(0.0)
    return _finish(check, body, params, relation, zero, zero,
                   DEGENERATE, "exact", t0, notes=(reason,))


def _exact_verdict(lhs: Rat, rhs: Rat, relation: str) -> str:
    if relation == "<=":
        return PASS if lhs <= rhs else FAIL
    return PASS if lhs >= rhs else FAIL


def _float_verdict(lhs: float, rhs: float, relation: str,
                   notes: list[str]) -> str:
    margin = (rhs - lhs) if relation == "<=" else (lhs - rhs)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    if margin >= FLOAT_RTOL * scale:
        return PASS
    if margin <= -FLOAT_RTOL * scale:
        notes.append("float margin negative beyond tolerance; "
                     "needs exact or interval confirmation")
    return INCONCLUSIVE


def _interval_verdict(lhs: Quantity, rhs: Quantity, relation: str) -> str:
    llo, lhi = lhs.interval
    rlo, rhi = rhs.interval
    if relation == ">=":
        llo, lhi, rlo, rhi = rlo, rhi, llo, lhi
    if lhi <= rlo:
        return PASS
    if llo > rhi:
        return FAIL
    return INCONCLUSIVE


def _body_label(body: Polytope) -> str:
    if body.name:
        return body.name
    return f"polytope[{len(body.vertices)}v,n={body.ambient_dim}]"


def _log_rat(x: Rat) -> float:
    """log of a positive rational, safe for huge numerators."""
    return math.log(x.numerator) - math.log(x.denominator)


# -- per-body exact caches -----------------------------------------------------


class BodyCache:
    """Memoized exact volumes of one body's coordinate shadows and slices.

    Cover checks on the same body share projection and section volumes
    through this cache, which turns a grid of covers into pure
    rational arithmetic after at most one geometric operation per
    index subset.
    """

    def __init__(self, body: Polytope):
        self.body = body
        self._volume: Rat | None = None
        self._proj: dict[tuple[int, ...], Rat] = {}
        self._sec: dict[tuple[int, ...], Rat] = {}

    def volume(self) -> Rat:
        if self._volume is None:
            self._volume = rat(self.body.volume())
        return self._volume

    def proj_F(self, tau: Sequence[int]) -> Rat:
        """Volume of the shadow on the span of the coordinates in tau."""
        key = tuple(sorted(tau))
        if key not in self._proj:
            if len(key) == self.body.ambient_dim:
                self._proj[key] = self.volume()
            elif not key:
                self._proj[key] = Rat(1)
            else:
                self._proj[key] = rat(project_coordinate(self.body, key).volume())
        return self._proj[key]

    def proj_E(self, tau: Sequence[int]) -> Rat:
        """Volume of the shadow on the complementary coordinate subspace."""
        comp = [i for i in range(1, self.body.ambient_dim + 1)
                if i not in set(tau)]
        return self.proj_F(comp)

    def sec_E(self, tau: Sequence[int]) -> Rat:
        """Volume of the slice by the complementary coordinate subspace."""
        key = tuple(sorted(tau))
        if key not in self._sec:
            self._sec[key] = rat(section_coordinate(self.body, key).volume())
        return self._sec[key]


def _centered(body: Polytope, notes: list[str]) -> Polytope:
    c = body.centroid()
    if any(x != 0 for x in c):
        notes.append("auto-centered body (centroid moved to the origin)")
        return body.translate([-x for x in c])
    return body


def _as_cover(cover) -> UniformCover:
    if isinstance(cover, str):
        cover = parse_cover(cover)
    if not isinstance(cover, UniformCover):
        raise TypeError("cover must be a UniformCover or a cover string")
    validate_cover(cover)
    return cover


# -- projection cover checks ---------------------------------------------------


def check_bt_cover(K: Polytope, cover, cache: BodyCache | None = None,
                   ) -> InequalityReport:
    """Uniform-cover projection bound |K|^s <= prod |P_F(K)| (exact).

    The Loomis-Whitney inequality is the instance with the cover of
    all coordinate hyperplane index sets, s = n - 1.
    """
    t0 = time.perf_counter()
    cover = _as_cover(cover)
    n = K.ambient_dim
    params = {"cover": format_cover(cover), "s": cover.s}
    if cover.sigma != tuple(range(1, n + 1)):
        raise ValueError(
            f"cover must cover the full index set 1..{n}, got sigma "
            f"{cover.sigma}"
        )
    if not K.is_full_dimensional():
        return _degenerate("bt_cover", _body_label(K), params, "<=", t0,
                           "body is not full-dimensional")
    cache = cache if cache is not None and cache.body is K else BodyCache(K)
    lhs = cache.volume() ** cover.s
    rhs = Rat(1)
    for part in cover.parts:
        rhs *= cache.proj_F(part)
    verdict = _exact_verdict(lhs, rhs, "<=")
    extra = {"equality": lhs == rhs}
    return _finish("bt_cover", _body_label(K), params, "<=",
                   Quantity.from_exact(lhs), Quantity.from_exact(rhs),
                   verdict, "exact", t0, extra=extra)


def check_restricted_cover(K: Polytope, cover, cache: BodyCache | None = None,
                           ) -> InequalityReport:
    """Restricted-cover projection bound with the explicit constant gamma.

    For an s-uniform cover of sigma, |sigma| = d < n, with r > s parts:
    prod |P_E_i(K)| >= gamma(n,d,s,r) |P_E(K)|^s |K|^(r-s), exactly.
    """
    t0 = time.perf_counter()
    cover = _as_cover(cover)
    n = K.ambient_dim
    d, s, r = cover.d, cover.s, cover.r
    params = {"cover": format_cover(cover), "s": s}
    if d >= n:
        raise ValueError(f"restricted cover needs |sigma| = d < n, got d={d}, n={n}")
    if r <= s:
        raise ValueError(f"restricted cover needs r > s, got r={r}, s={s}")
    if max(cover.sigma) > n:
        raise ValueError(f"cover index {max(cover.sigma)} exceeds dimension {n}")
    if not K.is_full_dimensional():
        return _degenerate("restricted_cover", _body_label(K), params, ">=", t0,
                           "body is not full-dimensional")
    cache = cache if cache is not None and cache.body is K else BodyCache(K)
    g = gamma(n, d, s, r)
    lhs = Rat(1)
    for part in cover.parts:
        lhs *= cache.proj_E(part)
    rhs = g * cache.proj_E(cover.sigma) ** s * cache.volume() ** (r - s)
    verdict = _exact_verdict(lhs, rhs, ">=")
    extra = {"gamma": rat_str(g)}
    return _finish("restricted_cover", _body_label(K), params, ">=",
                   Quantity.from_exact(lhs), Quantity.from_exact(rhs),
                   verdict, "exact", t0, extra=extra)


def check_meyer(K: Polytope, cache: BodyCache | None = None) -> InequalityReport:
    """Meyer's dual Loomis-Whitney bound for centered bodies, exact.

    |K|^(n-1) >= (n!/n^n) prod |K ∩ e_i^perp|; equality exactly at
    linear images of the cross-polytope.
    """
    t0 = time.perf_counter()
    n = K.ambient_dim
    params = {}
    if not K.is_full_dimensional():
        return _degenerate("meyer", _body_label(K), params, ">=", t0,
                           "body is not full-dimensional")
    notes: list[str] = []
    body = _centered(K, notes)
    if body is not K or cache is None or cache.body is not K:
        cache = BodyCache(body)
    lhs = cache.volume() ** (n - 1)
    rhs = Rat(math.factorial(n), n ** n)
    for i in range(1, n + 1):
        sec = cache.sec_E((i,))
        if sec == 0:
            return _degenerate("meyer", _body_label(K), params, ">=", t0,
                               f"section by coordinate hyperplane {i} is empty")
        rhs *= sec
    verdict = _exact_verdict(lhs, rhs, ">=")
    extra = {"equality": lhs == rhs}
    return _finish("meyer", _body_label(K), params, ">=",
                   Quantity.from_exact(lhs), Quantity.from_exact(rhs),
                   verdict, "exact", t0, notes=notes, extra=extra)


def _axis_of(vec) -> tuple[int, int] | None:
    """(1-based axis, sign) when vec is exactly a signed basis vector."""
    axis = None
    sign = 0
    for j, c in enumerate(vec, start=1):
        if isinstance(c, float) and not float(c).is_integer():
            return None
        x = rat(int(c)) if isinstance(c, float) else rat(c)
        if x == 0:
            continue
        if axis is not None or x not in (1, -1):
            return None
        axis, sign = j, (1 if x == 1 else -1)
    return None if axis is None else (axis, sign)


def check_john_frame(K: Polytope, frame: JohnFrame, tol: float = 1e-9,
                     ) -> tuple[InequalityReport, InequalityReport]:
    """Two-sided John-frame bound on |K|^(n-1): weighted sections below,
    weighted projections above.

    Returns (left, right) reports.  The left side needs a centered
    body (auto-centered with a notice); the right side does not.
    Frames of signed basis vectors take the exact path because John's
    condition forces the weight on each axis to sum to one; general
    frames use float sections and projections with float exponents.
    """
    t0 = time.perf_counter()
    n = K.ambient_dim
    if frame.dim != n:
        raise ValueError(f"frame lives in R^{frame.dim}, body in R^{n}")
    ok, residual = john_check(frame, tol=0.0 if frame.is_exact else tol)
    if not ok:
        raise ValueError(
            f"frame fails the decomposition-of-identity test "
            f"(residual {residual:.3g} over tolerance {tol:g})"
        )
    params = {"m": frame.m, "residual": f"{residual:.3g}"}
    if not K.is_full_dimensional():
        rep = _degenerate("john_frame_left", _body_label(K), params, "<=", t0,
                          "body is not full-dimensional")
        rep2 = _degenerate("john_frame_right", _body_label(K), params, "<=", t0,
                           "body is not full-dimensional")
        return rep, rep2

    axes = [_axis_of(v) for v in frame.vectors] if frame.is_exact else [None]
    notes: list[str] = []
    if frame.is_exact and all(a is not None for a in axes):
        body = _centered(K, notes)
        cache = BodyCache(body)
        axis_weight: dict[int, Rat] = {}
        for (axis, _), c in zip(axes, frame.weights):
            axis_weight[axis] = axis_weight.get(axis, Rat(0)) + rat(c)
        assert all(w == 1 for w in axis_weight.values()), \
            "John frames of basis vectors must put unit weight on each axis"
        vol_pow = cache.volume() ** (n - 1)
        left_lhs = Rat(math.factorial(n), n ** n)
        for axis in axis_weight:
            left_lhs *= cache.sec_E((axis,))
        right_rhs = Rat(1)
        pcache = BodyCache(K)
        for axis in axis_weight:
            right_rhs *= pcache.proj_E((axis,))
        left = _finish("john_frame_left", _body_label(K), params, "<=",
                       Quantity.from_exact(left_lhs), Quantity.from_exact(vol_pow),
                       _exact_verdict(left_lhs, vol_pow, "<="), "exact", t0,
                       notes=notes + ["signed basis frame, exact path"])
        right = _finish("john_frame_right", _body_label(K), params, "<=",
                        Quantity.from_exact(vol_pow), Quantity.from_exact(right_rhs),
                        _exact_verdict(vol_pow, right_rhs, "<="), "exact", t0)
        return left, right

    body = _centered(K, notes)
    vol = float(K.volume())
    vol_pow = vol ** (n - 1)
    left_lhs = math.factorial(n) / n ** n
    right_rhs = 1.0
    for u, c in zip(frame.vectors, frame.weights):
        u_arr = np.asarray([float(x) for x in u], dtype=float)
        u_arr = u_arr / np.linalg.norm(u_arr)
        cf = float(c)
        left_lhs *= section_volume_float(body, u_arr) ** cf
        right_rhs *= project_volume_float(K, orthonormal_complement(u_arr)) ** cf
    lnotes = list(notes)
    lverd = _float_verdict(left_lhs, vol_pow, "<=", lnotes)
    left = _finish("john_frame_left", _body_label(K), params, "<=",
                   Quantity.from_float(left_lhs), Quantity.from_float(vol_pow),
                   lverd, "float", t0, notes=lnotes)
    rnotes: list[str] = []
    rverd = _float_verdict(vol_pow, right_rhs, "<=", rnotes)
    right = _finish("john_frame_right", _body_label(K), params, "<=",
                    Quantity.from_float(vol_pow), Quantity.from_float(right_rhs),
                    rverd, "float", t0, notes=rnotes)
    return left, right


def check_dual_cover(K: Polytope, cover, band: float | None = None,
                     cache: BodyCache | None = None) -> InequalityReport:
    """Section-cover bound with an unspecified absolute constant.

    The theorem asserts prod |K ∩ E_i| <= (c0 d)^(ds) / prod d_i^d_i
    * |K ∩ E|^s |K|^(r-s) for some absolute c0.  The report computes
    the empirical minimal constant c0_hat for the instance and passes
    iff it stays under the recorded per-dimension band.
    """
    t0 = time.perf_counter()
    cover = _as_cover(cover)
    n = K.ambient_dim
    d, s, r = cover.d, cover.s, cover.r
    params = {"cover": format_cover(cover), "s": s}
    if d >= n:
        raise ValueError(f"dual cover needs |sigma| = d < n, got d={d}, n={n}")
    if r <= s:
        raise ValueError(f"dual cover needs r > s, got r={r}, s={s}")
    if max(cover.sigma) > n:
        raise ValueError(f"cover index {max(cover.sigma)} exceeds dimension {n}")
    if not K.is_full_dimensional():
        return _degenerate("dual_cover", _body_label(K), params, "<=", t0,
                           "body is not full-dimensional")
    notes: list[str] = []
    body = _centered(K, notes)
    if body is not K or cache is None or cache.body is not K:
        cache = BodyCache(body)
    lhs = Rat(1)
    for part in cover.parts:
        lhs *= cache.sec_E(part)
    base = cache.sec_E(cover.sigma) ** s * cache.volume() ** (r - s)
    if base == 0 or lhs == 0:
        return _degenerate("dual_cover", _body_label(K), params, "<=", t0,
                           "degenerate section")
    size_product = 1
    for di in cover.part_sizes:
        size_product *= di ** di
    ds = d * s
    ratio = lhs / base
    c0_hat = math.exp((_log_rat(ratio) + math.log(size_product)) / ds) / d
    if band is None:
        band = dual_cover_band(n)
    extra = {"c0_hat": c0_hat, "band": band, "section_ratio": rat_str(ratio)}
    if band is None:
        notes.append(f"no recorded c0 band for n={n}; reporting the "
                     "empirical constant only")
        verdict = INCONCLUSIVE
        rhs_q = Quantity.from_float(float(base))
    else:
        rhs_q = Quantity.from_float(((band * d) ** ds / size_product)
                                    * float(base))
        verdict = PASS if c0_hat <= band else FAIL
    return _finish("dual_cover", _body_label(K), params, "<=",
                   Quantity.from_exact(lhs), rhs_q, verdict, "band", t0,
                   notes=notes, extra=extra)


# -- float-path projection checks ----------------------------------------------


def check_surface_ratio(K: Polytope, u) -> InequalityReport:
    """Projection cannot beat the body's surface-to-volume ratio by more
    than 2(n-1)/n, checked on the float path."""
    t0 = time.perf_counter()
    n = K.ambient_dim
    if n < 2:
        raise ValueError("needs ambient dimension >= 2")
    u_arr = np.asarray([float(x) for x in u], dtype=float)
    norm = np.linalg.norm(u_arr)
    if norm == 0:
        raise ValueError("direction must be nonzero")
    u_arr = u_arr / norm
    params = {"u": ",".join(f"{x:.6g}" for x in u_arr)}
    if not K.is_full_dimensional():
        return _degenerate("surface_ratio", _body_label(K), params, "<=", t0,
                           "body is not full-dimensional")
    basis = orthonormal_complement(u_arr)
    pts = K.vertices_float() @ basis.T
    if n == 2:
        width = float(pts.max() - pts.min())
        proj_vol, proj_surf = width, 2.0
    else:
        fb = FloatBody(pts)
        proj_vol, proj_surf = fb.volume(), fb.surface_area()
    if proj_vol <= 0:
        return _degenerate("surface_ratio", _body_label(K), params, "<=", t0,
                           "degenerate projection")
    lhs = proj_surf / proj_vol
    rhs = (2.0 * (n - 1) / n) * float(surface_area(K)) / float(K.volume())
    notes: list[str] = []
    verdict = _float_verdict(lhs, rhs, "<=", notes)
    return _finish("surface_ratio", _body_label(K), params, "<=",
                   Quantity.from_float(lhs), Quantity.from_float(rhs),
                   verdict, "float", t0, notes=notes)


def check_nonorthogonal_pair(K: Polytope, u, v) -> InequalityReport:
    """Two-shadow lower bound with the sin factor for non-parallel
    directions; exact on signed coordinate pairs, float otherwise."""
    t0 = time.perf_counter()
    n = K.ambient_dim
    if n < 2:
        raise ValueError("needs ambient dimension >= 2")
    params = {"u": _direction_label(u), "v": _direction_label(v)}
    if not K.is_full_dimensional():
        return _degenerate("nonorthogonal_pair", _body_label(K), params, ">=",
                           t0, "body is not full-dimensional")
    au, av = _axis_of(u), _axis_of(v)
    if au is not None and av is not None:
        i, j = au[0], av[0]
        if i == j:
            return _finish(
                "nonorthogonal_pair", _body_label(K), params, ">=",
                Quantity.from_exact(Rat(0)), Quantity.from_exact(Rat(0)),
                PASS, "exact", t0,
                notes=("parallel directions: right side vanishes",),
                extra={"degenerate_rhs": True})
        cache = BodyCache(K)
        lhs = cache.proj_E((i,)) * cache.proj_E((j,))
        if n == 2:
            pair_proj = Rat(1)
            note = "0-dimensional projection convention |P| = 1"
        else:
            pair_proj = cache.proj_E((i, j))
            note = "coordinate pair, exact path"
        rhs = Rat(n, 2 * (n - 1)) * cache.volume() * pair_proj
        verdict = _exact_verdict(lhs, rhs, ">=")
        return _finish("nonorthogonal_pair", _body_label(K), params, ">=",
                       Quantity.from_exact(lhs), Quantity.from_exact(rhs),
                       verdict, "exact", t0, notes=(note,))

    u_arr = np.asarray([float(x) for x in u], dtype=float)
    v_arr = np.asarray([float(x) for x in v], dtype=float)
    if not np.linalg.norm(u_arr) or not np.linalg.norm(v_arr):
        raise ValueError("directions must be nonzero")
    u_arr = u_arr / np.linalg.norm(u_arr)
    v_arr = v_arr / np.linalg.norm(v_arr)
    cos = float(np.clip(u_arr @ v_arr, -1.0, 1.0))
    sin_sq = 1.0 - cos * cos
    if sin_sq <= 1e-24:
        return _finish("nonorthogonal_pair", _body_label(K), params, ">=",
                       Quantity.from_float(0.0), Quantity.from_float(0.0),
                       PASS, "float", t0,
                       notes=("parallel directions: right side vanishes",),
                       extra={"degenerate_rhs": True})
    pu = project_volume_float(K, orthonormal_complement(u_arr))
    pv = project_volume_float(K, orthonormal_complement(v_arr))
    notes = []
    if n == 2:
        pair_proj = 1.0
        notes.append("0-dimensional projection convention |P| = 1")
    else:
        from scipy.linalg import null_space
        basis = null_space(np.vstack([u_arr, v_arr])).T
        pair_proj = project_volume_float(K, basis)
    lhs = pu * pv
    rhs = (n / (2.0 * (n - 1))) * math.sqrt(sin_sq) * float(K.volume()) * pair_proj
    verdict = _float_verdict(lhs, rhs, ">=", notes)
    return _finish("nonorthogonal_pair", _body_label(K), params, ">=",
                   Quantity.from_float(lhs), Quantity.from_float(rhs),
                   verdict, "float", t0, notes=notes)


def _direction_label(u) -> str:
    parts = []
    for x in u:
        if is_exact(x) or isinstance(x, int):
            parts.append(rat_str(rat(x)))
        else:
            parts.append(f"{float(x):.6g}")
    return ",".join(parts)


# -- mixed-volume checks ---------------------------------------------------------


def check_af_triple(A: Polytope, B: Polytope, C: Polytope,
                    context: Sequence[Polytope] = (),
                    engine: MixedVolumeEngine | None = None,
                    ) -> InequalityReport:
    """Quadratic triple bound V(A,A)V(B,C) <= 2 V(A,B)V(A,C), exact.

    All four mixed volumes share a fixed context of n-2 extra bodies.
    """
    t0 = time.perf_counter()
    n = A.ambient_dim
    bodies = [A, B, C, *context]
    if any(b.ambient_dim != n for b in bodies):
        raise ValueError("all bodies must share one ambient dimension")
    if len(context) != n - 2:
        raise ValueError(f"context needs n-2 = {n - 2} bodies, got {len(context)}")
    engine = engine or MixedVolumeEngine()
    ctx = list(context)
    vaa = mixed_volume([A, A, *ctx], engine=engine)
    vbc = mixed_volume([B, C, *ctx], engine=engine)
    vab = mixed_volume([A, B, *ctx], engine=engine)
    vac = mixed_volume([A, C, *ctx], engine=engine)
    lhs = vaa * vbc
    rhs = 2 * vab * vac
    verdict = _exact_verdict(lhs, rhs, "<=")
    label = ";".join(_body_label(b) for b in (A, B, C))
    extra = {"V_AA": rat_str(vaa), "V_BC": rat_str(vbc),
             "V_AB": rat_str(vab), "V_AC": rat_str(vac)}
    return _finish("af_triple", label, {"context": len(ctx)}, "<=",
                   Quantity.from_exact(lhs), Quantity.from_exact(rhs),
                   verdict, "exact", t0, extra=extra)


SZ_CONSTANTS = {r: 2 ** (2 ** (r - 1) - 1) for r in range(2, 8)}


def check_sz(A: Polytope, bodies: Sequence[Polytope],
             engine: MixedVolumeEngine | None = None) -> InequalityReport:
    """Bounded-ratio pinching of a mixed volume by its A-heavy factors:
    |A|^(r-1) V(K_1..K_r, A[n-r]) <= 2^(2^(r-1)-1) prod V(K_i, A[n-1]).

    Exact; also reports the minimal constant the instance would allow.
    """
    t0 = time.perf_counter()
    n = A.ambient_dim
    r = len(bodies)
    if r < 2:
        raise ValueError("needs at least two bodies")
    if r > n:
        raise ValueError(f"needs r <= n, got r={r}, n={n}")
    if any(b.ambient_dim != n for b in bodies):
        raise ValueError("all bodies must share one ambient dimension")
    engine = engine or MixedVolumeEngine()
    c_r = SZ_CONSTANTS.get(r, 2 ** (2 ** (r - 1) - 1))
    vol_a = engine.ambient_volume(A)
    slots = [*bodies, A] if r < n else list(bodies)
    mults = [1] * r + ([n - r] if r < n else [])
    core = mixed_volume(slots, mults, engine=engine)
    lhs = vol_a ** (r - 1) * core
    rhs_prod = Rat(1)
    factors = []
    for K in bodies:
        vk = mixed_volume([K, A], [1, n - 1], engine=engine)
        factors.append(vk)
        rhs_prod *= vk
    rhs = c_r * rhs_prod
    verdict = _exact_verdict(lhs, rhs, "<=")
    extra = {"r": r, "constant": c_r}
    if rhs_prod != 0:
        extra["min_constant"] = rat_str(lhs / rhs_prod)
    label = _body_label(A) + "|" + ";".join(_body_label(b) for b in bodies)
    return _finish("sz", label, {"r": r}, "<=",
                   Quantity.from_exact(lhs), Quantity.from_exact(rhs),
                   verdict, "exact", t0, extra=extra)


def check_hug_schneider_r2(K1: Polytope, K2: Polytope,
                           q: int | None = None,
                           engine: MixedVolumeEngine | None = None,
                           ) -> InequalityReport:
    """Factor-2 mean-width bound with certified ball intervals.

    Verifies |B| V(K1,K2,B[n-2]) <= 2 V(K1,B[n-1]) V(K2,B[n-1]) with B
    the Euclidean ball, by sandwiching B between rational approximants
    B_in ⊆ B ⊆ lam B_in; all interval endpoints are exact rationals.
    The sharper conjectured constant b_{n,2} < n/(n-1) is evaluated in
    float and reported in extra.
    """
    t0 = time.perf_counter()
    n = K1.ambient_dim
    if K2.ambient_dim != n:
        raise ValueError("bodies must share one ambient dimension")
    if n < 3:
        raise ValueError("needs ambient dimension >= 3")
    ball = ball_approx(n, q if q is not None else default_ball_quality(n))
    lam = ball.scale
    engine = engine or MixedVolumeEngine()
    b_in = ball.inner
    vkk = mixed_volume([K1, K2, b_in], [1, 1, n - 2], engine=engine)
    v1 = mixed_volume([K1, b_in], [1, n - 1], engine=engine)
    v2 = mixed_volume([K2, b_in], [1, n - 1], engine=engine)
    bvol = engine.ambient_volume(b_in)
    pow_scale = lam ** (2 * n - 2)
    lhs = Quantity.from_interval(bvol * vkk, pow_scale * bvol * vkk)
    rhs = Quantity.from_interval(2 * v1 * v2, pow_scale * 2 * v1 * v2)
    verdict = _interval_verdict(lhs, rhs, "<=")
    notes = []
    if verdict == INCONCLUSIVE:
        notes.append(f"ball intervals overlap at quality q={ball.q}; "
                     "raise q for a conclusive verdict")
    b_n2 = hug_schneider_constant(n)
    conj_lhs_hi = float(pow_scale * bvol * vkk)
    conj_rhs_lo = b_n2 * float(v1 * v2)
    conj_notes: list[str] = []
    conj_verdict = _float_verdict(conj_lhs_hi, conj_rhs_lo, "<=", conj_notes)
    extra = {
        "q": ball.q,
        "ball_gap": ball.gap,
        "b_n2": b_n2,
        "conjectured_verdict": conj_verdict,
    }
    label = ";".join(_body_label(b) for b in (K1, K2))
    return _finish("hug_schneider_r2", label, {"q": ball.q}, "<=",
                   lhs, rhs, verdict, "interval", t0, notes=notes,
                   extra=extra)


def hug_schneider_constant(n: int) -> float:
    """b_{n,2} = n/(n-1) * omega_n omega_{n-2} / omega_{n-1}^2."""
    if n < 2:
        raise ValueError("needs n >= 2")
    wn = unit_ball_volume(n)
    wn1 = unit_ball_volume(n - 1)
    wn2 = unit_ball_volume(n - 2)
    return (n / (n - 1)) * wn * wn2 / (wn1 * wn1)


# -- moment comparison -----------------------------------------------------------


def check_berwald(phi: PLConcave, p, q, samples: int = 200_000,
                  seed: int = 0) -> InequalityReport:
    """Reverse moment comparison for non-negative concave PL functions:
    [C(m+q,m) <phi^q>]^(1/q) <= [C(m+p,m) <phi^p>]^(1/p) for p < q.

    Integer exponents are decided exactly by comparing X^p with Y^q;
    other exponents use one shared Monte-Carlo batch.
    """
    t0 = time.perf_counter()
    pf, qf = float(p), float(q)
    if pf <= 0 or qf <= 0:
        raise ValueError("exponents must be positive")
    if pf > qf:
        raise ValueError(f"needs p <= q, got p={p}, q={q}")
    phi.validate()
    m = phi.dim
    params = {"p": p, "q": q, "m": m}
    label = f"plconcave[{len(phi.points)}pts,m={m}]"
    if pf == qf:
        one = Quantity.from_float(1.0)
        return _finish("berwald", label, params, "<=", one, one, PASS,
                       "exact", t0, notes=("p = q: both sides coincide",))
    if pf.is_integer() and qf.is_integer():
        pi, qi = int(pf), int(qf)
        x, y = berwald_sides(phi, pi, qi)
        lhs_f = float(x) ** (1.0 / qi)
        rhs_f = float(y) ** (1.0 / pi)
        verdict = _exact_verdict(x ** pi, y ** qi, "<=")
        extra = {"X": rat_str(x), "Y": rat_str(y),
                 "power_gap": rat_str(y ** qi - x ** pi),
                 "equality": x ** pi == y ** qi}
        return _finish("berwald", label, params, "<=",
                       Quantity.from_float(lhs_f), Quantity.from_float(rhs_f),
                       verdict, "exact", t0,
                       notes=("sides compared exactly as X^p <= Y^q",),
                       extra=extra)
    vol = float(phi.domain_volume())
    iq, se_q = phi.integral_power_float(qf, samples=samples, seed=seed)
    ip, se_p = phi.integral_power_float(pf, samples=samples, seed=seed)
    cq = math.comb(m + int(qf), m) if qf.is_integer() else _binom_real(m + qf, m)
    cp = math.comb(m + int(pf), m) if pf.is_integer() else _binom_real(m + pf, m)
    x, y = cq * iq / vol, cp * ip / vol
    lhs = x ** (1.0 / qf)
    rhs = y ** (1.0 / pf)
    se_lhs = lhs * (cq * se_q / vol) / (qf * x) if x > 0 else 0.0
    se_rhs = rhs * (cp * se_p / vol) / (pf * y) if y > 0 else 0.0
    sigma = math.hypot(se_lhs, se_rhs)
    margin = rhs - lhs
    verdict = PASS if margin >= 3.0 * sigma else INCONCLUSIVE
    notes = [f"Monte-Carlo margin {margin:.3g} vs 3 sigma = {3 * sigma:.3g}"]
    return _finish("berwald", label, params, "<=",
                   Quantity.from_float(lhs), Quantity.from_float(rhs),
                   verdict, "float", t0, notes=notes,
                   extra={"sigma": sigma, "samples": samples, "seed": seed})


def _binom_real(x: float, m: int) -> float:
    out = 1.0
    for i in range(m):
        out *= (x - i) / (m - i)
    return out


# -- acceptance bands ------------------------------------------------------------


@lru_cache(maxsize=1)
def load_bands() -> dict:
    """The versioned empirical-constant bands shipped with the package."""
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    from importlib import resources

    text = resources.files("geomineq").joinpath("data/bands.toml").read_bytes()
    return tomllib.loads(text.decode("utf-8"))


def dual_cover_band(n: int) -> float | None:
    table = load_bands().get("dual_cover", {}).get("c0_hat_max", {})
    value = table.get(str(int(n)))
    return float(value) if value is not None else None


def duality_ratio_band() -> tuple[float, float]:
    table = load_bands().get("duality_ratio", {})
    return float(table["lo"]), float(table["hi"])


# -- tightness search ------------------------------------------------------------

SEARCH_FAMILIES = ("random-hull", "perturbed-box", "perturbed-cross-polytope",
                   "diagonal-images")

_SEARCHABLE = {
    "bt_cover": lambda K, opts: check_bt_cover(K, opts["cover"]),
    "restricted_cover": lambda K, opts: check_restricted_cover(K, opts["cover"]),
    "meyer": lambda K, opts: check_meyer(K),
    "dual_cover": lambda K, opts: check_dual_cover(K, opts["cover"]),
    "surface_ratio": lambda K, opts: check_surface_ratio(K, opts["u"]),
    "nonorthogonal_pair": lambda K, opts: check_nonorthogonal_pair(
        K, opts["u"], opts["v"]),
}


@dataclass(frozen=True)
class SearchResult:
    """Best witness found by a tightness search."""

    check: str
    family: str
    best: InequalityReport
    witness: Polytope
    trajectory: tuple[float, ...]

    @property
    def best_objective(self) -> float:
        return self.trajectory[-1] if self.trajectory else math.nan


def _objective(report: InequalityReport) -> float:
    """Ratio towards one: 1 means equality, larger means tighter."""
    if report.verdict == DEGENERATE:
        return -math.inf
    if report.ratio_exact is not None:
        val = float(report.ratio_exact)
    elif report.ratio is not None:
        val = report.ratio
    else:
        return -math.inf
    return val if report.relation == "<=" else (1.0 / val if val else -math.inf)


def tightness_search(check_id: str, family: str, iters: int = 64,
                     seed: int = 0, *, n: int = 3, points: int | None = None,
                     span: int = 2, cover=None, u=None, v=None,
                     ) -> SearchResult:
    """Seeded hill-climbing search for near-equality witnesses.

    Perturbs one vertex coordinate at a time by small rationals and
    keeps changes that push the inequality's ratio towards one;
    the diagonal-images family resamples diagonal scalings of the
    cross-polytope instead of climbing.
    """
    if check_id not in _SEARCHABLE:
        raise ValueError(
            f"unknown or non-searchable check {check_id!r}; searchable: "
            f"{', '.join(sorted(_SEARCHABLE))}"
        )
    if family not in SEARCH_FAMILIES:
        raise ValueError(f"unknown family {family!r}; known: "
                         f"{', '.join(SEARCH_FAMILIES)}")
    opts = {"cover": _as_cover(cover) if cover is not None else None,
            "u": u, "v": v}
    if check_id in ("bt_cover",) and opts["cover"] is None:
        from .covers import loomis_whitney_cover
        opts["cover"] = loomis_whitney_cover(n)
    if check_id in ("restricted_cover", "dual_cover") and opts["cover"] is None:
        opts["cover"] = UniformCover([(1,), (2,)], 1)
    if check_id == "surface_ratio" and opts["u"] is None:
        opts["u"] = [0] * (n - 1) + [1]
    if check_id == "nonorthogonal_pair":
        if opts["u"] is None:
            opts["u"] = [1] + [0] * (n - 1)
        if opts["v"] is None:
            opts["v"] = [0, 1] + [0] * (n - 2)
    rnd = _random.Random(f"search:{check_id}:{family}:{seed}:{n}")
    runner = _SEARCHABLE[check_id]

    if family == "diagonal-images":
        base = make_cross_polytope(n)
        best_rep, best_body, best_obj = None, None, -math.inf
        trajectory = []
        from .bodies import make_diagonal_image
        for _ in range(max(1, iters)):
            lams = [rat(rnd.randint(1, 4 * span), rnd.randint(1, 4))
                    for _ in range(n)]
            body = make_diagonal_image(base, lams)
            rep = runner(body, opts)
            obj = _objective(rep)
            if obj > best_obj:
                best_rep, best_body, best_obj = rep, body, obj
            trajectory.append(best_obj)
        return SearchResult(check_id, family, best_rep, best_body,
                            tuple(trajectory))

    if family == "random-hull":
        body = make_random_hull(n, points or (2 * n + 2), seed=seed, span=span)
    elif family == "perturbed-box":
        body = make_cube(n)
    else:
        body = make_cross_polytope(n)
    best_rep = runner(body, opts)
    best_body, best_obj = body, _objective(best_rep)
    trajectory = [best_obj]
    for _ in range(max(0, iters - 1)):
        verts = [list(vtx) for vtx in best_body.vertices]
        i = rnd.randrange(len(verts))
        j = rnd.randrange(n)
        delta = rat(rnd.choice((-1, 1)), 2 ** rnd.randint(1, 4))
        verts[i][j] = verts[i][j] + delta
        cand = convex_hull([tuple(vtx) for vtx in verts])
        if cand.is_full_dimensional():
            rep = runner(cand, opts)
            obj = _objective(rep)
            if obj > best_obj:
                best_rep, best_body, best_obj = rep, cand, obj
        trajectory.append(best_obj)
    return SearchResult(check_id, family, best_rep, best_body,
                        tuple(trajectory))
