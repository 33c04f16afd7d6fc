"""Exact polytopes over Q^n: hulls, volumes, sections, projections.

The hull engine is an incremental beneath-beyond construction running
entirely on rational arithmetic.  A certified floating point screen
(forward error bound on the facet distance) discards clearly interior
points and clearly invisible facets cheaply; every borderline decision
is settled exactly, so the output never depends on float behaviour.

Conventions
-----------
* ``volume()`` of a k-dimensional polytope is k-dimensional Lebesgue
  volume inside its affine span, returned as an exact rational whenever
  the span's Gram determinant is a perfect rational square (always the
  case for full-dimensional bodies and coordinate-aligned spans) and as
  a float otherwise.
* A single point has volume 1 (0-dimensional counting measure) and the
  empty polytope has volume 0, so products over complementary index
  sets stay meaningful when a factor degenerates.
* Coordinate index sets (tau) are 1-based, matching the [n] = {1,..,n}
  convention of the inequality statements.  Internal storage is 0-based.
* Exact-path entry points reject floats loudly; numeric work goes
  through :class:`FloatBody` and the ``*_float`` helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .linalg import (
    RowBasis,
    cross_normal,
    det_exact,
    gram_det,
    primitive_int_vector,
    vdot,
    vsub,
)
from .rational import ONE, ZERO, Rat, is_exact, rat, rat_str, sqrt_exact

# Forward error allowance for the float screen, relative to the sum of
# absolute products.  True rounding error is below 4e-15 of that scale
# for dimensions used here; 1e-12 leaves two orders of safety.
_SCREEN_REL = 1e-12
_SCREEN_ABS = 1e-290

Point = tuple


def _as_rat_point(p) -> Point:
    """Exact coordinates; ints stay ints (fast integer hull path) and
    rationals with denominator 1 are normalised to ints."""
    out = []
    for c in p:
        q = rat(c)
        if q.denominator == 1:
            out.append(int(q))
        else:
            out.append(q)
    return tuple(out)


def _dot_int(n_ints, p):
    total = 0
    for a, b in zip(n_ints, p):
        if a:
            total = total + a * b
    return total


@dataclass(frozen=True)
class Hyperplane:
    """Affine hyperplane <normal, x> = offset.

    Exact when every entry is rational; float entries put it on the
    numeric path.
    """

    normal: tuple
    offset: object

    def __post_init__(self):
        if not any(bool(c) for c in self.normal):
            raise ValueError("hyperplane normal must be nonzero")

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.normal) and is_exact(self.offset)


class _Frame:
    """Affine frame for the hull's span: origin + RREF row basis.

    Rows are fully reduced with unit pivots, so span coordinates of a
    difference vector are read off the pivot columns.
    """

    __slots__ = ("origin", "rows", "pivots", "width")

    def __init__(self, origin: Point, rows: Sequence[Point], pivots: Sequence[int]):
        self.origin = origin
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)
        self.width = len(origin)

    @classmethod
    def from_points(cls, pts: Sequence[Point]) -> "_Frame":
        origin = pts[0]
        width = len(origin)
        basis = RowBasis(width)
        for p in pts[1:]:
            basis.add(vsub(p, origin))
            if basis.rank == width:
                break
        return cls(origin, basis.rows, basis.pivots)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def coords_unchecked(self, point: Point) -> Point:
        return tuple(point[j] - self.origin[j] for j in self.pivots)

    def coords_checked(self, point: Point) -> Point | None:
        w = vsub(point, self.origin)
        coeffs = tuple(w[j] for j in self.pivots)
        recon = [ZERO] * self.width
        for c, row in zip(coeffs, self.rows):
            if c != 0:
                for j in range(self.width):
                    recon[j] = recon[j] + c * row[j]
        for a, b in zip(recon, w):
            if a != b:
                return None
        return coeffs

    def lift(self, coords: Point) -> Point:
        out = list(self.origin)
        for c, row in zip(coords, self.rows):
            if c != 0:
                for j in range(self.width):
                    out[j] = out[j] + c * row[j]
        return tuple(out)

    def gram(self) -> Rat:
        return gram_det(self.rows)


class _HullEngine:
    """Beneath-beyond hull in intrinsic coordinates (dim k >= 2)."""

    def __init__(self, k: int, pts: Sequence[Point]):
        self.k = k
        self.pts = list(pts)
        self.pts_f = np.array([[float(c) for c in p] for p in self.pts], dtype=float)
        self.facets: dict[int, tuple] = {}  # fid -> (n_ints, offset, verts)
        self.ridge_map: dict[tuple, list[int]] = {}
        self.ref_ids: tuple[int, ...] = ()
        cap = 64
        self._cap = cap
        self._top = 0
        self._Nf = np.zeros((cap, k))
        self._cf = np.zeros(cap)
        self._Na = np.zeros((cap, k))
        self._alive = np.zeros(cap, dtype=bool)

    # -- facet bookkeeping -------------------------------------------------

    def _grow(self):
        cap = self._cap * 2
        for name in ("_Nf", "_Na"):
            arr = np.zeros((cap, self.k))
            arr[: self._cap] = getattr(self, name)
            setattr(self, name, arr)
        cf = np.zeros(cap)
        cf[: self._cap] = self._cf
        self._cf = cf
        alive = np.zeros(cap, dtype=bool)
        alive[: self._cap] = self._alive
        self._alive = alive
        self._cap = cap

    def _add_facet(self, verts: tuple):
        base = self.pts[verts[0]]
        rows = [vsub(self.pts[v], base) for v in verts[1:]]
        normal = cross_normal(rows, self.k)
        if normal is None:
            raise RuntimeError("degenerate facet candidate in hull engine")
        normal = primitive_int_vector(normal)
        offset = _dot_int(normal, base)
        # Orient against the initial simplex: its k + 1 vertices affinely
        # span, so at least one sits strictly off any hyperplane.
        side = 0
        for rid in self.ref_ids:
            side = _dot_int(normal, self.pts[rid]) - offset
            if side != 0:
                break
        if side > 0:
            normal = tuple(-x for x in normal)
            offset = -offset
        elif side == 0:
            raise RuntimeError("hull reference simplex lies inside a facet plane")
        fid = self._top
        if fid >= self._cap:
            self._grow()
        self._top += 1
        nf = [float(x) for x in normal]
        cf = float(offset)
        finite = math.isfinite(cf)
        if finite:
            for x in nf:
                if not math.isfinite(x):
                    finite = False
                    break
        if finite:
            self._Nf[fid] = nf
            self._cf[fid] = cf
            self._Na[fid] = [abs(x) for x in nf]
        else:  # huge integers: force exact checks for this facet
            self._Nf[fid] = 0.0
            self._cf[fid] = 0.0
            self._Na[fid] = np.inf
        self._alive[fid] = True
        ridges = tuple(_ridges(verts))
        self.facets[fid] = (normal, offset, verts, ridges)
        setdefault = self.ridge_map.setdefault
        for ridge in ridges:
            setdefault(ridge, []).append(fid)

    def _remove_facet(self, fid: int):
        entry = self.facets.pop(fid)
        self._alive[fid] = False
        ridge_map = self.ridge_map
        for ridge in entry[3]:
            lst = ridge_map.get(ridge)
            if lst is not None:
                lst.remove(fid)
                if not lst:
                    del ridge_map[ridge]

    # -- insertion ---------------------------------------------------------

    def _visible_facets(self, i: int) -> set[int]:
        top = self._top
        pf = self.pts_f[i]
        dist = self._Nf[:top] @ pf - self._cf[:top]
        err = _SCREEN_REL * (self._Na[:top] @ np.abs(pf) + np.abs(self._cf[:top])) + _SCREEN_ABS
        alive = self._alive[:top]
        sure = alive & (dist > err)
        unsure = alive & ~sure & (dist >= -err)
        visible = set(np.nonzero(sure)[0].tolist())
        p = self.pts[i]
        for fid in np.nonzero(unsure)[0].tolist():
            normal, offset = self.facets[fid][:2]
            if _dot_int(normal, p) > offset:
                visible.add(fid)
        return visible

    def insert(self, i: int) -> bool:
        visible = self._visible_facets(i)
        if not visible:
            return False
        horizon = []
        for fid in visible:
            for ridge in self.facets[fid][3]:
                neighbours = self.ridge_map[ridge]
                if len(neighbours) == 1 or any(f not in visible for f in neighbours):
                    horizon.append(ridge)
        for fid in list(visible):
            self._remove_facet(fid)
        for ridge in horizon:
            self._add_facet(tuple(sorted(ridge + (i,))))
        return True

    def run(self):
        order, simplex_ids = self._initial_simplex()
        self.ref_ids = tuple(simplex_ids)
        ids = sorted(simplex_ids)
        for drop in range(self.k + 1):
            self._add_facet(tuple(ids[:drop] + ids[drop + 1 :]))
        placed = set(simplex_ids)
        for i in order:
            if i not in placed:
                self.insert(i)

    def _initial_simplex(self):
        m = len(self.pts)
        centre = self.pts_f.mean(axis=0)
        dist = np.linalg.norm(self.pts_f - centre, axis=1)
        # Likely hull vertices first (qhull's opinion is advisory only:
        # every point still passes the exact insert), then by distance.
        likely = np.ones(m, dtype=bool)
        if m > 4 * (self.k + 1):
            try:
                hull = ConvexHull(self.pts_f)
                likely[:] = False
                likely[hull.vertices] = True
            except QhullError:
                likely[:] = True
        order = sorted(range(m), key=lambda i: (not likely[i], -dist[i], i))
        basis = RowBasis(self.k)
        chosen = [order[0]]
        for i in order[1:]:
            if basis.add(vsub(self.pts[i], self.pts[chosen[0]])):
                chosen.append(i)
                if len(chosen) == self.k + 1:
                    break
        if len(chosen) != self.k + 1:
            raise RuntimeError("points do not span the advertised dimension")
        return order, chosen

    # -- extraction ----------------------------------------------------------

    def merged_facets(self) -> list[tuple]:
        groups: dict[tuple, set[int]] = {}
        for normal, offset, verts, _ in self.facets.values():
            groups.setdefault((normal, offset), set()).update(verts)
        out = [(n, c, tuple(sorted(ids))) for (n, c), ids in groups.items()]
        out.sort(key=lambda f: (f[0], rat(f[1])))
        return out

    def simplicial(self) -> list[tuple]:
        return sorted(f[2] for f in self.facets.values())

    def extreme_subset(self, cand: Sequence[int], merged: Sequence[tuple]) -> list[int]:
        No = np.array([[float(x) for x in f[0]] for f in merged])
        co = np.array([float(f[1]) for f in merged])
        bad = ~(np.all(np.isfinite(No), axis=1) & np.isfinite(co))
        Na = np.abs(No)
        No[bad] = 0.0
        co[bad] = 0.0
        Na[bad] = np.inf
        out = []
        for vid in cand:
            pf = self.pts_f[vid]
            dist = No @ pf - co
            err = _SCREEN_REL * (Na @ np.abs(pf) + np.abs(co)) + _SCREEN_ABS
            near = np.nonzero(np.abs(dist) <= err)[0]
            if len(near) < self.k:
                continue
            basis = RowBasis(self.k)
            p = self.pts[vid]
            for fi in near.tolist():
                normal, offset, _ = merged[fi]
                if _dot_int(normal, p) == offset:
                    basis.add(normal)
                    if basis.rank == self.k:
                        break
            if basis.rank == self.k:
                out.append(vid)
        return out


def _ridges(verts: tuple):
    for drop in range(len(verts)):
        yield verts[:drop] + verts[drop + 1 :]


def _hull_k(pts: list[Point], k: int, depth: int = 0):
    """Hull of intrinsic points spanning dimension k >= 2.

    Returns (extreme ids sorted, merged facets, simplicial facets), all
    indexed into pts.
    """
    eng = _HullEngine(k, pts)
    eng.run()
    merged = eng.merged_facets()
    cand = sorted(set().union(*(set(f[2]) for f in merged)))
    extreme = eng.extreme_subset(cand, merged)
    if len(extreme) == len(cand):
        return extreme, merged, eng.simplicial()
    if depth > 2:
        raise RuntimeError("hull extreme-point filtering failed to stabilise")
    sub = [pts[i] for i in extreme]
    e2, m2, s2 = _hull_k(sub, k, depth + 1)
    back = [extreme[i] for i in e2]
    merged2 = [
        (n, c, tuple(sorted(extreme[i] for i in ids))) for n, c, ids in m2
    ]
    simp2 = [tuple(sorted(extreme[i] for i in ids)) for ids in s2]
    return sorted(back), merged2, simp2


class Polytope:
    """Immutable convex polytope given by its extreme vertices."""

    __slots__ = (
        "ambient_dim",
        "vertices",
        "intrinsic_dim",
        "name",
        "_frame",
        "_ifacets",
        "_simplices",
        "_gram",
        "_volume_coeff",
        "_verts_f",
    )

    def __init__(self, *, ambient_dim, vertices, intrinsic_dim, name, frame, ifacets, simplices):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "intrinsic_dim", intrinsic_dim)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_frame", frame)
        object.__setattr__(self, "_ifacets", ifacets)
        object.__setattr__(self, "_simplices", simplices)
        object.__setattr__(self, "_gram", None)
        object.__setattr__(self, "_volume_coeff", None)
        object.__setattr__(self, "_verts_f", None)

    def __setattr__(self, *_):
        raise AttributeError("Polytope is immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def empty(cls, ambient_dim: int, name: str | None = None) -> "Polytope":
        return cls(
            ambient_dim=ambient_dim,
            vertices=(),
            intrinsic_dim=-1,
            name=name,
            frame=None,
            ifacets=(),
            simplices=(),
        )

    @classmethod
    def single_point(cls, point, name: str | None = None) -> "Polytope":
        p = _as_rat_point(point)
        return cls(
            ambient_dim=len(p),
            vertices=(p,),
            intrinsic_dim=0,
            name=name,
            frame=_Frame(p, (), ()),
            ifacets=(),
            simplices=((0,),),
        )

    # -- basic queries -------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def is_empty(self) -> bool:
        return self.intrinsic_dim < 0

    def is_full_dimensional(self) -> bool:
        return self.intrinsic_dim == self.ambient_dim

    def vertices_float(self) -> np.ndarray:
        if self._verts_f is None:
            arr = np.array(
                [[float(c) for c in v] for v in self.vertices], dtype=float
            ).reshape(len(self.vertices), self.ambient_dim)
            object.__setattr__(self, "_verts_f", arr)
        return self._verts_f

    def __eq__(self, other):
        return (
            isinstance(other, Polytope)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return (
            f"<Polytope{label} dim {self.intrinsic_dim} in R^{self.ambient_dim}, "
            f"{self.n_vertices} vertices>"
        )

    # -- volume --------------------------------------------------------------

    def gram(self) -> Rat:
        if self._gram is None:
            g = self._frame.gram() if self._frame is not None else ONE
            object.__setattr__(self, "_gram", g)
        return self._gram

    def volume_sqrt_parts(self):
        """Volume as (coeff, gram) with volume = coeff * sqrt(gram)."""
        if self.is_empty():
            return ZERO, ONE
        if self.intrinsic_dim == 0:
            return ONE, ONE
        if self._volume_coeff is None:
            frame = self._frame
            k = self.intrinsic_dim
            ipts = [frame.coords_unchecked(v) for v in self.vertices]
            kfact = math.factorial(k)
            total = 0
            for simplex in self._simplices:
                base = ipts[simplex[0]]
                rows = [vsub(ipts[j], base) for j in simplex[1:]]
                d = det_exact(rows)
                total = total + (d if d >= 0 else -d)
            object.__setattr__(self, "_volume_coeff", rat(total) / kfact)
        return self._volume_coeff, self.gram()

    def volume(self):
        """Exact rational when the span Gram is a perfect square, float
        otherwise."""
        coeff, gram = self.volume_sqrt_parts()
        root = sqrt_exact(gram)
        if root is not None:
            return coeff * root
        return float(coeff) * math.sqrt(float(gram))

    def volume_is_exact(self) -> bool:
        return self.is_empty() or self.intrinsic_dim <= 0 or sqrt_exact(self.gram()) is not None

    def volume_float(self) -> float:
        return float(self.volume())

    # -- geometry ------------------------------------------------------------

    def centroid(self) -> Point:
        if self.is_empty():
            raise ValueError("empty polytope has no centroid")
        if self.intrinsic_dim == 0:
            return self.vertices[0]
        frame = self._frame
        ipts = [frame.coords_unchecked(v) for v in self.vertices]
        total_w = ZERO
        accum = [ZERO] * self.ambient_dim
        m = rat(self.intrinsic_dim + 1)
        for simplex in self._simplices:
            base = ipts[simplex[0]]
            rows = [vsub(ipts[j], base) for j in simplex[1:]]
            w = det_exact(rows)
            if w < 0:
                w = -w
            if w == 0:
                continue
            total_w = total_w + w
            for idx in simplex:
                v = self.vertices[idx]
                for j in range(self.ambient_dim):
                    accum[j] = accum[j] + w * v[j] / m
        if total_w == 0:
            raise RuntimeError("degenerate triangulation")
        return tuple(a / total_w for a in accum)

    def contains(self, point) -> bool:
        if self.is_empty():
            return False
        p = _as_rat_point(point)
        if len(p) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if self.intrinsic_dim == 0:
            return p == self.vertices[0]
        coords = self._frame.coords_checked(p)
        if coords is None:
            return False
        for normal, offset, _ in self._ifacets:
            if _dot_int(normal, coords) > offset:
                return False
        return True

    def facets(self) -> list[Hyperplane]:
        """Ambient H-representation; full-dimensional bodies only."""
        if not self.is_full_dimensional():
            raise ValueError(
                f"H-representation needs a full-dimensional body "
                f"(intrinsic dim {self.intrinsic_dim} in R^{self.ambient_dim})"
            )
        origin = self._frame.origin
        pivots = self._frame.pivots
        out = []
        for normal, offset, _ in self._ifacets:
            amb = [ZERO] * self.ambient_dim
            for val, j in zip(normal, pivots):
                amb[j] = rat(val)
            shift = _dot_int(normal, tuple(origin[j] for j in pivots))
            out.append(Hyperplane(tuple(amb), offset + shift))
        return out

    def facet_vertex_sets(self) -> list[tuple[int, ...]]:
        """Vertex index tuple of each facet (any intrinsic dimension)."""
        return [ids for (_, _, ids) in self._ifacets]

    def triangulation(self) -> tuple[tuple[int, ...], ...]:
        """Simplices (vertex index tuples) whose union is the body."""
        return self._simplices

    def support_float(self, direction: np.ndarray) -> float:
        if self.is_empty():
            raise ValueError("empty polytope has no support function")
        return float(np.max(self.vertices_float() @ np.asarray(direction, dtype=float)))

    # -- affine images -------------------------------------------------------

    def translate(self, shift) -> "Polytope":
        if self.is_empty():
            return self
        t = _as_rat_point(shift)
        verts = tuple(
            _as_rat_point(tuple(a + b for a, b in zip(v, t))) for v in self.vertices
        )
        if self.intrinsic_dim <= 0:
            return Polytope.single_point(verts[0], name=self.name)
        frame = _Frame(
            tuple(a + b for a, b in zip(self._frame.origin, t)),
            self._frame.rows,
            self._frame.pivots,
        )
        out = Polytope(
            ambient_dim=self.ambient_dim,
            vertices=verts,
            intrinsic_dim=self.intrinsic_dim,
            name=self.name,
            frame=frame,
            ifacets=self._ifacets,
            simplices=self._simplices,
        )
        if self._volume_coeff is not None:
            object.__setattr__(out, "_volume_coeff", self._volume_coeff)
        return out

    def scale(self, factor) -> "Polytope":
        c = rat(factor)
        if self.is_empty():
            return self
        if c == 0:
            return Polytope.single_point((0,) * self.ambient_dim, name=self.name)
        verts = tuple(
            _as_rat_point(tuple(c * x for x in v)) for v in self.vertices
        )
        if c < 0:
            return convex_hull(verts, name=self.name)
        if self.intrinsic_dim == 0:
            return Polytope.single_point(verts[0], name=self.name)
        frame = _Frame(
            tuple(c * x for x in self._frame.origin),
            self._frame.rows,
            self._frame.pivots,
        )
        ifacets = tuple((n, c * off, ids) for (n, off, ids) in self._ifacets)
        out = Polytope(
            ambient_dim=self.ambient_dim,
            vertices=verts,
            intrinsic_dim=self.intrinsic_dim,
            name=self.name,
            frame=frame,
            ifacets=ifacets,
            simplices=self._simplices,
        )
        if self._volume_coeff is not None:
            object.__setattr__(
                out, "_volume_coeff", self._volume_coeff * c**self.intrinsic_dim
            )
        return out

    def center(self) -> "Polytope":
        """Translate the centroid to the origin."""
        cent = self.centroid()
        return self.translate(tuple(-x for x in cent))

    def minkowski_sum(self, other: "Polytope") -> "Polytope":
        return minkowski_sum(self, other)

    def linear_image(self, matrix) -> "Polytope":
        return linear_image(self, matrix)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "n": self.ambient_dim,
            "vertices": [[rat_str(c) for c in v] for v in self.vertices],
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Polytope":
        try:
            n = int(data["n"])
            raw = data["vertices"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed body document: {exc}") from exc
        pts = []
        for row in raw:
            if len(row) != n:
                raise ValueError(
                    f"vertex {row!r} has {len(row)} coordinates, expected {n}"
                )
            try:
                pts.append(tuple(rat(c) for c in row))
            except (TypeError, ValueError) as exc:
                raise ValueError(
                    f"vertex coordinates must be integers or 'p/q' strings: {exc}"
                ) from exc
        body = convex_hull(pts, name=data.get("name"))
        if body.ambient_dim != n:
            raise ValueError("inconsistent ambient dimension")
        return body


def convex_hull(points: Iterable, name: str | None = None) -> Polytope:
    """Exact convex hull; accepts rationals/ints/strings, rejects floats."""
    pts = sorted({_as_rat_point(p) for p in points})
    if not pts:
        raise ValueError("convex hull of an empty point set is undefined; "
                         "use Polytope.empty for the empty body")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points have mixed dimensions")
    if len(pts) == 1:
        return Polytope.single_point(pts[0], name=name)
    frame = _Frame.from_points(pts)
    k = frame.dim
    ipts = [frame.coords_unchecked(p) for p in pts]
    if k == 1:
        order = sorted(range(len(pts)), key=lambda i: ipts[i][0])
        verts = sorted([pts[order[0]], pts[order[-1]]])
        y = [frame.coords_unchecked(v)[0] for v in verts]
        hi_idx = 0 if y[0] > y[1] else 1
        ifacets = (
            ((1,), y[hi_idx], (hi_idx,)),
            ((-1,), -y[1 - hi_idx], (1 - hi_idx,)),
        )
        return Polytope(
            ambient_dim=n,
            vertices=tuple(verts),
            intrinsic_dim=1,
            name=name,
            frame=frame,
            ifacets=ifacets,
            simplices=((0, 1),),
        )
    extreme, merged, simplicial = _hull_k(ipts, k)
    amb = [pts[i] for i in extreme]
    order = sorted(range(len(amb)), key=lambda i: amb[i])
    new_index = {extreme[old]: new for new, old in enumerate(order)}
    verts = tuple(amb[i] for i in order)
    extreme_set = set(extreme)
    ifacets = tuple(
        sorted(
            (n_ints, off, tuple(sorted(new_index[i] for i in ids if i in extreme_set)))
            for n_ints, off, ids in merged
        )
    )
    cones = []
    for simplex in simplicial:
        mapped = tuple(sorted(new_index[i] for i in simplex))
        if 0 not in mapped:
            cones.append(tuple(sorted((0,) + mapped)))
    cones.sort()
    return Polytope(
        ambient_dim=n,
        vertices=verts,
        intrinsic_dim=k,
        name=name,
        frame=frame,
        ifacets=ifacets,
        simplices=tuple(cones),
    )


def minkowski_sum(a: Polytope, b: Polytope, name: str | None = None) -> Polytope:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("Minkowski sum needs matching ambient dimensions")
    if a.is_empty() or b.is_empty():
        return Polytope.empty(a.ambient_dim, name=name)
    cands = {tuple(x + y for x, y in zip(u, v)) for u in a.vertices for v in b.vertices}
    return convex_hull(cands, name=name)


def linear_image(p: Polytope, matrix, name: str | None = None) -> Polytope:
    """Image under an exact rational matrix (rows act on coordinates)."""
    rows = [tuple(rat(c) for c in row) for row in matrix]
    if p.is_empty():
        return Polytope.empty(len(rows), name=name)
    if any(len(r) != p.ambient_dim for r in rows):
        raise ValueError("matrix width must equal the ambient dimension")
    pts = [tuple(vdot(r, v) for r in rows) for v in p.vertices]
    return convex_hull(pts, name=name)


def _validate_tau(tau, n: int) -> list[int]:
    items = [int(j) for j in tau]
    idx = sorted(set(items))
    if not idx:
        raise ValueError("index set tau must be nonempty")
    if idx[0] < 1 or idx[-1] > n or len(idx) != len(items):
        raise ValueError(f"tau must be a set of distinct indices in 1..{n}, got {items}")
    return idx


def project_coordinate(p: Polytope, tau, name: str | None = None) -> Polytope:
    """Orthogonal projection onto the coordinate subspace F_tau,
    realised in Q^{|tau|} (tau is 1-based)."""
    idx = _validate_tau(tau, p.ambient_dim)
    if p.is_empty():
        return Polytope.empty(len(idx), name=name)
    pts = [tuple(v[j - 1] for j in idx) for v in p.vertices]
    out = convex_hull(pts, name=name)
    return out


def project_complement(p: Polytope, tau, name: str | None = None) -> Polytope:
    """Projection onto the coordinates NOT in tau (1-based)."""
    idx = set(_validate_tau(tau, p.ambient_dim))
    rest = [j for j in range(1, p.ambient_dim + 1) if j not in idx]
    if not rest:
        raise ValueError("complement of tau is empty")
    return project_coordinate(p, rest, name=name)


def section_hyperplane(p: Polytope, plane: Hyperplane, name: str | None = None) -> Polytope:
    """Exact section P intersect {<a,x> = c}; the plane must be exact."""
    if not plane.is_exact:
        raise ValueError("exact sections need a rational hyperplane; "
                         "use section_volume_float for numeric planes")
    if len(plane.normal) != p.ambient_dim:
        raise ValueError("hyperplane dimension mismatch")
    if p.is_empty():
        return Polytope.empty(p.ambient_dim, name=name)
    a = tuple(rat(c) for c in plane.normal)
    c0 = rat(plane.offset)
    vals = [vdot(a, v) - c0 for v in p.vertices]
    cands = set()
    pos, neg = [], []
    for v, s in zip(p.vertices, vals):
        if s == 0:
            cands.add(v)
        elif s > 0:
            pos.append((v, s))
        else:
            neg.append((v, s))
    for u, su in pos:
        for w, sw in neg:
            t = su / (su - sw)  # in (0,1)
            cands.add(tuple(x + t * (y - x) for x, y in zip(u, w)))
    if not cands:
        return Polytope.empty(p.ambient_dim, name=name)
    return convex_hull(cands, name=name)


def section_coordinate(p: Polytope, tau, name: str | None = None) -> Polytope:
    """Exact section with the coordinate subspace {x_j = 0 for j in tau}
    (tau 1-based); the result stays in ambient coordinates."""
    idx = _validate_tau(tau, p.ambient_dim)
    body = p
    for j in idx:
        normal = tuple(ONE if t == j - 1 else ZERO for t in range(p.ambient_dim))
        body = section_hyperplane(body, Hyperplane(normal, ZERO))
        if body.is_empty():
            break
    if name is not None and not body.is_empty():
        body = Polytope(
            ambient_dim=body.ambient_dim,
            vertices=body.vertices,
            intrinsic_dim=body.intrinsic_dim,
            name=name,
            frame=body._frame,
            ifacets=body._ifacets,
            simplices=body._simplices,
        )
    return body


def project_general(p: Polytope, basis, name: str | None = None) -> Polytope:
    """Exact projection onto span of an exactly orthonormal rational
    basis (rows).  Rational orthonormal frames are rare; general frames
    belong on the float path."""
    rows = [tuple(rat(c) for c in row) for row in basis]
    for i, r in enumerate(rows):
        for j, s in enumerate(rows):
            expect = ONE if i == j else ZERO
            if vdot(r, s) != expect:
                raise ValueError(
                    "basis is not exactly orthonormal; use project_volume_float"
                )
    pts = [tuple(vdot(v, r) for r in rows) for v in p.vertices]
    return convex_hull(pts, name=name)


def surface_area(p: Polytope):
    """Surface area of a full-dimensional polytope: sum of facet volumes.

    Exact rational when every facet span has a perfect-square Gram,
    float otherwise.  In R^1 a segment has surface area 2 (two points).
    """
    if not p.is_full_dimensional():
        raise ValueError(
            f"surface area needs a full-dimensional body "
            f"(intrinsic dim {p.intrinsic_dim} in R^{p.ambient_dim})"
        )
    if p.ambient_dim == 1:
        return rat(2)
    exact_total = ZERO
    float_total = 0.0
    all_exact = True
    for _, _, ids in p._ifacets:
        facet = convex_hull([p.vertices[i] for i in ids])
        vol = facet.volume()
        if is_exact(vol) and all_exact:
            exact_total = exact_total + vol
        else:
            if all_exact:
                float_total = float(exact_total)
                all_exact = False
            float_total += float(vol)
    return exact_total if all_exact else float_total


# -- float path ----------------------------------------------------------------


class FloatBody:
    """Vertex cloud with qhull-backed float geometry."""

    def __init__(self, vertices: np.ndarray):
        arr = np.asarray(vertices, dtype=float)
        if arr.ndim != 2:
            raise ValueError("FloatBody expects an (m, d) vertex array")
        self.vertices = arr

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def _hull(self):
        return ConvexHull(self.vertices)

    def volume(self) -> float:
        d = self.dim
        if len(self.vertices) == 0:
            return 0.0
        if d == 0:
            return 1.0
        if d == 1:
            return float(self.vertices.max() - self.vertices.min())
        if len(self.vertices) <= d:
            return 0.0
        try:
            return float(self._hull().volume)
        except QhullError:
            return 0.0  # degenerate (flat) cloud

    def surface_area(self) -> float:
        if self.dim < 2:
            raise ValueError("surface area needs dimension >= 2")
        try:
            return float(self._hull().area)
        except QhullError:
            return 0.0


def orthonormal_complement(u: np.ndarray) -> np.ndarray:
    """Rows spanning the orthogonal complement of u (float, det. SVD)."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    _, _, vt = np.linalg.svd(u.reshape(1, -1))
    return vt[1:]


def project_volume_float(p: Polytope, basis: np.ndarray) -> float:
    """|P_E(K)| for E spanned by orthonormal float rows."""
    basis = np.asarray(basis, dtype=float)
    shadow = p.vertices_float() @ basis.T
    return FloatBody(shadow).volume()


def section_volume_float(p: Polytope, normal: np.ndarray, offset: float = 0.0) -> float:
    """|K intersect {<u,x> = c}| (relative volume), float chord clipping."""
    u = np.asarray(normal, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0:
        raise ValueError("zero normal")
    u = u / norm
    c = float(offset) / norm
    verts = p.vertices_float()
    vals = verts @ u - c
    scale = max(1.0, np.abs(vals).max())
    tol = 1e-12 * scale
    on = [verts[i] for i in range(len(verts)) if abs(vals[i]) <= tol]
    pos = [(verts[i], vals[i]) for i in range(len(verts)) if vals[i] > tol]
    neg = [(verts[i], vals[i]) for i in range(len(verts)) if vals[i] < -tol]
    pts = list(on)
    for v1, s1 in pos:
        for v2, s2 in neg:
            t = s1 / (s1 - s2)
            pts.append(v1 + t * (v2 - v1))
    if not pts:
        return 0.0
    basis = orthonormal_complement(u)
    coords = np.array(pts) @ basis.T
    return FloatBody(coords).volume()
