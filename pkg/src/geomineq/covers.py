"""Uniform covers of index sets and their exact constants.

An s-uniform cover of an index set sigma is a multiset of non-empty
subsets of sigma such that every index of sigma lies in exactly s of
them.  The classical Loomis-Whitney family (all (n-1)-subsets of [n])
is the (n-1)-uniform example; restricted projection and section
inequalities are driven by covers of proper subsets.

The module also evaluates the constant gamma(n, d, s, r) attached to
restricted cover inequalities.  The upper argument of one binomial is
the rational n - s*d/r, so the generalized binomial
C(x, m) = x(x-1)...(x-m+1)/m! is computed exactly in rationals; no
Gamma-function floats are involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .rational import ONE, Rat, rat

MAX_ENUM_INDICES = 10


class NonUniformCoverError(ValueError):
    """Raised when a claimed s-uniform cover misses or overshoots an index."""

    def __init__(self, index: int, observed: int, expected: int):
        self.index = index
        self.observed = observed
        self.expected = expected
        super().__init__(
            f"index {index} is covered {observed} times, expected {expected}"
        )


def _canon_parts(parts: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(set(int(j) for j in p))) for p in parts))


@dataclass(frozen=True)
class UniformCover:
    """An s-uniform cover, stored as a sorted multiset for canonical equality.

    ``sigma`` is the covered index set (1-based indices), ``parts`` the
    multiset (sigma_1, ..., sigma_r) and ``s`` the claimed multiplicity.
    Construction canonicalizes but does not validate; call
    :func:`validate_cover` to enforce the defining property.
    """

    sigma: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    s: int

    def __init__(self, parts: Iterable[Iterable[int]], s: int,
                 sigma: Iterable[int] | None = None):
        parts_c = _canon_parts(parts)
        union = sorted(set(j for p in parts_c for j in p))
        sig = union if sigma is None else sorted(set(int(j) for j in sigma))
        object.__setattr__(self, "sigma", tuple(sig))
        object.__setattr__(self, "parts", parts_c)
        object.__setattr__(self, "s", int(s))

    @property
    def r(self) -> int:
        """Number of parts."""
        return len(self.parts)

    @property
    def d(self) -> int:
        """Cardinality of the covered set sigma."""
        return len(self.sigma)

    @property
    def part_sizes(self) -> tuple[int, ...]:
        """The cardinalities d_i = |sigma_i| in canonical part order."""
        return tuple(len(p) for p in self.parts)

    def __repr__(self):
        return f"UniformCover({format_cover(self)!r}, s={self.s})"


def validate_cover(cover: UniformCover) -> dict[int, int]:
    """Return the per-index multiplicity map of a cover.

    Succeeds iff every index of sigma is covered exactly ``cover.s``
    times; raises :class:`NonUniformCoverError` at the first violation
    (smallest offending index).  Parts must be non-empty subsets of
    sigma.
    """
    sigma = set(cover.sigma)
    if not sigma:
        raise ValueError("cover has empty sigma")
    counts = {j: 0 for j in cover.sigma}
    for part in cover.parts:
        if not part:
            raise ValueError("cover contains an empty part")
        for j in part:
            if j not in sigma:
                raise ValueError(f"part index {j} lies outside sigma {cover.sigma}")
            counts[j] += 1
    for j in cover.sigma:
        if counts[j] != cover.s:
            raise NonUniformCoverError(j, counts[j], cover.s)
    return counts


def complement_cover(cover: UniformCover) -> UniformCover:
    """The cover (sigma - sigma_1, ..., sigma - sigma_r) with multiplicity r - s.

    Complementing within sigma is an involution on the multiset of
    parts.  The input is validated first and the output validated
    before returning; empty complements (parts equal to sigma) are kept
    out by the non-empty-part rule.
    """
    validate_cover(cover)
    sigma = set(cover.sigma)
    parts = [tuple(sorted(sigma - set(p))) for p in cover.parts]
    out = UniformCover(parts, cover.r - cover.s, sigma=cover.sigma)
    validate_cover(out)
    return out


def enumerate_covers(sigma: Iterable[int], s: int, r: int,
                     equal_cardinality: int | None = None) -> list[UniformCover]:
    """All s-uniform covers of sigma with r parts, up to part ordering.

    Parts are non-empty subsets of sigma, repetitions allowed.  With
    ``equal_cardinality=k`` only covers whose parts all have size k are
    produced, and the feasibility relation r*k = |sigma|*s is enforced
    up front.  |sigma| is capped at 10 to bound the combinatorial
    blowup; enumeration is by backtracking over a sorted subset list
    with non-decreasing part indices, so each multiset appears once.
    """
    sig = sorted(set(int(j) for j in sigma))
    d = len(sig)
    if d == 0:
        raise ValueError("sigma must be non-empty")
    if d > MAX_ENUM_INDICES:
        raise ValueError(f"|sigma| = {d} exceeds enumeration cap {MAX_ENUM_INDICES}")
    if s < 1 or r < 1:
        raise ValueError("need s >= 1 and r >= 1")
    if equal_cardinality is not None:
        k = int(equal_cardinality)
        if not 1 <= k <= d:
            raise ValueError(f"part size {k} out of range 1..{d}")
        if r * k != d * s:
            raise ValueError(
                f"infeasible parameters: r*k = {r * k} != |sigma|*s = {d * s}"
            )
        sizes = [k]
    else:
        sizes = range(1, d + 1)

    subsets = []
    for size in sizes:
        subsets.extend(combinations(sig, size))
    subsets.sort()

    target = {j: s for j in sig}
    found: list[UniformCover] = []
    chosen: list[tuple[int, ...]] = []

    def feasible(counts: dict[int, int], slots_left: int) -> bool:
        for j in sig:
            need = target[j] - counts[j]
            if need < 0 or need > slots_left:
                return False
        return True

    def backtrack(start: int, counts: dict[int, int], slots_left: int):
        if slots_left == 0:
            if all(counts[j] == target[j] for j in sig):
                found.append(UniformCover(list(chosen), s, sigma=sig))
            return
        for idx in range(start, len(subsets)):
            part = subsets[idx]
            if any(counts[j] + 1 > target[j] for j in part):
                continue
            for j in part:
                counts[j] += 1
            if feasible(counts, slots_left - 1):
                chosen.append(part)
                backtrack(idx, counts, slots_left - 1)
                chosen.pop()
            for j in part:
                counts[j] -= 1

    backtrack(0, {j: 0 for j in sig}, r)
    return found


def binomial_general(x, m: int) -> Rat:
    """Generalized binomial C(x, m) = x(x-1)...(x-m+1)/m! for rational x."""
    if m < 0:
        raise ValueError("lower argument must be a non-negative integer")
    xr = rat(x)
    num = ONE
    for i in range(m):
        num = num * (xr - i)
    return num / math.factorial(m)


def gamma(n: int, d: int, s: int, r: int) -> Rat:
    """The exact restricted-cover constant C(n,d)^{r-s} * C(n - s*d/r, n-d)^{-r}.

    Domain: 1 <= d < n and 1 <= s < r.  The restriction s < r keeps the
    upper argument n - s*d/r at least n - d, where the generalized
    binomial is positive; anything else is rejected.
    """
    if not (1 <= d < n):
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    if not (1 <= s < r):
        raise ValueError(f"need 1 <= s < r, got s={s}, r={r}")
    top = binomial_general(n, d) ** (r - s)
    bottom = binomial_general(rat(n) - rat(s * d, r), n - d) ** r
    return top / bottom


@dataclass(frozen=True)
class JohnFrame:
    """Unit vectors u_1..u_m with positive weights c_1..c_m.

    The decomposition-of-identity condition sum c_i u_i (x) u_i = I_n is
    what :func:`john_check` verifies.  Entries may be exact rationals or
    floats; the residual path follows the entry types.
    """

    vectors: tuple[tuple, ...]
    weights: tuple

    def __init__(self, vectors: Sequence[Sequence], weights: Sequence):
        vecs = tuple(tuple(c for c in v) for v in vectors)
        ws = tuple(weights)
        if len(vecs) != len(ws):
            raise ValueError("one weight per vector required")
        if not vecs:
            raise ValueError("frame must contain at least one vector")
        dims = {len(v) for v in vecs}
        if len(dims) != 1:
            raise ValueError("all frame vectors must share a dimension")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "weights", ws)

    @property
    def dim(self) -> int:
        return len(self.vectors[0])

    @property
    def m(self) -> int:
        return len(self.vectors)

    @property
    def is_exact(self) -> bool:
        """True when every entry is an exact rational (no floats)."""
        vals = [w for w in self.weights]
        vals.extend(c for v in self.vectors for c in v)
        return not any(isinstance(v, float) for v in vals)

    @classmethod
    def standard_basis(cls, n: int) -> "JohnFrame":
        vecs = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(vecs, [1] * n)


def john_check(frame: JohnFrame, tol: float = 0.0) -> tuple[bool, float]:
    """Verify John's condition sum c_i u_i (x) u_i = I_n.

    Returns ``(passed, residual)`` where the residual is the Frobenius
    norm of the defect matrix, enlarged to the worst unit-norm defect
    max |<u_i,u_i> - 1| when that is bigger.  On all-rational input the
    defect is accumulated exactly and compared against tol without
    rounding; float entries go through numpy.
    """
    n = frame.dim
    if frame.is_exact:
        defect2 = Rat(0)
        for a in range(n):
            for b in range(a, n):
                entry = sum(
                    (rat(w) * rat(v[a]) * rat(v[b])
                     for w, v in zip(frame.weights, frame.vectors)),
                    Rat(0),
                )
                if a == b:
                    entry -= 1
                contrib = entry * entry
                defect2 += contrib if a == b else 2 * contrib
        unit_dev = max(
            abs(sum((rat(c) * rat(c) for c in v), Rat(0)) - 1)
            for v in frame.vectors
        )
        residual = max(math.sqrt(float(defect2)), float(unit_dev))
        passed = defect2 <= rat_tol_sq(tol) and unit_dev <= rat_from_tol(tol)
        return passed, residual

    import numpy as np

    vs = np.asarray([[float(c) for c in v] for v in frame.vectors], dtype=float)
    ws = np.asarray([float(w) for w in frame.weights], dtype=float)
    acc = (vs[:, :, None] * vs[:, None, :] * ws[:, None, None]).sum(axis=0)
    defect = acc - np.eye(n)
    unit_dev = float(np.max(np.abs((vs * vs).sum(axis=1) - 1.0)))
    residual = max(float(np.linalg.norm(defect)), unit_dev)
    return residual <= tol, residual


def rat_from_tol(tol: float) -> Rat:
    """Exact upper rational stand-in for a float tolerance."""
    if tol == 0:
        return Rat(0)
    from .rational import rat_from_float

    return rat_from_float(float(tol))


def rat_tol_sq(tol: float) -> Rat:
    t = rat_from_tol(tol)
    return t * t


def parse_cover(text: str, s: int | None = None,
                sigma: Iterable[int] | None = None) -> UniformCover:
    """Parse the CLI cover syntax ``"1,2|2,3|1,3"`` into a validated cover.

    Parts are separated by ``|`` and indices by ``,``.  Sigma defaults
    to the union of the parts; the multiplicity s is inferred from the
    first index when not given, then the whole cover is validated.
    """
    parts = []
    for chunk in text.split("|"):
        idx = [int(tok) for tok in chunk.split(",") if tok.strip()]
        if not idx:
            raise ValueError(f"empty part in cover string {text!r}")
        parts.append(idx)
    union = sorted(set(j for p in parts for j in p))
    sig = union if sigma is None else sorted(set(int(j) for j in sigma))
    if s is None:
        first = sig[0]
        s = sum(1 for p in parts if first in set(p))
    cover = UniformCover(parts, s, sigma=sig)
    validate_cover(cover)
    return cover


def format_cover(cover: UniformCover) -> str:
    """Inverse of :func:`parse_cover` on canonical covers."""
    return "|".join(",".join(str(j) for j in p) for p in cover.parts)


def loomis_whitney_cover(n: int) -> UniformCover:
    """The (n-1)-uniform cover of [n] by all coordinate-hyperplane index sets."""
    if n < 2:
        raise ValueError("Loomis-Whitney needs n >= 2")
    sig = list(range(1, n + 1))
    parts = [[j for j in sig if j != i] for i in sig]
    return UniformCover(parts, n - 1, sigma=sig)
