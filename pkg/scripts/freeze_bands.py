"""Measure the empirical-constant envelopes behind data/bands.toml.

Run from the repository root:

    python3 scripts/freeze_bands.py

Prints the measured extremes over the standard corpus together with
the suggested band values (10 percent headroom on the dual-cover
constant, absolute margin 0.05 on the duality ratio).  The shipped
bands.toml was frozen from this script's output; rerun it after any
corpus change and update the file by hand so the diff stays reviewed.
"""

import math
import time

from geomineq.bodies import standard_corpus
from geomineq.centroid import duality_ratio, normalize
from geomineq.covers import enumerate_covers
from geomineq.harness import BodyCache, check_dual_cover

DUALITY_SAMPLES = 40_000
DUALITY_SEED = 0


def measure_duality_ratio():
    lo, hi = math.inf, -math.inf
    for body in standard_corpus():
        nb = normalize(body)
        for k in (1, 2):
            if k >= body.ambient_dim:
                continue
            dr = duality_ratio(nb, list(range(1, k + 1)),
                               samples=DUALITY_SAMPLES, seed=DUALITY_SEED)
            if dr.degenerate:
                continue
            lo, hi = min(lo, dr.lo), max(hi, dr.hi)
    return lo, hi


def measure_dual_cover():
    worst: dict[int, float] = {}
    for body in standard_corpus():
        n = body.ambient_dim
        centered = body.translate([-c for c in body.centroid()])
        cache = BodyCache(centered)
        for d in range(1, n):
            for r in range(2, 4):
                for s in range(1, r):
                    for cover in enumerate_covers(range(1, d + 1), s, r):
                        rep = check_dual_cover(centered, cover, cache=cache)
                        if rep.verdict == "degenerate":
                            continue
                        c0 = rep.extra["c0_hat"]
                        worst[n] = max(worst.get(n, 0.0), c0)
    return worst


def main():
    t0 = time.time()
    lo, hi = measure_duality_ratio()
    print(f"duality_ratio over corpus: [{lo:.6f}, {hi:.6f}]  "
          f"({time.time() - t0:.1f}s)")
    print(f"  suggested band: lo = {lo - 0.05:.2f}, hi = {hi + 0.05:.2f}")
    t0 = time.time()
    worst = measure_dual_cover()
    for n in sorted(worst):
        print(f"dual_cover c0_hat max (n={n}): {worst[n]:.6f} -> "
              f"band {worst[n] * 1.10:.3f}")
    print(f"({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
