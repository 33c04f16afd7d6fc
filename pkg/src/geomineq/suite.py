"""Check suites: configuration, parallel execution, and report files.

A suite is a list of independent jobs, each naming a check, its
bodies (generator specs or JSON paths), and parameters.  Jobs run in
any order across workers; reports merge deterministically by job
index, and per-job seeds derive from (master seed, job index), so a
(config, seed) pair fixes every byte of the CSV output regardless of
parallelism.  The ms column is written as 0 unless timings are
explicitly enabled, because wall-clock times would break that
byte-level determinism; the JSON report always carries real timings.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import centroid as _centroid
from .bodies import SHAPES, resolve_body
from .covers import JohnFrame, UniformCover, loomis_whitney_cover, parse_cover
from .harness import (
    DEGENERATE,
    FAIL,
    INCONCLUSIVE,
    PASS,
    InequalityReport,
    Quantity,
    check_af_triple,
    check_berwald,
    check_bt_cover,
    check_dual_cover,
    check_hug_schneider_r2,
    check_john_frame,
    check_meyer,
    check_nonorthogonal_pair,
    check_restricted_cover,
    check_surface_ratio,
    check_sz,
    duality_ratio_band,
)
from .mixed import MixedVolumeEngine
from .plconcave import random_concave
from .rational import Rat, rat_str

JOBS_ENV = "GEOMINEQ_JOBS"

CSV_COLUMNS = ("check", "body", "params", "path", "lhs", "rhs", "ratio",
               "slack", "verdict", "ms", "lhs_exact", "rhs_exact",
               "ratio_exact", "slack_exact")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAIL = 2
EXIT_EXACT_ANOMALY = 3


@dataclass(frozen=True)
class CheckJob:
    """One suite entry: a check id, its bodies, and parameters."""

    check: str
    bodies: tuple[str, ...] = ()
    cover: str | None = None
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SuiteConfig:
    """A validated suite: jobs plus seed, parallelism, and output policy."""

    jobs: tuple[CheckJob, ...]
    seed: int = 0
    parallelism: int = 0
    timings: bool = False


@dataclass(frozen=True)
class SuiteResult:
    reports: tuple[InequalityReport, ...]
    summary: dict
    exit_code: int


def job_seed(master: int, index: int) -> int:
    """Per-job seed stream keyed by (master seed, job index)."""
    return int(master) * 1_000_003 + int(index)


# -- job runners -----------------------------------------------------------------


def _need_bodies(job: CheckJob, count: int, seed: int) -> list:
    if len(job.bodies) < count:
        raise ValueError(
            f"check {job.check!r} needs {count} bodies, got {len(job.bodies)}"
        )
    return [resolve_body(spec, seed=seed) for spec in job.bodies]


def _job_cover(job: CheckJob, n: int):
    if job.cover is not None:
        return parse_cover(job.cover)
    if job.check == "bt_cover":
        return loomis_whitney_cover(n)
    return UniformCover([(1,), (2,)], 1)


def _run_bt(job: CheckJob, seed: int) -> list[InequalityReport]:
    (body,) = _need_bodies(job, 1, seed)
    return [check_bt_cover(body, _job_cover(job, body.ambient_dim))]


def _run_restricted(job: CheckJob, seed: int) -> list[InequalityReport]:
    (body,) = _need_bodies(job, 1, seed)
    return [check_restricted_cover(body, _job_cover(job, body.ambient_dim))]


def _run_meyer(job: CheckJob, seed: int) -> list[InequalityReport]:
    (body,) = _need_bodies(job, 1, seed)
    return [check_meyer(body)]


def _run_john(job: CheckJob, seed: int) -> list[InequalityReport]:
    (body,) = _need_bodies(job, 1, seed)
    vectors = job.params.get("vectors")
    weights = job.params.get("weights")
    if vectors is None:
        frame = JohnFrame.standard_basis(body.ambient_dim)
    else:
        frame = JohnFrame(vectors, weights)
    return list(check_john_frame(body, frame))


def _run_dual(job: CheckJob, seed: int) -> list[InequalityReport]:
    (body,) = _need_bodies(job, 1, seed)
    return [check_dual_cover(body, _job_cover(job, body.ambient_dim))]


def _run_surface(job: CheckJob, seed: int) -> list[InequalityReport]:
    (body,) = _need_bodies(job, 1, seed)
    u = job.params.get("u") or [0.0] * (body.ambient_dim - 1) + [1.0]
    return [check_surface_ratio(body, u)]


def _run_af(job: CheckJob, seed: int) -> list[InequalityReport]:
    bodies = _need_bodies(job, 3, seed)
    a, b, c = bodies[:3]
    context = bodies[3:]
    if len(context) != a.ambient_dim - 2:
        context = [a] * (a.ambient_dim - 2)
    return [check_af_triple(a, b, c, context=context)]


def _run_nonorth(job: CheckJob, seed: int) -> list[InequalityReport]:
    (body,) = _need_bodies(job, 1, seed)
    n = body.ambient_dim
    u = job.params.get("u") or [1] + [0] * (n - 1)
    v = job.params.get("v") or [0, 1] + [0] * (n - 2)
    return [check_nonorthogonal_pair(body, u, v)]


def _run_sz(job: CheckJob, seed: int) -> list[InequalityReport]:
    bodies = _need_bodies(job, 3, seed)
    return [check_sz(bodies[0], bodies[1:])]


def _run_hs(job: CheckJob, seed: int) -> list[InequalityReport]:
    bodies = _need_bodies(job, 2, seed)
    quality = job.params.get("quality")
    return [check_hug_schneider_r2(bodies[0], bodies[1],
                                   q=int(quality) if quality else None)]


def _run_berwald(job: CheckJob, seed: int) -> list[InequalityReport]:
    m = int(job.params.get("m", 2))
    p = job.params.get("p", 1)
    q = job.params.get("q", 2)
    samples = int(job.params.get("samples", 200_000))
    phi = random_concave(m, seed=seed)
    return [check_berwald(phi, p, q, samples=samples, seed=seed)]


def _run_duality_ratio(job: CheckJob, seed: int) -> list[InequalityReport]:
    import time

    t0 = time.perf_counter()
    (body,) = _need_bodies(job, 1, seed)
    tau = job.params.get("tau") or [1]
    samples = int(job.params.get("samples", 50_000))
    nb = _centroid.normalize(body)
    dr = _centroid.duality_ratio(nb, tau, samples=samples, seed=seed)
    lo_band, hi_band = duality_ratio_band()
    params = {"tau": ",".join(str(t) for t in tau), "samples": samples,
              "band": f"{lo_band:g}..{hi_band:g}"}
    label = body.name or "body"
    if dr.degenerate:
        zero = Quantity.from_float(0.0)
        return [InequalityReport(
            check="duality_ratio", body=label,
            params={k: str(v) for k, v in params.items()},
            relation="<=", lhs=zero, rhs=zero, verdict=DEGENERATE,
            path="band", ratio=None, ratio_exact=None, slack=None,
            slack_exact=None, elapsed=time.perf_counter() - t0,
            notes=("degenerate section",))]
    inside = lo_band <= dr.lo and dr.hi <= hi_band
    lhs = Quantity(lo=dr.lo, hi=dr.hi)
    rhs = Quantity.from_float(hi_band)
    return [InequalityReport(
        check="duality_ratio", body=label,
        params={k: str(v) for k, v in params.items()},
        relation="<=", lhs=lhs, rhs=rhs,
        verdict=PASS if inside else FAIL, path="band",
        ratio=lhs.mid / hi_band, ratio_exact=None,
        slack=hi_band - lhs.hi, slack_exact=None,
        elapsed=time.perf_counter() - t0,
        extra={"lo": dr.lo, "hi": dr.hi, "band_lo": lo_band,
               "band_hi": hi_band})]


RUNNERS = {
    "bt_cover": _run_bt,
    "restricted_cover": _run_restricted,
    "meyer": _run_meyer,
    "john_frame": _run_john,
    "dual_cover": _run_dual,
    "surface_ratio": _run_surface,
    "af_triple": _run_af,
    "nonorthogonal_pair": _run_nonorth,
    "sz": _run_sz,
    "hug_schneider_r2": _run_hs,
    "berwald": _run_berwald,
    "duality_ratio": _run_duality_ratio,
}


# -- config loading and validation -----------------------------------------------


def validate_job(job: CheckJob) -> None:
    """Reject unknown checks, malformed covers, and bad body specs
    before any job runs."""
    if job.check not in RUNNERS:
        raise ValueError(f"unknown check {job.check!r}; known: "
                         f"{', '.join(sorted(RUNNERS))}")
    if job.cover is not None:
        parse_cover(job.cover)
    for spec in job.bodies:
        if spec.endswith(".json"):
            continue
        head = spec.split(":", 1)[0]
        if head not in SHAPES:
            raise ValueError(f"unknown body shape {head!r} in {spec!r}")


def validate_config(config: SuiteConfig) -> None:
    for job in config.jobs:
        validate_job(job)


def load_suite(path) -> SuiteConfig:
    """Read a TOML suite file.

    Top-level keys: seed (int), jobs (parallelism), timings (bool).
    Each [[job]] table needs check, plus body/bodies, cover, and any
    per-check params.
    """
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib

    data = tomllib.loads(Path(path).read_text())
    jobs = []
    for entry in data.get("job", []):
        entry = dict(entry)
        check = entry.pop("check", None)
        if check is None:
            raise ValueError("every [[job]] needs a check id")
        bodies = entry.pop("bodies", None)
        body = entry.pop("body", None)
        if bodies is None:
            bodies = [body] if body is not None else []
        cover = entry.pop("cover", None)
        jobs.append(CheckJob(check=str(check),
                             bodies=tuple(str(b) for b in bodies),
                             cover=cover, params=entry))
    config = SuiteConfig(jobs=tuple(jobs), seed=int(data.get("seed", 0)),
                         parallelism=int(data.get("jobs", 0)),
                         timings=bool(data.get("timings", False)))
    validate_config(config)
    return config


def default_suite(seed: int = 0) -> SuiteConfig:
    """The shipped default suite: one representative job per check."""
    jobs = [
        CheckJob("bt_cover", ("cube:3",)),
        CheckJob("bt_cover", ("cube:3",), cover="1,2|1,3|2,3"),
        CheckJob("bt_cover", ("simplex:3",)),
        CheckJob("bt_cover", ("random-hull:3,12",)),
        CheckJob("bt_cover", ("zonotope:3,6",)),
        CheckJob("restricted_cover", ("cube:3",), cover="1|2"),
        CheckJob("restricted_cover", ("cross:3",), cover="1|2"),
        CheckJob("restricted_cover", ("random-hull:4,12",), cover="1,2|2,3|1,3"),
        CheckJob("meyer", ("cross:3",)),
        CheckJob("meyer", ("diag:1,2,3:cross:3",)),
        CheckJob("meyer", ("cube:3",)),
        CheckJob("meyer", ("random-hull:3,10",)),
        CheckJob("john_frame", ("cube:3",)),
        CheckJob("dual_cover", ("cross:3",), cover="1|2"),
        CheckJob("dual_cover", ("cube:3",), cover="1|2"),
        CheckJob("dual_cover", ("random-hull:3,10",), cover="1|2"),
        CheckJob("surface_ratio", ("cube:3",)),
        CheckJob("surface_ratio", ("cross:3",)),
        CheckJob("surface_ratio", ("random-hull:3,12",)),
        CheckJob("af_triple", ("cube:3", "simplex:3", "cross:3")),
        CheckJob("af_triple", ("random-hull:3,8", "random-hull:3,9",
                               "random-hull:3,10")),
        CheckJob("nonorthogonal_pair", ("cube:3",)),
        CheckJob("nonorthogonal_pair", ("random-hull:3,10",),
                 params={"u": [1.0, 1.0, 0.0], "v": [0.0, 1.0, 1.0]}),
        CheckJob("sz", ("cube:2", "box:1/2,2", "box:3,1/3")),
        CheckJob("sz", ("cube:3", "random-hull:3,8", "cross:3")),
        CheckJob("hug_schneider_r2", ("cube:3", "cross:3"),
                 params={"quality": 4}),
        CheckJob("berwald", (), params={"m": 2, "p": 1, "q": 2}),
        CheckJob("duality_ratio", ("cube:2",), params={"samples": 30000}),
        CheckJob("duality_ratio", ("cross:2",), params={"samples": 30000}),
    ]
    return SuiteConfig(jobs=tuple(jobs), seed=seed)


# -- execution --------------------------------------------------------------------


def run_job(job: CheckJob, master_seed: int, index: int,
            ) -> list[InequalityReport]:
    return RUNNERS[job.check](job, job_seed(master_seed, index))


def _worker(args):
    index, job, master_seed = args
    return index, run_job(job, master_seed, index)


def parallelism_from(config: SuiteConfig, override: int | None = None) -> int:
    if override is not None and override > 0:
        return override
    if config.parallelism > 0:
        return config.parallelism
    env = os.environ.get(JOBS_ENV, "")
    if env.strip().isdigit() and int(env) > 0:
        return int(env)
    return 1


def run_suite(config: SuiteConfig, jobs_override: int | None = None,
              ) -> SuiteResult:
    """Run all jobs, merge reports by job index, and summarize."""
    validate_config(config)
    workers = parallelism_from(config, jobs_override)
    tasks = [(i, job, config.seed) for i, job in enumerate(config.jobs)]
    if workers <= 1 or len(tasks) <= 1:
        indexed = [_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            indexed = list(pool.map(_worker, tasks))
    indexed.sort(key=lambda pair: pair[0])
    reports = tuple(rep for _, batch in indexed for rep in batch)
    summary = summarize(reports)
    return SuiteResult(reports=reports, summary=summary,
                       exit_code=exit_code_for(reports))


def summarize(reports: Sequence[InequalityReport]) -> dict:
    counts = {PASS: 0, FAIL: 0, DEGENERATE: 0, INCONCLUSIVE: 0}
    for rep in reports:
        counts[rep.verdict] = counts.get(rep.verdict, 0) + 1
    counts["total"] = len(reports)
    return counts


def exit_code_for(reports: Sequence[InequalityReport]) -> int:
    """0 ok; 2 on a band/check failure; 3 on an exact or interval
    failure, which can only mean an engine bug (the inequalities are
    theorems)."""
    code = EXIT_OK
    for rep in reports:
        if rep.verdict != FAIL:
            continue
        if rep.path in ("exact", "interval"):
            return EXIT_EXACT_ANOMALY
        code = EXIT_CHECK_FAIL
    return code


# -- serialization ----------------------------------------------------------------


def _fmt_float(x: float | None) -> str:
    if x is None:
        return ""
    if math.isnan(x):
        return "nan"
    return repr(float(x))


def _fmt_exact(x: Rat | None) -> str:
    return rat_str(x) if x is not None else ""


def _params_text(params: dict) -> str:
    return ";".join(f"{k}={params[k]}" for k in sorted(params))


def csv_text(reports: Sequence[InequalityReport], timings: bool = False) -> str:
    """Render reports as CSV, byte-deterministic unless timings=True."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        ms = f"{rep.elapsed * 1000:.3f}" if timings else "0"
        writer.writerow([
            rep.check, rep.body, _params_text(rep.params), rep.path,
            _fmt_float(rep.lhs.mid), _fmt_float(rep.rhs.mid),
            _fmt_float(rep.ratio), _fmt_float(rep.slack), rep.verdict, ms,
            _fmt_exact(rep.lhs.exact), _fmt_exact(rep.rhs.exact),
            _fmt_exact(rep.ratio_exact), _fmt_exact(rep.slack_exact),
        ])
    return buf.getvalue()


def _quantity_dict(q: Quantity) -> dict:
    return {
        "lo": q.lo,
        "hi": q.hi,
        "exact": _fmt_exact(q.exact) or None,
        "interval": [rat_str(q.interval[0]), rat_str(q.interval[1])]
        if q.interval else None,
    }


def _json_safe(value):
    if isinstance(value, Rat):
        return rat_str(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def report_to_dict(rep: InequalityReport) -> dict:
    return {
        "check": rep.check,
        "body": rep.body,
        "params": rep.params,
        "relation": rep.relation,
        "lhs": _quantity_dict(rep.lhs),
        "rhs": _quantity_dict(rep.rhs),
        "verdict": rep.verdict,
        "path": rep.path,
        "ratio": rep.ratio,
        "ratio_exact": _fmt_exact(rep.ratio_exact) or None,
        "slack": rep.slack,
        "slack_exact": _fmt_exact(rep.slack_exact) or None,
        "ms": rep.elapsed * 1000,
        "notes": list(rep.notes),
        "extra": _json_safe(rep.extra),
    }


def json_text(result: SuiteResult, seed: int) -> str:
    doc = {
        "seed": seed,
        "summary": result.summary,
        "exit_code": result.exit_code,
        "reports": [report_to_dict(r) for r in result.reports],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_reports(result: SuiteResult, out: str | None, fmt: str,
                  seed: int, timings: bool = False) -> str:
    """Serialize to the requested format, writing to ``out`` if given;
    returns the rendered text."""
    if fmt == "csv":
        text = csv_text(result.reports, timings=timings)
    elif fmt == "json":
        text = json_text(result, seed)
    else:
        raise ValueError(f"unknown format {fmt!r} (use csv or json)")
    if out:
        Path(out).write_text(text)
    return text
