"""Command-line front end.

Subcommands: gen, check, suite, search, mixvol, centroid.  Exit codes:
0 success, 1 usage or input error, 2 a check failed against its band,
3 an exact-path or interval-certified violation (which would mean an
engine bug, since the inequalities are theorems).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import centroid as _centroid
from .bodies import generate_body, resolve_body, save_body
from .harness import tightness_search, SEARCH_FAMILIES
from .mixed import mixed_volume
from .rational import rat, rat_str
from .suite import (
    EXIT_USAGE,
    CheckJob,
    RUNNERS,
    SuiteConfig,
    csv_text,
    default_suite,
    exit_code_for,
    json_text,
    load_suite,
    report_to_dict,
    run_job,
    run_suite,
    summarize,
    write_reports,
    SuiteResult,
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_globals(parser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default,
                        help="master seed (default 0)")
    parser.add_argument("--jobs", type=int, default=default,
                        help="parallel workers (default: GEOMINEQ_JOBS or 1)")
    parser.add_argument("--out", default=default, help="output file path")
    parser.add_argument("--format", choices=("csv", "json"), default=default,
                        dest="fmt", help="report format (default json; "
                        "suite and check default csv)")


def _build_parser() -> _Parser:
    # The global flags are declared twice, once on the main parser and
    # once on a parent with SUPPRESS defaults, so they are accepted
    # both before and after the subcommand without the subparser's
    # defaults clobbering values parsed earlier.
    parser = _Parser(prog="geomineq",
                     description="Exact volume-inequality checks for "
                                 "rational polytopes.")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a body and write JSON",
                         parents=[common])
    gen.add_argument("spec", help="body spec, e.g. cube:3 or random-hull:3,20")

    check = sub.add_parser("check", help="run one check", parents=[common])
    check.add_argument("check_id", choices=sorted(RUNNERS),
                       metavar="check_id",
                       help="one of: " + ", ".join(sorted(RUNNERS)))
    check.add_argument("--body", action="append", default=[],
                       dest="bodies", metavar="BODY",
                       help="body spec or .json path (repeatable)")
    check.add_argument("--bodies", nargs="+", default=[],
                       dest="bodies_list", metavar="BODY",
                       help="several bodies at once")
    check.add_argument("--cover", default=None,
                       help="cover string like '1,2|2,3|1,3'")
    check.add_argument("--u", default=None, help="direction, comma separated")
    check.add_argument("--v", default=None, help="direction, comma separated")
    check.add_argument("--p", type=float, default=None)
    check.add_argument("--q", type=float, default=None)
    check.add_argument("--m", type=int, default=None,
                       help="domain dimension for berwald")
    check.add_argument("--samples", type=int, default=None)
    check.add_argument("--quality", type=int, default=None,
                       help="ball approximation quality")
    check.add_argument("--tau", default=None,
                       help="coordinate subspace, comma separated")

    suite = sub.add_parser("suite", help="run a suite of checks",
                           parents=[common])
    suite.add_argument("config", nargs="?", default=None,
                       help="TOML suite file (omit for the default suite)")
    suite.add_argument("--timings", action="store_true",
                       help="write real ms to CSV (breaks byte determinism)")

    search = sub.add_parser("search", help="tightness search for a check",
                            parents=[common])
    search.add_argument("check_id", help="searchable check id")
    search.add_argument("--family", required=True, choices=SEARCH_FAMILIES)
    search.add_argument("--iters", type=int, default=64)
    search.add_argument("--n", type=int, default=3, dest="dim")
    search.add_argument("--points", type=int, default=None)
    search.add_argument("--cover", default=None)
    search.add_argument("--u", default=None)
    search.add_argument("--v", default=None)

    mixvol = sub.add_parser("mixvol", help="exact mixed volume",
                            parents=[common])
    mixvol.add_argument("--bodies", nargs="+", required=True, metavar="BODY")
    mixvol.add_argument("--mults", default=None,
                        help="multiplicities, comma separated")

    cen = sub.add_parser("centroid", help="centroid-body support estimates",
                         parents=[common])
    cen.add_argument("--body", required=True)
    cen.add_argument("--p", type=float, default=2.0)
    cen.add_argument("--subspace", default=None,
                     help="coordinate indices, e.g. 1,2 (default all)")
    cen.add_argument("--samples", type=int, default=100_000)
    cen.add_argument("--dirs", type=int, default=16,
                     help="extra low-discrepancy directions")
    return parser


def _parse_vec(text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if "/" in tok:
            num, den = tok.split("/")
            out.append(rat(int(num), int(den)))
        else:
            out.append(float(tok) if ("." in tok or "e" in tok) else int(tok))
    return out


def _parse_indices(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        from pathlib import Path

        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_gen(args) -> int:
    body = generate_body(args.spec, seed=args.seed)
    if args.out:
        save_body(body, args.out)
    else:
        sys.stdout.write(json.dumps(body.to_dict(), indent=2) + "\n")
    return 0


def _cmd_check(args) -> int:
    bodies = tuple(args.bodies) + tuple(args.bodies_list)
    params = {}
    for key in ("u", "v", "tau"):
        value = getattr(args, key)
        if value is not None:
            params[key] = (_parse_indices(value) if key == "tau"
                           else _parse_vec(value))
    for key in ("p", "q", "samples", "quality", "m"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    job = CheckJob(check=args.check_id, bodies=bodies, cover=args.cover,
                   params=params)
    reports = run_job(job, args.seed, 0)
    result = SuiteResult(reports=tuple(reports), summary=summarize(reports),
                         exit_code=exit_code_for(reports))
    fmt = args.fmt or "csv"
    text = write_reports(result, args.out, fmt, args.seed)
    if not args.out:
        sys.stdout.write(text)
    return result.exit_code


def _cmd_suite(args) -> int:
    if args.config:
        config = load_suite(args.config)
    else:
        config = default_suite(seed=args.seed)
    if args.seed_given or args.timings:
        config = SuiteConfig(
            jobs=config.jobs,
            seed=args.seed if args.seed_given else config.seed,
            parallelism=config.parallelism,
            timings=config.timings or args.timings)
    result = run_suite(config, jobs_override=args.jobs)
    fmt = args.fmt or "csv"
    text = write_reports(result, args.out, fmt, config.seed,
                         timings=config.timings or args.timings)
    if args.out:
        summary = " ".join(f"{k}={v}" for k, v in sorted(result.summary.items()))
        sys.stdout.write(f"{summary} -> {args.out}\n")
    else:
        sys.stdout.write(text)
    return result.exit_code


def _cmd_search(args) -> int:
    kwargs = {"n": args.dim}
    if args.points is not None:
        kwargs["points"] = args.points
    if args.cover is not None:
        kwargs["cover"] = args.cover
    if args.u is not None:
        kwargs["u"] = _parse_vec(args.u)
    if args.v is not None:
        kwargs["v"] = _parse_vec(args.v)
    result = tightness_search(args.check_id, args.family, iters=args.iters,
                              seed=args.seed, **kwargs)
    if (args.fmt or "json") == "csv":
        _emit(csv_text([result.best]), args.out)
    else:
        doc = {
            "check": result.check,
            "family": result.family,
            "best": report_to_dict(result.best),
            "witness": result.witness.to_dict(),
            "trajectory": list(result.trajectory),
        }
        _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_mixvol(args) -> int:
    bodies = [resolve_body(spec, seed=args.seed) for spec in args.bodies]
    mults = _parse_indices(args.mults) if args.mults else None
    value = mixed_volume(bodies, mults)
    doc = {
        "bodies": [b.name or f"body{i}" for i, b in enumerate(bodies)],
        "multiplicities": mults or [1] * len(bodies),
        "value": rat_str(rat(value)),
        "value_float": float(value),
    }
    if (args.fmt or "json") == "csv":
        _emit("value,value_float\n" + f"{doc['value']},{doc['value_float']!r}",
              args.out)
    else:
        _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_centroid(args) -> int:
    body = resolve_body(args.body, seed=args.seed)
    nb = _centroid.normalize(body)
    tau = _parse_indices(args.subspace) if args.subspace else \
        list(range(1, body.ambient_dim + 1))
    k = len(tau)
    proj = None
    if k < nb.n:
        proj = _centroid.zp_projection(nb, args.p, tau,
                                       extra_directions=args.dirs,
                                       samples=args.samples, seed=args.seed)
        dirs_k = proj.directions
    else:
        dirs_k = _centroid.make_directions(k, args.dirs, args.seed)
    rows = []
    for i, y in enumerate(dirs_k):
        ambient = np.zeros(nb.n)
        for pos, j in enumerate(tau):
            ambient[j - 1] = y[pos]
        est = _centroid.support_Zp(nb, args.p, ambient,
                                   samples=args.samples, seed=args.seed,
                                   direction_index=i)
        rows.append({"direction": [float(c) for c in y],
                     "value": est.value, "stderr": est.stderr})
    doc = {
        "body": body.name or "body",
        "p": args.p,
        "subspace": tau,
        "samples": args.samples,
        "seed": args.seed,
        "directions": rows,
    }
    if proj is not None:
        doc["volume_interval"] = [proj.volume_lo, proj.volume_hi]
    if (args.fmt or "json") == "csv":
        lines = ["direction,value,stderr"]
        for row in rows:
            d = " ".join(f"{c!r}" for c in row["direction"])
            lines.append(f"{d},{row['value']!r},{row['stderr']!r}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(json.dumps(doc, indent=2), args.out)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "check": _cmd_check,
    "suite": _cmd_suite,
    "search": _cmd_search,
    "mixvol": _cmd_mixvol,
    "centroid": _cmd_centroid,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"geomineq: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
