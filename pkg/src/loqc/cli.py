"""Command-line front end.

Every command prints a table (CSV by default, JSON with ``--format json``)
that depends only on its arguments, so reruns are byte-identical unless
``--timestamp`` is given.  The default seed comes from ``LOQC_SEED``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

from . import analysis, montecarlo, resources, verify
from .noise import NoiseParams

SEED_ENV = "LOQC_SEED"
DEFAULT_GRID = (0.3, 0.4, 0.45, 0.5, 0.55, 0.6)


def probability(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {v}")
    return v


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def nonnegative_int(text: str) -> int:
    v = int(text) if text.lstrip("-").isdigit() else None
    if v is None or v < 0:
        raise argparse.ArgumentTypeError(f"must be a non-negative integer, got {text!r}")
    return v


def grid(text: str) -> list[float]:
    return [probability(t) for t in text.split(",") if t.strip()]


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}")


# -- output --------------------------------------------------------------------


def render(command: str, rows: list[dict], fmt: str, timestamp: bool) -> str:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
    if fmt == "json":
        doc = {"command": command, "rows": rows}
        if stamp:
            doc = {"generated": stamp, **doc}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if stamp:
        buf.write(f"# generated {stamp}\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def emit(args, rows: list[dict]) -> None:
    text = render(args.command, rows, args.format, args.timestamp)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)


# -- commands ------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = verify.run_suite()
    rows = [{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    emit(args, rows)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=sys.stderr)
    for name in failed:
        print(f"FAILED: {name}", file=sys.stderr)
    return 1 if failed else 0


def cmd_threshold(args) -> int:
    points = montecarlo.sweep(args.protocol, args.f_grid, args.trials, args.seed, args.workers)
    emit(args, [p.as_row() for p in points])
    bracket = montecarlo.crossing(points)
    where = f"between {bracket[0]} and {bracket[1]}" if bracket else "not bracketed by the grid"
    print(f"analytic threshold {float(analysis.threshold())}; empirical crossing {where}",
          file=sys.stderr)
    return 0


def cmd_concat(args) -> int:
    emit(args, analysis.iterate_levels(args.f0, args.levels).rows())
    return 0


def cmd_resources(args) -> int:
    schedule = analysis.iterate_levels(args.f0, args.levels)
    emit(args, resources.level_table(schedule, args.l, args.printed_constants))
    return 0


def cmd_montecarlo(args) -> int:
    params = NoiseParams(f=args.f, q=args.q, s=args.s)
    stats = montecarlo.run_trials(args.protocol, params, args.trials, args.seed, args.workers)
    row = stats.as_row()
    row["tally"] = ";".join(f"{k}={v}" for k, v in stats.tally.items())
    analytic = montecarlo.PROTOCOLS[args.protocol].analytic
    if analytic is not None:
        cmp = montecarlo.compare(stats, analytic(params))
        row["analytic"] = cmp.analytic
        row["z"] = cmp.z_score
    emit(args, [row])
    return 0


def cmd_erasure(args) -> int:
    b = analysis.erasure_bounds(args.s)
    emit(args, [{
        "s": b.s,
        "recovery_bound": b.recovery_bound,
        "measurement_bound": b.measurement_bound,
        "coupling_bound": b.coupling_bound,
        "threshold": float(b.threshold),
        "below_threshold": b.below_threshold,
        "fixed_point": math.isclose(b.coupling_bound, b.s, rel_tol=1e-3),
    }])
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default: standard output)")
    common.add_argument("--timestamp", action=argparse.BooleanOptionalAction, default=False,
                        help="prefix the output with the generation time")

    sampled = argparse.ArgumentParser(add_help=False)
    sampled.add_argument("--trials", type=positive_int, default=10_000)
    sampled.add_argument("--seed", type=nonnegative_int, default=None,
                         help=f"base seed (default: ${SEED_ENV} or 0)")
    sampled.add_argument("--workers", type=positive_int, default=1)

    parser = argparse.ArgumentParser(prog="loqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the noiseless check suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("threshold", parents=[common, sampled], help="failure-rate sweep over f")
    p.add_argument("--f-grid", type=grid, default=list(DEFAULT_GRID))
    p.add_argument("--protocol", choices=["logical_z90", "logical_zz90", "recovery"],
                   default="logical_z90")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("concat", parents=[common], help="failure parameter per level")
    p.add_argument("--f0", type=probability, default=0.25)
    p.add_argument("--levels", type=nonnegative_int, default=2)
    p.set_defaults(func=cmd_concat)

    p = sub.add_parser("resources", parents=[common], help="composed operation counts")
    p.add_argument("--f0", type=probability, default=0.25)
    p.add_argument("--levels", type=positive_int, default=2)
    p.add_argument("--l", type=positive_int, default=3, help="parity-tree depth")
    p.add_argument("--printed-constants", "--paper-arithmetic", dest="printed_constants",
                   action="store_true", help="use the printed rounded constants")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("montecarlo", parents=[common, sampled], help="sample one protocol")
    p.add_argument("--protocol", choices=sorted(montecarlo.PROTOCOLS), default="logical_z90")
    p.add_argument("--f", type=probability, default=0.25)
    p.add_argument("--q", type=probability, default=0.0)
    p.add_argument("--s", type=probability, default=0.0)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("erasure", parents=[common], help="erasure-code bounds")
    p.add_argument("--s", type=probability, default=0.01)
    p.set_defaults(func=cmd_erasure)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = default_seed()
    try:
        return args.func(args)
    except ValueError as exc:
        parser.error(str(exc))  # exits with status 2


if __name__ == "__main__":
    sys.exit(main())
