"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from typing import Sequence

from . import rng as rng_mod
from .bijections import (
    DyckPath,
    LabeledDyckPath,
    Triangulation,
    dyck_to_ipf,
    dyck_to_triangulation,
    ipf_to_dyck,
    labeled_dyck_to_pf,
    pf_to_labeled_dyck,
    triangulation_to_dyck,
)
from .burnside import kernel, lumped_kernel, run_replicas
from .combinatorics import catalan, check_parking_function, format_rational, format_word, parse_word
from .diagnostics import EXACT_FULL_CAP, metadata, mixing_time_bound, noise_budget, tv_curve
from .errors import InvalidInputError, ResourceLimitError
from .verify import SUITES, run_suite

KINDS = ("pf", "ipf", "dyck", "labeled-dyck", "triangulation")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def serialize(kind: str, x: Sequence[int]) -> str:
    x = tuple(int(v) for v in x)
    if kind == "pf":
        return format_word(x)
    if kind == "labeled-dyck":
        return str(pf_to_labeled_dyck(x))
    u = tuple(sorted(x))
    if kind == "ipf":
        return format_word(u)
    if kind == "dyck":
        return str(ipf_to_dyck(u))
    return str(dyck_to_triangulation(ipf_to_dyck(u)))


def orbit_key(kind: str, text: str, n: int) -> tuple[int, ...]:
    """Increasing parking function of the orbit a serialized sample belongs to."""
    text = text.strip()
    if kind in ("pf", "ipf"):
        return tuple(sorted(check_parking_function(parse_word(text))))
    if kind == "dyck":
        return dyck_to_ipf(DyckPath(text))
    if kind == "labeled-dyck":
        return tuple(sorted(labeled_dyck_to_pf(LabeledDyckPath.parse(text))))
    return dyck_to_ipf(triangulation_to_dyck(Triangulation.parse(text, n)))


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta_line(meta: dict) -> None:
    sys.stderr.write("# " + json.dumps(meta, sort_keys=True) + "\n")


def cmd_sample(args: argparse.Namespace) -> int:
    n = args.n
    steps = mixing_time_bound(n, 0.01) if args.steps is None else args.steps
    seed = rng_mod.fresh_seed() if args.seed is None else args.seed
    start = tuple(range(1, n + 1)) if args.start is None else check_parking_function(parse_word(args.start))
    if len(start) != n:
        raise InvalidInputError(f"--start has length {len(start)}, expected {n}")
    if steps < 0 or args.replicas < 1:
        raise InvalidInputError("--steps must be >= 0 and --replicas >= 1")
    finals = run_replicas(start, steps, args.replicas, seed, jobs=args.jobs)
    cache: dict[tuple, str] = {}
    samples = []
    for row in finals:
        key = tuple(int(v) for v in row)
        s = cache.get(key)
        if s is None:
            s = cache[key] = serialize(args.kind, key)
        samples.append(s)
    meta = metadata(
        command="sample", kind=args.kind, n=n, t=steps, replicas=args.replicas, seed=seed, start_state=start
    )
    if args.format == "json":
        _emit(json.dumps({"metadata": meta, "samples": samples}, sort_keys=True) + "\n", args.out)
    else:
        _meta_line(meta)
        _emit("".join(s + "\n" for s in samples), args.out)
    return EXIT_OK


def cmd_tv_curve(args: argparse.Namespace) -> int:
    n = args.n
    if n > EXACT_FULL_CAP:
        raise ResourceLimitError(f"tv-curve needs n <= {EXACT_FULL_CAP}")
    t_max = mixing_time_bound(n, 0.01) if args.t_max is None else args.t_max
    curve = tv_curve(n, t_max)
    meta = metadata(command="tv-curve", n=n, t=t_max, start_state="worst")
    if args.format == "json":
        rows = [
            {"t": t, "tv": float(tv), "tv_exact": format_rational(tv), "bound": b} for t, tv, b in curve.rows
        ]
        _emit(json.dumps({"metadata": meta, "rows": rows}, sort_keys=True) + "\n", args.out)
    else:
        _meta_line(meta)
        _emit(curve.to_csv(), args.out)
    return EXIT_FAIL if curve.violations() else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suite(args.suite, args.n_max)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_kernel(args: argparse.Namespace) -> int:
    x, y = parse_word(args.x), parse_word(args.y)
    value = lumped_kernel(x, y) if args.lumped else kernel(x, y)
    print(format_rational(value))
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    stream = open(args.input) if args.input else sys.stdin
    with stream:
        text = stream.read()
    if text.lstrip().startswith("{"):
        lines = json.loads(text)["samples"]
    else:
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise InvalidInputError("no samples to analyze")
    counts = Counter(orbit_key(args.kind, ln, args.n) for ln in lines)
    total = len(lines)
    orbits = catalan(args.n)
    tv = 0.5 * (sum(abs(c / total - 1 / orbits) for c in counts.values()) + (orbits - len(counts)) / orbits)
    report = {
        "samples": total,
        "distinct": len(counts),
        "orbits": orbits,
        "tv_to_uniform": tv,
        "noise_budget": noise_budget(orbits, total),
    }
    print(json.dumps(report, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catalan-burnside",
        description="Burnside-process sampling of parking functions, Dyck paths and triangulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="run the chain and emit one sample per replica")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, default=None, help="default: mixing-time bound at eps=0.01")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--start", default=None, help="start state, e.g. 1,1,2 (default 1,2,...,n)")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("tv-curve", help="exact worst-case distance and the proven bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t-max", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tv_curve)

    p = sub.add_parser("verify", help="run exhaustive identity checks")
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.add_argument("--n-max", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernel", help="print an exact transition probability")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--lumped", action="store_true", help="orbit kernel between increasing parking functions")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("analyze", help="orbit statistics of samples read from stdin")
    p.add_argument("--kind", choices=KINDS, default="triangulation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", default=None)
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be >= 1")
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
