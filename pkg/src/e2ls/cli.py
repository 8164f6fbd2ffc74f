"""Command-line front end.

Subcommands: solve, bench, generate, oracle, aggregate, compare.  Output
files default into $E2LS_OUT_DIR (falling back to the working directory).
Exit codes: 0 success, 1 unexpected solver failure, 2 usage, parse, or
validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .instance import (InstanceFormatError, ProblemKind, compute_stats,
                       generate_grouped, generate_uniform, instance_name,
                       load_instance, serialize_instance)
from .oracle import brute_force
from .search import SearchParams, solve

OUT_DIR_ENV = "E2LS_OUT_DIR"


def _out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _kind_arg(value: str) -> ProblemKind:
    try:
        return ProblemKind(value.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"kind must be sukp or bmcp, got {value!r}") from None


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--cutoff", default="10",
                     help="seconds, or a preset: %s" %
                     " ".join(sorted(bench_mod.CUTOFF_PRESETS)))
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--t", type=int, default=None,
                     help="greedy sampling count (default ceil(sqrt(max(m,n))))")
    sub.add_argument("--r-num", type=int, default=None,
                     help="removal candidates (default 2 SUKP, 5 BMCP)")
    sub.add_argument("--a-num", type=int, default=None,
                     help="addition candidates (default 2 SUKP, 5 BMCP)")
    sub.add_argument("--tabu-len", type=int, default=None,
                     help="tabu hash vector length (default 10^8)")


def _params_from(args) -> SearchParams:
    kwargs = dict(
        t=args.t, r_num=args.r_num, a_num=args.a_num,
        cutoff_seconds=bench_mod.parse_cutoff(args.cutoff),
        seed=args.seed)
    if args.tabu_len is not None:
        kwargs["tabu_len"] = args.tabu_len
    return SearchParams(**kwargs)


def _load(path: str, kind: ProblemKind | None):
    return load_instance(path, kind)


# -- subcommands -----------------------------------------------------------------


def cmd_solve(args) -> int:
    inst = _load(args.instance, args.kind)
    rec = solve(inst, _params_from(args))
    print(f"instance {Path(args.instance).name}  kind {rec.kind}  "
          f"m {inst.m}  n {inst.n}  backend {rec.backend}")
    print(f"best value {rec.best_value}")
    print("solution " + " ".join(str(j) for j in rec.best_solution))
    print(f"time to best {rec.time_to_best_seconds:.3f} s  "
          f"wall {rec.wall_time_seconds:.3f} s  "
          f"iterations {rec.iterations}  restarts {rec.restarts}")
    if args.out:
        bench_mod.write_records(
            [bench_mod.record_dict(Path(args.instance).name,
                                   inst.checksum(), rec)],
            args.out, append=True)
    return 0


def _format_aggregate(rows, fmt: str) -> str:
    header = ["instance", "runs", "best", "mean", "sd", "t_best_s", "errors"]
    table = [[r.instance, str(r.runs), str(r.best), f"{r.mean:.2f}",
              f"{r.sd:.2f}", f"{r.mean_time_to_best_s:.3f}", str(r.errors)]
             for r in rows]
    if fmt == "csv":
        return "\n".join(",".join(row) for row in [header] + table)
    widths = [max(len(row[c]) for row in [header] + table)
              for c in range(len(header))]
    lines = []
    for row in [header] + table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def cmd_bench(args) -> int:
    named = []
    for path in args.instances:
        inst = _load(path, args.kind)
        named.append((Path(path).stem, inst))
    records = bench_mod.run_batch(named, _params_from(args),
                                  runs=args.runs, base_seed=args.seed,
                                  workers=args.workers)
    out = Path(args.out) if args.out else _out_dir() / "e2ls_records.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    bench_mod.write_records(records, out)
    failures = sum(1 for r in records if "error" in r)
    if args.format == "records":
        for rec in records:
            print(json.dumps(rec, sort_keys=True))
    else:
        print(_format_aggregate(bench_mod.aggregate(records), args.format))
    print(f"wrote {len(records)} records to {out}", file=sys.stderr)
    if failures:
        print(f"{failures} runs failed (see records)", file=sys.stderr)
    if args.against:
        wins, ties, losses, _ = bench_mod.compare(
            records, bench_mod.read_records(args.against))
        print(f"versus {args.against}: wins {wins}  ties {ties}  "
              f"losses {losses}")
    return 0


def _parse_spec(pairs: list[str]) -> dict[str, str]:
    spec = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"expected key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        spec[key.strip()] = value.strip()
    return spec


_SPEC_KEYS = {"m", "n", "alpha", "beta", "budget", "groups", "rho",
              "vmin", "vmax", "wmin", "wmax"}


def cmd_generate(args) -> int:
    spec = _parse_spec(args.spec)
    unknown = set(spec) - _SPEC_KEYS
    if unknown:
        raise ValueError(f"unknown generator keys: {sorted(unknown)}")
    for req in ("m", "n"):
        if req not in spec:
            raise ValueError(f"generator spec needs {req}=...")
    kind = args.kind
    m, n = int(spec["m"]), int(spec["n"])
    value_range = (int(spec.get("vmin", 1)), int(spec.get("vmax", 100)))
    weight_range = (int(spec.get("wmin", 1)), int(spec.get("wmax", 100)))
    budget_kw: dict = {}
    if kind is ProblemKind.SUKP:
        if "beta" not in spec:
            raise ValueError("SUKP generation needs beta=...")
        budget_kw["beta"] = float(spec["beta"])
    else:
        if "budget" not in spec:
            raise ValueError("BMCP generation needs budget=...")
        budget_kw["budget"] = int(spec["budget"])

    grouped = "groups" in spec or "rho" in spec
    if grouped and not ("groups" in spec and "rho" in spec):
        raise ValueError("grouped generation needs both groups=... and rho=...")
    if not grouped and "alpha" not in spec:
        raise ValueError("uniform generation needs alpha=...")

    out_dir = Path(args.out) if args.out else _out_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for i in range(args.count):
        seed = args.seed + i
        if grouped:
            density = float(spec["rho"])
            inst = generate_grouped(kind, m, n, int(spec["groups"]), density,
                                    value_range=value_range,
                                    weight_range=weight_range, seed=seed,
                                    **budget_kw)
        else:
            density = float(spec["alpha"])
            inst = generate_uniform(kind, m, n, density,
                                    value_range=value_range,
                                    weight_range=weight_range, seed=seed,
                                    **budget_kw)
        name = instance_name(inst, density)
        if args.count > 1:
            name = f"{name}_{i}"
        path = out_dir / f"{name}.txt"
        path.write_text(serialize_instance(inst), encoding="utf-8")
        stats = compute_stats(inst)
        manifest.append({
            "name": name,
            "file": str(path),
            "kind": inst.kind.value,
            "m": inst.m,
            "n": inst.n,
            "capacity": inst.capacity,
            "seed": seed,
            "measured_alpha": round(stats.alpha, 6),
            "beta": None if stats.beta is None else round(stats.beta, 6),
            "total_value": stats.total_value,
            "total_weight": stats.total_weight,
            "checksum": inst.checksum(),
        })
        print(path)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n",
                             encoding="utf-8")
    print(f"manifest {manifest_path}", file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    inst = _load(args.instance, args.kind)
    value, members = brute_force(inst)
    print(f"optimum {value}")
    print("solution " + " ".join(str(j) for j in members))
    return 0


def cmd_aggregate(args) -> int:
    records = bench_mod.read_records(args.records)
    if args.format == "records":
        for rec in records:
            print(json.dumps(rec, sort_keys=True))
    else:
        print(_format_aggregate(bench_mod.aggregate(records), args.format))
    return 0


def cmd_compare(args) -> int:
    wins, ties, losses, detail = bench_mod.compare(
        bench_mod.read_records(args.a), bench_mod.read_records(args.b))
    for name, a, b in detail:
        marker = ">" if a > b else ("=" if a == b else "<")
        print(f"{name}  {a} {marker} {b}")
    print(f"wins {wins}  ties {ties}  losses {losses}")
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="e2ls",
        description="Local-search solver for set-union knapsack and "
                    "budgeted maximum coverage instances")
    subs = parser.add_subparsers(dest="command", required=True)

    p_solve = subs.add_parser("solve", help="run the solver on one instance")
    p_solve.add_argument("instance")
    p_solve.add_argument("--kind", type=_kind_arg, default=None,
                         help="sukp or bmcp; required for legacy dense files")
    p_solve.add_argument("--out", default=None,
                         help="append the run record to this file")
    _add_param_flags(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_bench = subs.add_parser("bench", help="multi-seed batch over instances")
    p_bench.add_argument("instances", nargs="+")
    p_bench.add_argument("--kind", type=_kind_arg, default=None)
    p_bench.add_argument("--runs", type=int, default=10)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--out", default=None,
                         help="records file (default <out dir>/e2ls_records.jsonl)")
    p_bench.add_argument("--format", choices=("table", "csv", "records"),
                         default="table")
    p_bench.add_argument("--against", default=None,
                         help="records file to compare the batch with")
    _add_param_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_gen = subs.add_parser("generate", help="write random benchmark instances")
    p_gen.add_argument("kind", type=_kind_arg)
    p_gen.add_argument("spec", nargs="+",
                       help="key=value pairs: m n alpha beta budget groups "
                            "rho vmin vmax wmin wmax")
    p_gen.add_argument("--count", type=int, default=1)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None, help="output directory")
    p_gen.set_defaults(func=cmd_generate)

    p_oracle = subs.add_parser("oracle",
                               help="exact optimum by subset enumeration (m <= 25)")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--kind", type=_kind_arg, default=None)
    p_oracle.set_defaults(func=cmd_oracle)

    p_agg = subs.add_parser("aggregate", help="summarize a records file")
    p_agg.add_argument("records")
    p_agg.add_argument("--format", choices=("table", "csv", "records"),
                       default="table")
    p_agg.set_defaults(func=cmd_aggregate)

    p_cmp = subs.add_parser("compare",
                            help="wins/ties/losses between two records files")
    p_cmp.add_argument("a")
    p_cmp.add_argument("b")
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:        # pragma: no cover - defensive
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
