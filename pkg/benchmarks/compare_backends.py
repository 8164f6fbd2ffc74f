"""Throughput comparison of the compiled and numpy search kernels.

Runs the same seeded searches on both backends and reports local-search
iterations per second plus the speedup.  Trajectories are identical by
construction, so iteration counts only differ through the time budget.

Usage:
    python benchmarks/compare_backends.py [--cutoff 3] [--seed 0]
"""

import argparse
import sys

import e2ls

CASES = [
    ("SUKP", 100, 85, 0.10, dict(beta=0.75)),
    ("SUKP", 500, 485, 0.10, dict(beta=0.75)),
    ("SUKP", 1000, 1000, 0.10, dict(beta=0.75)),
    ("BMCP", 585, 585, 0.10, dict()),          # budget filled in below
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cutoff", type=float, default=3.0,
                    help="seconds per backend per instance")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = e2ls.available_backends()
    if "c" not in backends:
        print("compiled kernel not installed; showing the numpy kernel only",
              file=sys.stderr)

    header = f"{'instance':30} " + "".join(f"{b + ' iters/s':>14}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for kind, m, n, alpha, extra in CASES:
        if kind == "BMCP":
            probe = e2ls.generate_uniform(kind, m, n, alpha, budget=1, seed=7)
            extra = dict(budget=int(probe.total_value * 0.6))
        inst = e2ls.generate_uniform(kind, m, n, alpha, seed=7, **extra)
        name = e2ls.instance_name(inst, alpha)
        rates = {}
        for backend in backends:
            rec = e2ls.solve(inst, e2ls.SearchParams(
                cutoff_seconds=args.cutoff, seed=args.seed, backend=backend))
            rates[backend] = rec.iterations / rec.wall_time_seconds
        line = f"{name:30} " + "".join(f"{rates[b]:14.1f}" for b in backends)
        if len(backends) == 2:
            line += f"{rates['c'] / rates['py']:9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
