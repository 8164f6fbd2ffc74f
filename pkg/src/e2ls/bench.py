"""Multi-seed experiment harness.

Runs solver batches over instance sets, persists one JSON record per run
(line-delimited), and aggregates per-instance statistics.  Workers receive
serialized instance text, so results are independent of how the batch is
scheduled; records are sorted by (instance, seed) before they are returned
or written.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .instance import Instance, parse_instance, serialize_instance
from .search import RunRecord, SearchParams, solve
from .state import SolutionState

# wall-clock budgets (seconds) used by the instance families these sets
# are drawn from; all overridable
CUTOFF_PRESETS = {
    "set-I": 500.0,
    "set-II": 1000.0,
    "set-III": 1000.0,
    "set-A": 600.0,
    "set-B": 1800.0,
    "set-C": 1800.0,
}


def parse_cutoff(text: str) -> float:
    if text in CUTOFF_PRESETS:
        return CUTOFF_PRESETS[text]
    try:
        value = float(text)
    except ValueError:
        raise ValueError(
            f"cutoff must be seconds or one of {sorted(CUTOFF_PRESETS)}, "
            f"got {text!r}") from None
    if value <= 0:
        raise ValueError(f"cutoff must be positive, got {text!r}")
    return value


def record_dict(name: str, checksum: str, rr: RunRecord) -> dict:
    return {
        "instance": name,
        "checksum": checksum,
        "kind": rr.kind,
        "seed": rr.seed,
        "params": rr.params,
        "best_value": rr.best_value,
        "best_solution": rr.best_solution,
        "time_to_best_s": rr.time_to_best_seconds,
        "wall_time_s": rr.wall_time_seconds,
        "iterations": rr.iterations,
        "restarts": rr.restarts,
        "adds_explored": rr.adds_explored,
        "backend": rr.backend,
    }


def _run_task(task: tuple) -> dict:
    name, text, checksum, params_dict, seed = task
    try:
        inst = parse_instance(text)
        params = SearchParams(**{**params_dict, "seed": seed})
        return record_dict(name, checksum, solve(inst, params))
    except Exception as exc:       # worker failures become records, not aborts
        return {"instance": name, "checksum": checksum, "seed": seed,
                "error": f"{type(exc).__name__}: {exc}"}


def run_batch(named_instances: list[tuple[str, Instance]],
              params: SearchParams, runs: int = 10, base_seed: int = 0,
              workers: int = 1) -> list[dict]:
    """runs × instances solver executions with seeds base_seed + run index.

    Scheduling never affects record content (wall-clock fields aside), so
    any worker count may be used.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    params_dict = dataclasses.asdict(params)
    tasks = []
    for name, inst in named_instances:
        text = serialize_instance(inst)
        checksum = inst.checksum()
        for r in range(runs):
            tasks.append((name, text, checksum, params_dict, base_seed + r))
    if workers == 1:
        records = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_task, tasks))
    records.sort(key=lambda rec: (rec["instance"], rec["seed"]))
    return records


def write_records(records: list[dict], path, append: bool = False) -> None:
    with open(path, "a" if append else "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_records(path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


@dataclass(frozen=True)
class AggregateRow:
    """Per-instance summary over a batch of runs."""

    instance: str
    runs: int
    best: int
    mean: float
    sd: float           # population SD over the per-run best values
    mean_time_to_best_s: float
    errors: int


def aggregate(records: list[dict]) -> list[AggregateRow]:
    by_name: dict[str, list[dict]] = {}
    for rec in records:
        by_name.setdefault(rec["instance"], []).append(rec)
    rows = []
    for name in sorted(by_name):
        recs = by_name[name]
        good = [r for r in recs if "error" not in r]
        errors = len(recs) - len(good)
        if not good:
            rows.append(AggregateRow(name, 0, 0, 0.0, 0.0, 0.0, errors))
            continue
        values = [r["best_value"] for r in good]
        mean = sum(values) / len(values)
        sd = math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))
        t_best = sum(r["time_to_best_s"] for r in good) / len(good)
        rows.append(AggregateRow(name, len(good), max(values), mean, sd,
                                 t_best, errors))
    return rows


def compare(records_a: list[dict], records_b: list[dict]
            ) -> tuple[int, int, int, list[tuple[str, int, int]]]:
    """Instance-level wins/ties/losses of batch A versus batch B on the
    best-of-runs value.  Only instances present in both batches count.
    """
    best_a = {row.instance: row.best for row in aggregate(records_a) if row.runs}
    best_b = {row.instance: row.best for row in aggregate(records_b) if row.runs}
    wins = ties = losses = 0
    detail = []
    for name in sorted(set(best_a) & set(best_b)):
        a, b = best_a[name], best_b[name]
        if a > b:
            wins += 1
        elif a == b:
            ties += 1
        else:
            losses += 1
        detail.append((name, a, b))
    return wins, ties, losses, detail


def validate_records(records: list[dict],
                     instances: dict[str, Instance]) -> list[str]:
    """Recheck every record's solution against its instance: feasibility,
    objective consistency, and checksum.  Returns problem descriptions,
    empty when everything holds.
    """
    problems = []
    for rec in records:
        name = rec.get("instance", "<unnamed>")
        tag = f"{name} seed {rec.get('seed')}"
        if "error" in rec:
            problems.append(f"{tag}: run failed: {rec['error']}")
            continue
        inst = instances.get(name)
        if inst is None:
            problems.append(f"{tag}: unknown instance")
            continue
        if rec["checksum"] != inst.checksum():
            problems.append(f"{tag}: checksum mismatch")
            continue
        state = SolutionState(inst, rec["best_solution"])
        if not state.is_feasible():
            problems.append(
                f"{tag}: infeasible solution, usage {state.usage()} "
                f"> capacity {inst.capacity}")
        if state.objective() != rec["best_value"]:
            problems.append(
                f"{tag}: objective {state.objective()} != recorded "
                f"{rec['best_value']}")
    return problems
