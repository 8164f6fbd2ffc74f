"""End-to-end acceptance checks.

Each test prints one machine-greppable verdict line of the form
``CRITERION <k>: PASS|FAIL - <what was checked>``.  Criterion 9 needs the
two large public instance files and is skipped (with a SKIP line) unless
E2LS_PUBLIC_INSTANCES points at a directory that holds them.
"""

import os
import random
import time
from pathlib import Path

import pytest

import e2ls
from e2ls import bench
from e2ls.search import SearchParams, add_star, solve
from e2ls.state import SolutionState, recompute
from e2ls.tabu import TabuStore, build_weights, hash_solution

from conftest import build_pool


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"\nCRITERION {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num} failed: {detail}"


@pytest.fixture(scope="module")
def suite():
    """400 small instances (200 per kind) with their exact optima."""
    pool = build_pool(400, offset=7000)
    optima = [e2ls.brute_force(inst)[0] for inst in pool]
    return pool, optima


#: records accumulated by the full-loop runs, validated post hoc by criterion 4
_RECORDS: list[dict] = []


def test_criterion_01_exhaustive_move_is_exact(suite):
    pool, optima = suite
    t0 = time.monotonic()
    hits = 0
    for inst, opt in zip(pool, optima):
        value, members = add_star(inst, [], a_num=inst.m)
        good = value == opt
        if members is not None:
            state = SolutionState(inst, members)
            good = good and state.is_feasible() and state.objective() == value
        elif opt != 0:
            good = False
        hits += good
    _verdict(1, hits == len(pool),
             f"exhaustive single move matched the enumeration optimum on "
             f"{hits}/{len(pool)} instances in {time.monotonic() - t0:.0f}s")


def test_criterion_02_full_loop_reaches_optimum(suite):
    pool, optima = suite
    t0 = time.monotonic()
    hits = total = 0
    for i, (inst, opt) in enumerate(zip(pool, optima)):
        for seed in (1, 2, 3, 4, 5):
            rec = solve(inst, SearchParams(cutoff_seconds=2.0, seed=seed,
                                           target_value=opt))
            total += 1
            hits += rec.best_value == opt
            _RECORDS.append(bench.record_dict(f"small_{i}", inst.checksum(),
                                              rec))
    _verdict(2, hits == total,
             f"default-parameter search hit the optimum in {hits}/{total} "
             f"runs (400 instances x 5 seeds) in {time.monotonic() - t0:.0f}s")


def test_criterion_03_incremental_state_matches_scratch():
    rnd = random.Random(31)
    pool = build_pool(50, offset=8100, lo=4, hi=16)
    checked = 0
    ok = True
    for idx, inst in enumerate(pool):
        rows = build_weights(inst.m, random.Random(idx))
        engine = e2ls.make_engine(inst, rows, TabuStore(997))
        state = SolutionState(inst)
        chosen: set[int] = set()
        for _ in range(10_000):
            j = rnd.randrange(inst.m)
            if j in chosen:
                engine.remove(j); state.remove(j); chosen.discard(j)
            else:
                engine.add(j); state.add(j); chosen.add(j)
            fresh = recompute(inst, sorted(chosen))
            probe = rnd.randrange(inst.m)
            ok = ok and (
                state.covered_weight == fresh.covered_weight
                and state.value_sum == fresh.value_sum
                and state.cover_count.tolist() == fresh.cover_count.tolist()
                and engine.objective() == fresh.objective()
                and engine.usage() == fresh.usage()
                and engine.additional_weight(probe)
                    == fresh.additional_weight(probe)
                and engine.hash_triple()
                    == hash_solution(sorted(chosen), rows, 997))
            checked += 1
        ok = ok and engine.members() == sorted(chosen)
    _verdict(3, ok and checked == 500_000,
             f"cached weight/value/cover-count/hash equalled scratch "
             f"recomputation at every one of {checked} steps "
             f"(10^4 per instance, {len(pool)} instances)")


def test_criterion_04_all_reported_solutions_feasible(suite, tmp_path):
    pool, _ = suite
    instances = {f"small_{i}": inst for i, inst in enumerate(pool)}
    path = tmp_path / "acceptance_records.jsonl"
    bench.write_records(_RECORDS, path)
    problems = bench.validate_records(bench.read_records(path), instances)
    _verdict(4, len(_RECORDS) > 0 and not problems,
             f"post-hoc validator rechecked {len(_RECORDS)} run records "
             f"against capacity and objective; {len(problems)} problems")


def test_criterion_05_tabu_store_semantics():
    inst = e2ls.generate_uniform("SUKP", 10, 8, 0.4, beta=0.7, seed=77)
    rows = build_weights(inst.m, random.Random(0))
    store = TabuStore(64)
    engine = e2ls.make_engine(inst, rows, store)
    engine.add(0); engine.add(3)
    insert_works = not engine.is_tabu_current()
    engine.mark_current_tabu()
    insert_works = insert_works and engine.is_tabu_current() \
        and store.contains(engine.hash_triple())

    rnd = random.Random(13)
    inserted = [engine.hash_triple()]
    monotone = True
    for _ in range(100_000):
        if rnd.random() < 0.3:
            h = tuple(rnd.randrange(64) for _ in range(3))
            store.insert(h)
            inserted.append(h)
        monotone = monotone and store.contains(rnd.choice(inserted))

    # 2^10 subsets land in 64 buckets per hash row, so single-row collisions
    # are unavoidable; exhibit one pair explicitly
    triples = {}
    for mask in range(2**10):
        members = [j for j in range(10) if mask >> j & 1]
        triples[tuple(members)] = hash_solution(members, rows, 64)
    seen_h: dict[int, tuple] = {}
    collision = None
    for members, triple in triples.items():
        if triple[0] in seen_h and seen_h[triple[0]] != members:
            collision = (seen_h[triple[0]], members, triple[0])
            break
        seen_h[triple[0]] = members
    assert collision is not None

    # the bit vectors also admit false positives across different inserts:
    # find a never-inserted subset whose three bits are all set
    fp_store = TabuStore(64)
    inserted = set(list(triples)[:64])
    for members in inserted:
        fp_store.insert(triples[members])
    false_positive = next((members for members, triple in triples.items()
                           if members not in inserted
                           and fp_store.contains(triple)), None)

    rec = solve(inst, SearchParams(cutoff_seconds=1.0, seed=1, tabu_len=64))
    state = SolutionState(inst, rec.best_solution)
    survives = (rec.wall_time_seconds < 5.0 and state.is_feasible()
                and state.objective() == rec.best_value > 0)
    _verdict(5, insert_works and monotone and false_positive is not None
             and survives,
             "insert marks solutions tabu, membership is monotone over 1e5 "
             f"ops, sets {collision[0]} and {collision[1]} share hash bucket "
             f"{collision[2]}, subset {false_positive} reads tabu without "
             "being inserted, and the saturated search still returned a "
             "feasible best at cutoff")


def test_criterion_06_construction_properties(t1):
    mixed = build_pool(20, offset=8200, lo=4, hi=30)
    ok = True
    for s in range(1000):
        inst = mixed[s % len(mixed)]
        st = e2ls.random_greedy(inst, seed=s)
        good = st.is_feasible()
        left = inst.capacity - st.usage()
        for j in range(inst.m):
            if j not in st:
                cost = (st.additional_weight(j) if inst.kind == "SUKP"
                        else int(inst.values[j]))
                good = good and cost > left
        ok = ok and good
    t1_hits = sum(e2ls.random_greedy(t1, t=50, seed=s).objective() == 14
                  for s in range(1000))
    _verdict(6, ok and t1_hits == 1000,
             "1000 seeded constructions were feasible and maximal; "
             f"{t1_hits}/1000 seeds with t=50 built the known 3-item optimum")


def test_criterion_07_robust_to_sampling_width(suite):
    pool, optima = suite
    t0 = time.monotonic()
    misses = 0
    total = 0
    for t in (1, 10, None):
        for inst, opt in zip(pool, optima):
            for seed in (1, 2, 3, 4, 5):
                rec = solve(inst, SearchParams(t=t, cutoff_seconds=2.0,
                                               seed=seed, target_value=opt))
                total += 1
                misses += rec.best_value != opt
    _verdict(7, misses == 0,
             f"t=1, t=10 and the default all reached the optimum; "
             f"{total - misses}/{total} runs in {time.monotonic() - t0:.0f}s")


def test_criterion_08_determinism_across_reps_and_workers(suite):
    pool, _ = suite
    picks = [("d0", pool[0]), ("d1", pool[1]), ("d2", pool[201])]
    params = SearchParams(cutoff_seconds=600.0, max_iterations=60, seed=11)

    reps = []
    for _ in range(3):
        reps.append([(rec.best_value, rec.iterations, rec.restarts)
                     for rec in (solve(inst, params) for _, inst in picks)])
    same_reps = reps[0] == reps[1] == reps[2]

    def strip(records):
        return [{k: v for k, v in r.items()
                 if k not in ("wall_time_s", "time_to_best_s")}
                for r in records]

    serial = bench.run_batch(picks, params, runs=4, base_seed=1, workers=1)
    pooled = bench.run_batch(picks, params, runs=4, base_seed=1, workers=4)
    same_workers = strip(serial) == strip(pooled)
    _verdict(8, same_reps and same_workers,
             "best value, iterations and restarts identical over 3 "
             "repetitions and for worker counts 1 and 4")


def test_criterion_09_large_public_instances():
    root = os.environ.get("E2LS_PUBLIC_INSTANCES")
    targets = [("sukp_1000_850_0.15_0.85", 9565),
               ("sukp_5000_4850_0.10_0.75", 9207)]
    if not root:
        print("\nCRITERION 9: SKIP - set E2LS_PUBLIC_INSTANCES to a directory "
              "with the two large benchmark files to run this (hours)")
        pytest.skip("large public instance files not supplied")
    ok = True
    notes = []
    for stem, target in targets:
        path = next((p for p in (Path(root) / f"{stem}{ext}"
                                 for ext in (".txt", "")) if p.exists()), None)
        if path is None:
            ok = False
            notes.append(f"{stem}: file missing under {root}")
            continue
        inst = e2ls.load_instance(path, "SUKP")
        best = 0
        for seed in range(1, 11):
            rec = solve(inst, SearchParams(cutoff_seconds=1000.0, seed=seed,
                                           target_value=target))
            best = max(best, rec.best_value)
            if best >= target:
                break
        ok = ok and best >= target
        notes.append(f"{stem}: best {best} vs target {target}")
    _verdict(9, ok, "; ".join(notes))


def test_criterion_10_throughput_floor():
    inst = e2ls.generate_uniform("SUKP", 1000, 1000, 0.10, beta=0.75, seed=42)
    rec = solve(inst, SearchParams(cutoff_seconds=5.0, seed=0))
    rate = rec.iterations / rec.wall_time_seconds
    _verdict(10, rate >= 50.0,
             f"{rate:.0f} local-search iterations/s on a 1000x1000 instance "
             f"({rec.backend} backend, floor 50/s)")
