import random

import pytest

import e2ls
from e2ls.engine import available_backends, default_backend, make_engine
from e2ls.search import SearchParams, solve
from e2ls.state import SolutionState
from e2ls.tabu import TabuStore, build_weights

HAS_C = "c" in available_backends()
needs_c = pytest.mark.skipif(not HAS_C, reason="compiled kernel not built")


def _twin_engines(inst, seed=0, tabu_len=101):
    rows = build_weights(inst.m, random.Random(seed))
    pair = []
    for backend in ("py", "c"):
        store = TabuStore(tabu_len)
        pair.append(make_engine(inst, rows, store, backend=backend))
    return pair


def test_backend_listing():
    assert "py" in available_backends()
    assert default_backend() in available_backends()


def test_env_override(monkeypatch):
    monkeypatch.setenv("E2LS_BACKEND", "py")
    assert default_backend() == "py"
    monkeypatch.setenv("E2LS_BACKEND", "nosuch")
    with pytest.raises(ValueError):
        default_backend()


@needs_c
def test_env_override_c(monkeypatch):
    monkeypatch.setenv("E2LS_BACKEND", "c")
    assert default_backend() == "c"


@needs_c
def test_incremental_ops_agree(small_pool):
    rnd = random.Random(17)
    for inst in small_pool[:10]:
        py, ck = _twin_engines(inst)
        ref = SolutionState(inst)
        chosen = set()
        for _ in range(400):
            j = rnd.randrange(inst.m)
            if j in chosen:
                py.remove(j); ck.remove(j); ref.remove(j)
                chosen.discard(j)
            else:
                py.add(j); ck.add(j); ref.add(j)
                chosen.add(j)
            assert py.objective() == ck.objective() == ref.objective()
            assert py.usage() == ck.usage() == ref.usage()
            assert py.is_feasible() == ck.is_feasible() == ref.is_feasible()
            assert py.hash_triple() == ck.hash_triple()
            probe = rnd.randrange(inst.m)
            assert (py.additional_weight(probe)
                    == ck.additional_weight(probe)
                    == ref.additional_weight(probe))
        assert py.members() == ck.members() == sorted(chosen)


@needs_c
def test_engine_misuse_matches(t1):
    py, ck = _twin_engines(t1)
    for eng in (py, ck):
        eng.add(0)
        with pytest.raises(ValueError):
            eng.add(0)
        with pytest.raises(ValueError):
            eng.remove(2)
        with pytest.raises(IndexError):
            eng.add(17)
        eng.clear()
        assert eng.members() == []


@needs_c
def test_greedy_candidates_agree(small_pool):
    for inst in small_pool[:10]:
        py, ck = _twin_engines(inst)
        while True:
            ip, gp, cp = py.greedy_candidates()
            ic, gc, cc = ck.greedy_candidates()
            assert list(ip) == list(ic)
            assert list(gp) == list(gc)
            assert list(cp) == list(cc)
            assert py.members() == ck.members()  # absorbs included
            if len(ip) == 0:
                break
            py.add(int(ip[0]))
            ck.add(int(ic[0]))


@needs_c
def test_add_star_trajectories_agree(small_pool):
    for inst in small_pool:
        py, ck = _twin_engines(inst)
        for a_num in (1, 2, inst.m):
            assert py.add_star(a_num) == ck.add_star(a_num)
            assert py.entries == ck.entries
            assert py.members() == ck.members() == []


@needs_c
def test_local_search_agrees_with_tabu_pressure(small_pool):
    rnd = random.Random(23)
    for inst in small_pool[:12]:
        rows = build_weights(inst.m, random.Random(1))
        store_p, store_c = TabuStore(53), TabuStore(53)
        py = make_engine(inst, rows, store_p, backend="py")
        ck = make_engine(inst, rows, store_c, backend="c")
        start = [j for j in range(inst.m) if rnd.random() < 0.3]
        for eng in (py, ck):
            for j in start:
                if eng.is_feasible():
                    eng.add(j)
        # tiny tabu length forces collisions and blocked branches
        for _ in range(6):
            rp = py.local_search(2, 2)
            rc = ck.local_search(2, 2)
            assert rp == rc
            assert py.entries == ck.entries
            if rp[1] is not None:
                py.set_solution(rp[1]); ck.set_solution(rc[1])
                py.mark_current_tabu(); ck.mark_current_tabu()
                assert py.is_tabu_current() and ck.is_tabu_current()
            assert store_p.bits.tolist() == store_c.bits.tolist()


@needs_c
def test_full_solve_parity(small_pool):
    for inst in small_pool[:10]:
        for seed in (0, 3):
            rp = solve(inst, SearchParams(seed=seed, max_iterations=30,
                                          cutoff_seconds=60, backend="py"))
            rc = solve(inst, SearchParams(seed=seed, max_iterations=30,
                                          cutoff_seconds=60, backend="c"))
            assert rp.best_value == rc.best_value
            assert rp.best_solution == rc.best_solution
            assert rp.iterations == rc.iterations
            assert rp.restarts == rc.restarts
            assert rp.adds_explored == rc.adds_explored


@needs_c
def test_tabu_bits_shared_with_store(t1):
    rows = build_weights(t1.m, random.Random(0))
    for backend in ("py", "c"):
        store = TabuStore(64)
        eng = make_engine(t1, rows, store, backend=backend)
        eng.add(0)
        assert not eng.is_tabu_current()
        eng.mark_current_tabu()
        assert eng.is_tabu_current()
        assert store.contains(eng.hash_triple())
        # inserting through the store is visible inside the engine
        eng.add(1)
        assert not eng.is_tabu_current()
        store.insert(eng.hash_triple())
        assert eng.is_tabu_current()


def _deadline_restores_state(backend):
    inst = e2ls.generate_uniform("SUKP", 200, 150, 0.2, beta=0.8, seed=5)
    rows = build_weights(inst.m, random.Random(0))
    eng = make_engine(inst, rows, TabuStore(101), backend=backend)
    value, members = eng.add_star(inst.m, deadline=0.0)
    assert eng.stopped
    assert eng.members() == []      # unwound cleanly mid-search
    assert eng.entries >= 1024      # ran until the first deadline check
    return value, members, eng.entries


def test_deadline_stops_py():
    _deadline_restores_state("py")


@needs_c
def test_deadline_stops_c_same_point():
    vp, mp, ep = _deadline_restores_state("py")
    vc, mc, ec = _deadline_restores_state("c")
    assert (vp, mp, ep) == (vc, mc, ec)


@needs_c
def test_literal_variant_parity(small_pool):
    for inst in small_pool[:6]:
        rows = build_weights(inst.m, random.Random(2))
        py = make_engine(inst, rows, TabuStore(31), True, "py")
        ck = make_engine(inst, rows, TabuStore(31), True, "c")
        for eng in (py, ck):
            eng.mark_current_tabu()     # make the empty solution visited
            for j in range(0, inst.m, 3):
                eng.add(j)
        assert py.local_search(3, 3) == ck.local_search(3, 3)
        assert py.entries == ck.entries
