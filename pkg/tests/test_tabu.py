import math
import random

import numpy as np
import pytest

import e2ls
from e2ls.tabu import (DEFAULT_TABU_LEN, GAMMA_EXPONENTS, TabuStore,
                       build_weights, floor_power, hash_solution,
                       unshuffled_rows)


def test_floor_power_small_values():
    # j^(6/5): 2^1.2 = 2.297..., 3^1.2 = 3.737...
    assert [floor_power(j, 6, 5) for j in (1, 2, 3)] == [1, 2, 3]
    # j^(8/5): 2^1.6 = 3.031..., 3^1.6 = 5.799...
    assert [floor_power(j, 8, 5) for j in (1, 2, 3)] == [1, 3, 5]
    assert [floor_power(j, 2, 1) for j in (1, 2, 3)] == [1, 4, 9]


def test_floor_power_is_exact_floor():
    rnd = random.Random(5)
    js = [rnd.randrange(1, 10**6) for _ in range(200)] + [1, 2**20, 10**6]
    for p, q in GAMMA_EXPONENTS:
        for j in js:
            r = floor_power(j, p, q)
            assert r**q <= j**p < (r + 1) ** q, (j, p, q, r)


def test_unshuffled_rows():
    rows = unshuffled_rows(3)
    assert rows.tolist() == [[1, 2, 3], [1, 3, 5], [1, 4, 9]]


def test_build_weights_is_row_permutation():
    rows = build_weights(20, random.Random(3))
    base = unshuffled_rows(20)
    assert rows.shape == (3, 20)
    for l in range(3):
        assert sorted(rows[l].tolist()) == sorted(base[l].tolist())
    assert np.array_equal(rows, build_weights(20, random.Random(3)))
    assert not np.array_equal(rows, build_weights(20, random.Random(4)))


def test_hash_solution_matches_direct_sum():
    rows = build_weights(12, random.Random(0))
    assert hash_solution([], rows, 997) == (0, 0, 0)
    expected = tuple(int(rows[l][[1, 4, 9]].sum()) % 997 for l in range(3))
    assert hash_solution([1, 4, 9], rows, 997) == expected


def test_store_insert_then_contains():
    store = TabuStore(64)
    assert store.length == 64
    h = (3, 17, 63)
    assert not store.contains(h)
    store.insert(h)
    assert store.contains(h)
    assert store.fill_counts() == [1, 1, 1]


def test_store_monotone_under_fuzz():
    store = TabuStore(257)
    rnd = random.Random(8)
    seen = []
    for _ in range(2000):
        h = tuple(rnd.randrange(257) for _ in range(3))
        store.insert(h)
        seen.append(h)
        probe = rnd.choice(seen)
        assert store.contains(probe)


def test_store_collision_with_tiny_length():
    # with a single bucket per row every solution hashes identically
    store = TabuStore(1)
    store.insert((0, 0, 0))
    rows = build_weights(10, random.Random(1))
    assert store.contains(hash_solution([3], rows, 1))
    assert store.contains(hash_solution([2, 7, 9], rows, 1))


def test_store_rejects_bad_length():
    with pytest.raises(ValueError):
        TabuStore(0)


def test_default_length():
    assert DEFAULT_TABU_LEN == 10**8


def test_memory_footprint_is_three_bitvectors():
    store = TabuStore(10**6)
    assert store.bits.shape == (3, math.ceil(10**6 / 64))
    assert store.bits.dtype == np.uint64
