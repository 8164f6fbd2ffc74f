import random

import pytest

import e2ls
from e2ls.state import RatioKey, SolutionState, recompute


def test_t1_hand_values(t1):
    st = SolutionState(t1)
    assert st.objective() == 0 and st.usage() == 0
    assert [st.additional_weight(j) for j in range(3)] == [9, 7, 5]
    st.add(0)
    assert st.objective() == 10
    assert st.usage() == 9
    assert st.is_feasible()
    # element 1 is shared with item 0, so adding item 1 only brings w2
    assert st.additional_weight(1) == 3
    # item 2 covers element 0 only, already covered: free to add
    assert st.additional_weight(2) == 0
    # removing item 0 gives back the elements nothing else covers
    assert st.additional_weight(0) == 9
    st.add(2)
    assert st.objective() == 14 and st.usage() == 9
    assert st.additional_weight(0) == 4  # element 0 now held by item 2 too
    assert sorted(st.members()) == [0, 2]
    assert 0 in st and 1 not in st and len(st) == 2


def test_bmcp_objective_swap(t1_bmcp):
    st = SolutionState(t1_bmcp)
    st.add(1)
    st.add(2)
    assert st.objective() == 12   # covered weight
    assert st.usage() == 10       # value spent
    assert st.is_feasible()
    st.add(0)
    assert st.usage() == 20 and not st.is_feasible()


def test_misuse_raises(t1):
    st = SolutionState(t1)
    st.add(0)
    with pytest.raises(ValueError):
        st.add(0)
    with pytest.raises(ValueError):
        st.remove(1)


def test_copy_independent(t1):
    st = SolutionState(t1)
    st.add(0)
    other = st.copy()
    other.remove(0)
    assert 0 in st and 0 not in other


def test_random_ops_match_recompute(small_pool):
    rnd = random.Random(99)
    for inst in small_pool[:12]:
        st = SolutionState(inst)
        chosen = set()
        for _ in range(300):
            j = rnd.randrange(inst.m)
            if j in chosen:
                st.remove(j)
                chosen.discard(j)
            else:
                st.add(j)
                chosen.add(j)
            fresh = recompute(inst, sorted(chosen))
            assert st.value_sum == fresh.value_sum
            assert st.covered_weight == fresh.covered_weight
            assert st.cover_count.tolist() == fresh.cover_count.tolist()
            assert st.member.tolist() == fresh.member.tolist()


def test_ratio_key_ordering():
    assert RatioKey(10, 9, 0) > RatioKey(6, 7, 1) > RatioKey(4, 8, 2)
    assert RatioKey(2, 4, 0) == RatioKey(1, 2, 5)
    # zero cost reads as infinite desirability
    assert RatioKey(1, 0, 0) > RatioKey(10**9, 1, 1)
    assert RatioKey(0, 0, 0) == RatioKey(5, 0, 1)


def test_ratio_key_exact_where_floats_tie():
    g1, c1 = 2**30 + 1, 2**30
    g2, c2 = 2**30, 2**30 - 1
    assert g1 / c1 == g2 / c2          # double precision cannot split these
    assert RatioKey(g2, c2, 1) > RatioKey(g1, c1, 0)


def test_ratio_key_stable_sort_breaks_ties_by_position():
    keys = [RatioKey(2, 4, 3), RatioKey(1, 2, 1), RatioKey(3, 1, 2)]
    ascending = sorted(keys)
    assert [k.item for k in ascending] == [3, 1, 2]
    descending = sorted(keys, reverse=True)
    assert [k.item for k in descending] == [2, 3, 1]


def test_gain_cost_by_kind(t1, t1_bmcp):
    st = SolutionState(t1)
    assert st.gain_cost(0) == (10, 9)
    stb = SolutionState(t1_bmcp)
    assert stb.gain_cost(0) == (9, 10)
