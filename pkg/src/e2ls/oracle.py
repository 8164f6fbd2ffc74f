"""Independent reference solvers for verification at desk scale.

Deliberately built on the plain SolutionState bookkeeping, not on the
search engines, so the two routes can check each other.
"""

from __future__ import annotations

from .instance import Instance
from .state import SolutionState

BRUTE_FORCE_MAX_ITEMS = 25


def brute_force(inst: Instance) -> tuple[int, tuple[int, ...]]:
    """Exact optimum by enumerating all 2^m subsets.

    Walks the subsets in Gray-code order so each step toggles a single
    item, exercising the incremental add/remove path on every transition.
    Ties prefer the lexicographically smallest sorted member tuple.
    """
    if inst.m > BRUTE_FORCE_MAX_ITEMS:
        raise ValueError(
            f"brute force is capped at m <= {BRUTE_FORCE_MAX_ITEMS}, "
            f"got m = {inst.m}")
    state = SolutionState(inst)
    best_value = 0
    best_members: tuple[int, ...] = ()
    for i in range(1, 1 << inst.m):
        j = (i & -i).bit_length() - 1      # bit flipped by the i-th Gray step
        if state.member[j]:
            state.remove(j)
        else:
            state.add(j)
        if not state.is_feasible():
            continue
        obj = state.objective()
        if obj < best_value:
            continue
        members = tuple(state.members())
        if obj > best_value or members < best_members:
            best_value = obj
            best_members = members
    return best_value, best_members


def plain_greedy(inst: Instance) -> SolutionState:
    """Deterministic best-ratio greedy: absorb cost-free items, then always
    add the highest-ratio feasible item (ties to the smallest index), until
    maximal.  The infinite-sampling limit of the randomized construction.
    """
    state = SolutionState(inst)
    while True:
        for j in range(inst.m):
            if j not in state and state.gain_cost(j)[1] == 0:
                state.add(j)
        # ratios are relative to the solution after all absorbs above
        candidates = []
        for j in range(inst.m):
            if j in state:
                continue
            cost = state.gain_cost(j)[1]
            if state.usage() + cost <= inst.capacity:
                candidates.append((state.ratio_key(j), j))
        if not candidates:
            return state
        best_key, best_j = candidates[0]
        for key, j in candidates[1:]:
            if key > best_key:      # strict: ties keep the smaller index
                best_key, best_j = key, j
        state.add(best_j)
