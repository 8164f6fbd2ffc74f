"""Reference solution state with incremental coverage bookkeeping.

This is the slow-but-obviously-correct implementation used by the oracles
and the invariant tests.  The search kernels keep their own mirrors of the
same quantities; any divergence from this class is a bug there.
"""

from __future__ import annotations

import functools

import numpy as np

from .instance import Instance, ProblemKind


@functools.total_ordering
class RatioKey:
    """Exact value of gain/cost for sorting, compared by cross-multiplication.

    cost == 0 sorts above every finite key (a free improvement).  Comparison
    looks at the ratio only; build keys in ascending item order and rely on
    sort stability (both directions) to break ties by ascending index.
    """

    __slots__ = ("gain", "cost", "item")

    def __init__(self, gain: int, cost: int, item: int):
        self.gain = int(gain)
        self.cost = int(cost)
        self.item = int(item)

    def _rank(self, other: "RatioKey") -> int:
        # -1 / 0 / +1 for self's ratio <, ==, > other's
        a_inf, b_inf = self.cost == 0, other.cost == 0
        if a_inf or b_inf:
            return (a_inf > b_inf) - (a_inf < b_inf)
        lhs = self.gain * other.cost
        rhs = other.gain * self.cost
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatioKey):
            return NotImplemented
        return self._rank(other) == 0

    def __lt__(self, other) -> bool:
        if not isinstance(other, RatioKey):
            return NotImplemented
        return self._rank(other) < 0

    __hash__ = None

    def __repr__(self):
        return f"RatioKey({self.gain}/{self.cost}, item={self.item})"


class SolutionState:
    """A mutable item subset with O(row) add/remove updates.

    Tracks per-element cover counts, the covered-weight sum W(S), and the
    value sum f(S).  `additional_weight` is the marginal covered weight of
    toggling one item, computable for members and non-members alike.
    """

    def __init__(self, inst: Instance, members=()):
        self.inst = inst
        self.member = np.zeros(inst.m, dtype=bool)
        self.cover_count = np.zeros(inst.n, dtype=np.int64)
        self.covered_weight = 0
        self.value_sum = 0
        self.size = 0
        for j in members:
            self.add(int(j))

    def add(self, j: int) -> None:
        if self.member[j]:
            raise ValueError(f"item {j} already in solution")
        self.member[j] = True
        self.size += 1
        self.value_sum += int(self.inst.values[j])
        for k in self.inst.coverage[j]:
            if self.cover_count[k] == 0:
                self.covered_weight += int(self.inst.weights[k])
            self.cover_count[k] += 1

    def remove(self, j: int) -> None:
        if not self.member[j]:
            raise ValueError(f"item {j} not in solution")
        self.member[j] = False
        self.size -= 1
        self.value_sum -= int(self.inst.values[j])
        for k in self.inst.coverage[j]:
            self.cover_count[k] -= 1
            if self.cover_count[k] == 0:
                self.covered_weight -= int(self.inst.weights[k])

    def additional_weight(self, j: int) -> int:
        """Marginal covered weight of item j relative to the current set.

        Non-member: W(S + j) - W(S).  Member: W(S) - W(S - j).
        """
        target = 1 if self.member[j] else 0
        inst = self.inst
        return int(sum(int(inst.weights[k]) for k in inst.coverage[j]
                       if self.cover_count[k] == target))

    # -- problem-kind views ----------------------------------------------------

    def objective(self) -> int:
        """Quantity being maximized: f(S) for SUKP, W(S) for BMCP."""
        if self.inst.kind is ProblemKind.SUKP:
            return self.value_sum
        return self.covered_weight

    def usage(self) -> int:
        """Quantity bounded by the capacity: W(S) for SUKP, f(S) for BMCP."""
        if self.inst.kind is ProblemKind.SUKP:
            return self.covered_weight
        return self.value_sum

    def is_feasible(self) -> bool:
        return self.usage() <= self.inst.capacity

    def gain_cost(self, j: int) -> tuple[int, int]:
        """(gain, cost) of item j: what adding j contributes to the objective
        and what it charges against the capacity.
        """
        aw = self.additional_weight(j)
        v = int(self.inst.values[j])
        if self.inst.kind is ProblemKind.SUKP:
            return v, aw
        return aw, v

    def ratio_key(self, j: int) -> RatioKey:
        gain, cost = self.gain_cost(j)
        return RatioKey(gain, cost, j)

    # -- conveniences ----------------------------------------------------------

    def members(self) -> list[int]:
        return np.flatnonzero(self.member).tolist()

    def copy(self) -> "SolutionState":
        dup = SolutionState.__new__(SolutionState)
        dup.inst = self.inst
        dup.member = self.member.copy()
        dup.cover_count = self.cover_count.copy()
        dup.covered_weight = self.covered_weight
        dup.value_sum = self.value_sum
        dup.size = self.size
        return dup

    def __contains__(self, j: int) -> bool:
        return bool(self.member[j])

    def __len__(self) -> int:
        return self.size

    def __repr__(self):
        return (f"SolutionState(size={self.size}, f={self.value_sum}, "
                f"W={self.covered_weight})")


def recompute(inst: Instance, members) -> SolutionState:
    """Fresh state built from scratch; the cross-check for incremental updates."""
    return SolutionState(inst, members)
