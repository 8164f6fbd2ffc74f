"""Numpy/scipy implementation of the search kernel.

This backend is selected when the compiled extension is unavailable (see
engine.py).  Both backends expose the same methods and must produce
bit-identical search trajectories; tests/test_backends.py holds them to it.

All ratio comparisons are exact: gains and costs are bounded by the
instance totals (capped at 2**31 - 1), so cross-multiplied products fit
int64 with room to spare.
"""

from __future__ import annotations

import time

import numpy as np
from scipy import sparse


def _exact_top(items: np.ndarray, gains: np.ndarray, costs: np.ndarray,
               k: int) -> list[int]:
    """Top k item ids by descending gain/cost, ties by ascending id.

    Requires costs > 0.  A float argmax seeds each round; exact integer
    cross-multiplication then corrects it, so float rounding can never
    change the result.
    """
    count = len(items)
    k = min(k, count)
    alive = np.ones(count, dtype=bool)
    approx = gains / costs
    out = []
    for _ in range(k):
        live = np.flatnonzero(alive)
        j = int(live[np.argmax(approx[live])])
        while True:
            lhs = gains[live] * int(costs[j])
            rhs = int(gains[j]) * costs[live]
            better = live[lhs > rhs]
            if better.size == 0:
                break
            j = int(better[np.argmax(approx[better])])
        ties = live[gains[live] * int(costs[j]) == int(gains[j]) * costs[live]]
        j = int(ties[0])
        out.append(int(items[j]))
        alive[j] = False
    return out


def _exact_bottom(items: np.ndarray, gains: np.ndarray, costs: np.ndarray,
                  k: int) -> list[int]:
    """Bottom k item ids by ascending gain/cost, ties by ascending id.

    cost == 0 counts as an infinite ratio and sorts last.
    """
    count = len(items)
    k = min(k, count)
    alive = np.ones(count, dtype=bool)
    with np.errstate(divide="ignore"):
        approx = np.where(costs > 0, gains / np.maximum(costs, 1), np.inf)
    out = []
    for _ in range(k):
        live = np.flatnonzero(alive)
        finite = live[costs[live] > 0]
        if finite.size == 0:
            j = int(live[0])
        else:
            j = int(finite[np.argmin(approx[finite])])
            while True:
                lhs = gains[finite] * int(costs[j])
                rhs = int(gains[j]) * costs[finite]
                better = finite[lhs < rhs]
                if better.size == 0:
                    break
                j = int(better[np.argmin(approx[better])])
            ties = finite[gains[finite] * int(costs[j])
                          == int(gains[j]) * costs[finite]]
            j = int(ties[0])
        out.append(int(items[j]))
        alive[j] = False
    return out


class PySearchEngine:
    """Incremental solution state plus the remove/add-star search moves.

    The tabu bit vectors and hash weight rows are shared, caller-owned
    arrays; the engine reads and sets bits in place.
    """

    backend = "py"

    def __init__(self, sukp: bool, capacity: int,
                 values: np.ndarray, weights: np.ndarray,
                 row_idx: np.ndarray, row_ptr: np.ndarray,
                 col_idx: np.ndarray, col_ptr: np.ndarray,
                 hash_rows: np.ndarray, tabu_bits: np.ndarray,
                 tabu_len: int, literal_removal_tabu: bool = False):
        self.sukp = bool(sukp)
        self.capacity = int(capacity)
        self.values = np.asarray(values, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.int64)
        self.m = len(self.values)
        self.n = len(self.weights)
        self.row_idx = np.asarray(row_idx, dtype=np.int64)
        self.row_ptr = np.asarray(row_ptr, dtype=np.int64)
        self.hash_rows = np.asarray(hash_rows, dtype=np.int64)
        self.tabu_bits = tabu_bits
        self.tabu_len = int(tabu_len)
        self.literal_removal_tabu = bool(literal_removal_tabu)
        self._relation = sparse.csr_matrix(
            (np.ones(len(self.row_idx), dtype=np.int64),
             self.row_idx.copy(), self.row_ptr.copy()),
            shape=(self.m, self.n))

        self.member = np.zeros(self.m, dtype=bool)
        self.cover_count = np.zeros(self.n, dtype=np.int64)
        self.value_sum = 0
        self.covered_weight = 0
        self.size = 0
        self._hsum = [0, 0, 0]
        self.entries = 0
        self._stopped = False
        self.memo_enabled = True        # test hook; never disable at scale
        self._memo: set[bytes] = set()
        self._absorb_log: list[int] = []

    # -- state maintenance ----------------------------------------------------

    def add(self, j: int) -> None:
        if self.member[j]:
            raise ValueError(f"item {j} already in solution")
        row = self.row_idx[self.row_ptr[j]:self.row_ptr[j + 1]]
        newly = row[self.cover_count[row] == 0]
        self.covered_weight += int(self.weights[newly].sum())
        self.cover_count[row] += 1
        self.member[j] = True
        self.size += 1
        self.value_sum += int(self.values[j])
        for l in range(3):
            self._hsum[l] += int(self.hash_rows[l, j])

    def remove(self, j: int) -> None:
        if not self.member[j]:
            raise ValueError(f"item {j} not in solution")
        row = self.row_idx[self.row_ptr[j]:self.row_ptr[j + 1]]
        self.cover_count[row] -= 1
        gone = row[self.cover_count[row] == 0]
        self.covered_weight -= int(self.weights[gone].sum())
        self.member[j] = False
        self.size -= 1
        self.value_sum -= int(self.values[j])
        for l in range(3):
            self._hsum[l] -= int(self.hash_rows[l, j])

    def clear(self) -> None:
        self.member[:] = False
        self.cover_count[:] = 0
        self.value_sum = 0
        self.covered_weight = 0
        self.size = 0
        self._hsum = [0, 0, 0]

    def set_solution(self, members) -> None:
        self.clear()
        for j in members:
            self.add(int(j))

    def members(self) -> list[int]:
        return np.flatnonzero(self.member).tolist()

    # -- queries ----------------------------------------------------------------

    def objective(self) -> int:
        return self.value_sum if self.sukp else self.covered_weight

    def usage(self) -> int:
        return self.covered_weight if self.sukp else self.value_sum

    def is_feasible(self) -> bool:
        return self.usage() <= self.capacity

    def additional_weight(self, j: int) -> int:
        row = self.row_idx[self.row_ptr[j]:self.row_ptr[j + 1]]
        target = 1 if self.member[j] else 0
        return int(self.weights[row][self.cover_count[row] == target].sum())

    @property
    def stopped(self) -> bool:
        return self._stopped

    # -- tabu -------------------------------------------------------------------

    def hash_triple(self) -> tuple[int, int, int]:
        return tuple(h % self.tabu_len for h in self._hsum)

    def _bit(self, l: int, h: int) -> int:
        return (int(self.tabu_bits[l, h >> 6]) >> (h & 63)) & 1

    def is_tabu_current(self) -> bool:
        return all(self._bit(l, h) for l, h in enumerate(self.hash_triple()))

    def _tabu_with_delta(self, j: int, sign: int) -> bool:
        # tabu status of the current solution with item j toggled
        for l in range(3):
            h = (self._hsum[l] + sign * int(self.hash_rows[l, j])) % self.tabu_len
            if not self._bit(l, h):
                return False
        return True

    def mark_current_tabu(self) -> None:
        for l, h in enumerate(self.hash_triple()):
            self.tabu_bits[l, h >> 6] |= np.uint64(1 << (h & 63))

    # -- candidate scans ----------------------------------------------------------

    def _uncovered_aw(self) -> np.ndarray:
        # additional weight of every non-member: weight reachable through
        # elements nothing currently covers
        return self._relation.dot(self.weights * (self.cover_count == 0))

    def _once_covered_aw(self) -> np.ndarray:
        # additional weight of every member: weight only that member holds
        return self._relation.dot(self.weights * (self.cover_count == 1))

    def greedy_candidates(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Construction scan: absorb every zero-cost non-member (no tabu
        here), then return (items, gains, costs) of the feasible positive-
        cost candidates.  Mutates the solution.
        """
        if self.sukp:
            cost_all = self._uncovered_aw()
            absorb = np.flatnonzero(~self.member & (cost_all == 0))
        else:
            absorb = np.flatnonzero(~self.member & (self.values == 0))
        for j in absorb:
            self.add(int(j))
        if self.sukp:
            costs = cost_all            # absorbing cannot uncover elements
            gains = self.values
        else:
            costs = self.values
            gains = self._uncovered_aw()
        free = self.capacity - self.usage()
        fc = np.flatnonzero(~self.member & (costs > 0) & (costs <= free))
        return fc, gains[fc], costs[fc]

    # -- add-star ------------------------------------------------------------------

    def add_star(self, a_num: int, deadline: float | None = None
                 ) -> tuple[int, list[int] | None]:
        """Recursive addition move from the current solution.

        Absorbs zero-cost items (tabu permitting), then tries the top
        a_num feasible candidates by ratio, recursing after each add and
        undoing it afterwards.  Returns the best non-tabu solution whose
        objective strictly beats 0, or (0, None).  The solution state is
        restored exactly, even on deadline stop.
        """
        best: list = [0, None]
        self._memo = set()
        self._explore(a_num, deadline, best)
        return best[0], best[1]

    def _record(self, best: list) -> None:
        # every caller just added a tabu-checked item, so the current
        # solution is known not to be tabu
        obj = self.objective()
        if obj > best[0]:
            best[0] = obj
            best[1] = self.members()

    def _node_enter(self, a_num: int, deadline, best: list, frames: list) -> None:
        """Expand the current solution: absorb, collect candidates, push a
        frame.  Pushes nothing on deadline stop, memo hit, or a leaf.
        """
        self.entries += 1
        if deadline is not None and (self.entries & 1023) == 0 \
                and time.monotonic() >= deadline:
            self._stopped = True
        if self._stopped:
            return
        if self.memo_enabled:
            # a state reached before was fully expanded under the same
            # (frozen) tabu bits, and the incumbent only improves, so
            # re-expanding it can never help
            key = self.member.tobytes()
            if key in self._memo:
                return
            self._memo.add(key)

        undo_mark = len(self._absorb_log)
        if self.sukp:
            cost_all = self._uncovered_aw()
            absorb = np.flatnonzero(~self.member & (cost_all == 0))
        else:
            absorb = np.flatnonzero(~self.member & (self.values == 0))
        for j in absorb:
            j = int(j)
            if self._tabu_with_delta(j, +1):
                continue
            self.add(j)
            self._absorb_log.append(j)
            self._record(best)
        if self.sukp:
            costs = cost_all            # unchanged by the absorbs above
            gains = self.values
        else:
            costs = self.values
            gains = self._uncovered_aw()
        free = self.capacity - self.usage()
        fc = np.flatnonzero(~self.member & (costs > 0) & (costs <= free))
        if fc.size == 0:
            while len(self._absorb_log) > undo_mark:
                self.remove(self._absorb_log.pop())
            return
        cands = _exact_top(fc, gains[fc], costs[fc], min(a_num, fc.size))
        frames.append([cands, 0, undo_mark, -1])

    def _explore(self, a_num: int, deadline, best: list) -> None:
        # explicit stack so recursion depth is never bounded by the
        # interpreter; frame = [candidates, next index, absorb mark, pending]
        frames: list[list] = []
        self._node_enter(a_num, deadline, best, frames)
        while frames:
            fr = frames[-1]
            if fr[3] >= 0:
                self.remove(fr[3])
                fr[3] = -1
            if fr[1] >= len(fr[0]) or self._stopped:
                while len(self._absorb_log) > fr[2]:
                    self.remove(self._absorb_log.pop())
                frames.pop()
                continue
            j = fr[0][fr[1]]
            fr[1] += 1
            if self._tabu_with_delta(j, +1):
                continue
            self.add(j)
            fr[3] = j
            self._record(best)
            self._node_enter(a_num, deadline, best, frames)

    # -- local search -----------------------------------------------------------

    def local_search(self, r_num: int, a_num: int, deadline: float | None = None
                     ) -> tuple[int, list[int] | None]:
        """Remove each of the lowest-ratio members in turn and rebuild with
        add_star; returns the best solution over all branches, or (0, None)
        when every branch comes back empty.
        """
        best_v = 0
        best_members = None
        member_ids = np.flatnonzero(self.member)
        k = min(r_num, member_ids.size)
        if k:
            if self.sukp:
                gains = self.values[member_ids]
                costs = self._once_covered_aw()[member_ids]
            else:
                gains = self._once_covered_aw()[member_ids]
                costs = self.values[member_ids]
            for i in _exact_bottom(member_ids, gains, costs, k):
                if deadline is not None and time.monotonic() >= deadline:
                    self._stopped = True
                if self._stopped:
                    break
                if self.literal_removal_tabu and not self._tabu_with_delta(i, -1):
                    continue
                self.remove(i)
                v, mem = self.add_star(a_num, deadline)
                self.add(i)
                if v > best_v:
                    best_v = v
                    best_members = mem
        return best_v, best_members
