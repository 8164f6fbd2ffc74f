# cython: language_level=3
"""Compiled search kernel.

Mirrors _pyengine.PySearchEngine move for move; the two backends must walk
identical search trajectories (tests/test_backends.py holds them to it).
The speed comes from three things: additional weights are accumulated by
walking only the still-uncovered elements, candidate selection is a flat
integer scan, and the visited-set check hashes members incrementally.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from libc.string cimport memcmp, memset

from time import monotonic

ctypedef long long i64
ctypedef unsigned long long u64


cdef void* _xmalloc(size_t nbytes) except NULL:
    cdef void* p = PyMem_Malloc(nbytes if nbytes > 0 else 1)
    if p == NULL:
        raise MemoryError()
    return p


cdef inline u64 _mix64(u64 x) noexcept:
    # splitmix64 finalizer; deterministic per-item hashing keys
    x ^= x >> 30
    x *= <u64>0xBF58476D1CE4E5B9
    x ^= x >> 27
    x *= <u64>0x94D049BB133111EB
    x ^= x >> 31
    return x


cdef struct Frame:
    i64 start       # candidate offset in the arena
    i64 length      # number of candidates kept
    i64 nxt         # next candidate position to try
    i64 undo_mark   # absorb-log length at node entry
    i64 pending     # item added for the running child, -1 if none


cdef class CSearchEngine:
    cdef readonly object backend
    cdef public i64 entries
    cdef readonly bint sukp
    cdef readonly i64 m, n, capacity, tabu_len
    cdef readonly bint literal_removal_tabu
    cdef bint _stopped

    cdef const i64[::1] values, weights, row_idx, row_ptr, col_idx, col_ptr
    cdef const i64[:, ::1] hash_rows
    cdef u64[:, ::1] tabu_bits

    cdef i64 value_sum, covered_weight, size
    cdef i64 hsum[3]
    cdef unsigned char* member_
    cdef i64* cover_count_
    cdef int* unc_            # element ids with cover count zero
    cdef int* unc_pos_
    cdef i64 unc_len
    cdef i64* aw_             # additional-weight scratch, valid when stamped
    cdef i64* aw_stamp_
    cdef i64 epoch
    cdef u64* zkey_
    cdef u64 zhash

    cdef Frame* frames_
    cdef i64 depth
    cdef int* absorb_log_
    cdef i64 absorb_len
    cdef i64* arena_
    cdef i64 arena_cap, arena_top

    cdef u64* memo_hash_
    cdef i64* memo_off_
    cdef int* memo_size_
    cdef i64 memo_cap, memo_count
    cdef int* pool_
    cdef i64 pool_cap, pool_len
    cdef int* scratch_members_

    cdef int* ls_ids_
    cdef i64* ls_gain_
    cdef i64* ls_cost_

    cdef i64 best_value, best_len
    cdef int* best_members_

    def __cinit__(self, sukp, capacity, values, weights,
                  row_idx, row_ptr, col_idx, col_ptr,
                  hash_rows, tabu_bits, tabu_len,
                  literal_removal_tabu=False):
        cdef i64 j, k
        self.backend = "c"
        self.sukp = bool(sukp)
        self.capacity = capacity
        self.values = values
        self.weights = weights
        self.row_idx = row_idx
        self.row_ptr = row_ptr
        self.col_idx = col_idx
        self.col_ptr = col_ptr
        self.hash_rows = hash_rows
        self.tabu_bits = tabu_bits
        self.tabu_len = tabu_len
        self.literal_removal_tabu = bool(literal_removal_tabu)
        self.m = self.values.shape[0]
        self.n = self.weights.shape[0]

        cdef i64 m = self.m, n = self.n
        self.member_ = <unsigned char*>_xmalloc(m)
        self.cover_count_ = <i64*>_xmalloc(n * sizeof(i64))
        self.unc_ = <int*>_xmalloc(n * sizeof(int))
        self.unc_pos_ = <int*>_xmalloc(n * sizeof(int))
        self.aw_ = <i64*>_xmalloc(m * sizeof(i64))
        self.aw_stamp_ = <i64*>_xmalloc(m * sizeof(i64))
        self.zkey_ = <u64*>_xmalloc(m * sizeof(u64))
        self.frames_ = <Frame*>_xmalloc((m + 2) * sizeof(Frame))
        self.absorb_log_ = <int*>_xmalloc((m + 1) * sizeof(int))
        self.arena_cap = 4096
        self.arena_ = <i64*>_xmalloc(self.arena_cap * sizeof(i64))
        self.memo_cap = 2048
        self.memo_hash_ = <u64*>_xmalloc(self.memo_cap * sizeof(u64))
        self.memo_off_ = <i64*>_xmalloc(self.memo_cap * sizeof(i64))
        self.memo_size_ = <int*>_xmalloc(self.memo_cap * sizeof(int))
        self.pool_cap = 4096
        self.pool_ = <int*>_xmalloc(self.pool_cap * sizeof(int))
        self.scratch_members_ = <int*>_xmalloc(m * sizeof(int))
        self.ls_ids_ = <int*>_xmalloc(m * sizeof(int))
        self.ls_gain_ = <i64*>_xmalloc(m * sizeof(i64))
        self.ls_cost_ = <i64*>_xmalloc(m * sizeof(i64))
        self.best_members_ = <int*>_xmalloc(m * sizeof(int))

        for j in range(m):
            self.aw_stamp_[j] = 0
            self.zkey_[j] = _mix64((<u64>(j + 1)) * <u64>0x9E3779B97F4A7C15)
        self.epoch = 0
        memset(self.memo_off_, 0xFF, self.memo_cap * sizeof(i64))
        self.memo_count = 0
        self.pool_len = 0
        self.entries = 0
        self._stopped = False
        self.absorb_len = 0
        self.depth = 0
        self.arena_top = 0
        self.clear()

    def __dealloc__(self):
        PyMem_Free(self.member_)
        PyMem_Free(self.cover_count_)
        PyMem_Free(self.unc_)
        PyMem_Free(self.unc_pos_)
        PyMem_Free(self.aw_)
        PyMem_Free(self.aw_stamp_)
        PyMem_Free(self.zkey_)
        PyMem_Free(self.frames_)
        PyMem_Free(self.absorb_log_)
        PyMem_Free(self.arena_)
        PyMem_Free(self.memo_hash_)
        PyMem_Free(self.memo_off_)
        PyMem_Free(self.memo_size_)
        PyMem_Free(self.pool_)
        PyMem_Free(self.scratch_members_)
        PyMem_Free(self.ls_ids_)
        PyMem_Free(self.ls_gain_)
        PyMem_Free(self.ls_cost_)
        PyMem_Free(self.best_members_)

    # -- state maintenance ----------------------------------------------------

    cdef void _add_item(self, i64 j) noexcept:
        cdef i64 p, k, pos, last
        for p in range(self.row_ptr[j], self.row_ptr[j + 1]):
            k = self.row_idx[p]
            if self.cover_count_[k] == 0:
                self.covered_weight += self.weights[k]
                pos = self.unc_pos_[k]
                last = self.unc_[self.unc_len - 1]
                self.unc_[pos] = <int>last
                self.unc_pos_[last] = <int>pos
                self.unc_len -= 1
                self.unc_pos_[k] = -1
            self.cover_count_[k] += 1
        self.member_[j] = 1
        self.size += 1
        self.value_sum += self.values[j]
        self.hsum[0] += self.hash_rows[0, j]
        self.hsum[1] += self.hash_rows[1, j]
        self.hsum[2] += self.hash_rows[2, j]
        self.zhash ^= self.zkey_[j]

    cdef void _remove_item(self, i64 j) noexcept:
        cdef i64 p, k
        for p in range(self.row_ptr[j], self.row_ptr[j + 1]):
            k = self.row_idx[p]
            self.cover_count_[k] -= 1
            if self.cover_count_[k] == 0:
                self.covered_weight -= self.weights[k]
                self.unc_[self.unc_len] = <int>k
                self.unc_pos_[k] = <int>self.unc_len
                self.unc_len += 1
        self.member_[j] = 0
        self.size -= 1
        self.value_sum -= self.values[j]
        self.hsum[0] -= self.hash_rows[0, j]
        self.hsum[1] -= self.hash_rows[1, j]
        self.hsum[2] -= self.hash_rows[2, j]
        self.zhash ^= self.zkey_[j]

    def add(self, j):
        cdef i64 jj = j
        if jj < 0 or jj >= self.m:
            raise IndexError(f"item index {jj} out of range")
        if self.member_[jj]:
            raise ValueError(f"item {jj} already in solution")
        self._add_item(jj)

    def remove(self, j):
        cdef i64 jj = j
        if jj < 0 or jj >= self.m:
            raise IndexError(f"item index {jj} out of range")
        if not self.member_[jj]:
            raise ValueError(f"item {jj} not in solution")
        self._remove_item(jj)

    def clear(self):
        cdef i64 j, k
        memset(self.member_, 0, self.m)
        memset(self.cover_count_, 0, self.n * sizeof(i64))
        for k in range(self.n):
            self.unc_[k] = <int>k
            self.unc_pos_[k] = <int>k
        self.unc_len = self.n
        self.value_sum = 0
        self.covered_weight = 0
        self.size = 0
        self.hsum[0] = 0
        self.hsum[1] = 0
        self.hsum[2] = 0
        self.zhash = 0

    def set_solution(self, members):
        self.clear()
        for j in members:
            self.add(j)

    def members(self):
        cdef i64 j
        return [j for j in range(self.m) if self.member_[j]]

    # -- queries ----------------------------------------------------------------

    def objective(self):
        return self.value_sum if self.sukp else self.covered_weight

    def usage(self):
        return self.covered_weight if self.sukp else self.value_sum

    def is_feasible(self):
        return (self.covered_weight if self.sukp else self.value_sum) <= self.capacity

    def additional_weight(self, j):
        cdef i64 jj = j, p, k, target, total = 0
        target = 1 if self.member_[jj] else 0
        for p in range(self.row_ptr[jj], self.row_ptr[jj + 1]):
            k = self.row_idx[p]
            if self.cover_count_[k] == target:
                total += self.weights[k]
        return total

    @property
    def stopped(self):
        return bool(self._stopped)

    # -- tabu -------------------------------------------------------------------

    cdef inline bint _bit(self, int l, i64 h) noexcept:
        return (self.tabu_bits[l, h >> 6] >> (h & 63)) & 1

    cdef bint _tabu_delta(self, i64 j, int sign) noexcept:
        # tabu status of the current solution with item j toggled (sign 0:
        # the current solution itself)
        cdef int l
        cdef i64 h
        for l in range(3):
            h = self.hsum[l]
            if sign > 0:
                h += self.hash_rows[l, j]
            elif sign < 0:
                h -= self.hash_rows[l, j]
            h = h % self.tabu_len
            if h < 0:
                h += self.tabu_len
            if not self._bit(l, h):
                return False
        return True

    def hash_triple(self):
        cdef i64 h0 = self.hsum[0] % self.tabu_len
        cdef i64 h1 = self.hsum[1] % self.tabu_len
        cdef i64 h2 = self.hsum[2] % self.tabu_len
        return (h0, h1, h2)

    def is_tabu_current(self):
        return bool(self._tabu_delta(0, 0))

    def mark_current_tabu(self):
        cdef int l
        cdef i64 h
        for l in range(3):
            h = self.hsum[l] % self.tabu_len
            self.tabu_bits[l, h >> 6] |= (<u64>1) << (h & 63)

    # -- additional-weight scans ---------------------------------------------------

    cdef void _accumulate_aw(self) noexcept:
        # AW of every non-member in one pass over the uncovered elements;
        # members never reach uncovered elements, so they are untouched
        cdef i64 t, k, wk, p, i
        self.epoch += 1
        for t in range(self.unc_len):
            k = self.unc_[t]
            wk = self.weights[k]
            if wk == 0:
                continue
            for p in range(self.col_ptr[k], self.col_ptr[k + 1]):
                i = self.col_idx[p]
                if self.aw_stamp_[i] == self.epoch:
                    self.aw_[i] += wk
                else:
                    self.aw_stamp_[i] = self.epoch
                    self.aw_[i] = wk

    cdef inline i64 _aw_of(self, i64 j) noexcept:
        return self.aw_[j] if self.aw_stamp_[j] == self.epoch else 0

    cdef inline i64 _gain_of(self, i64 j) noexcept:
        return self.values[j] if self.sukp else self._aw_of(j)

    cdef inline i64 _cost_of(self, i64 j) noexcept:
        return self._aw_of(j) if self.sukp else self.values[j]

    # -- construction scan -----------------------------------------------------------

    def greedy_candidates(self):
        cdef i64 j, cost, free
        if self.sukp:
            self._accumulate_aw()
            for j in range(self.m):
                if not self.member_[j] and self._aw_of(j) == 0:
                    self._add_item(j)
        else:
            for j in range(self.m):
                if not self.member_[j] and self.values[j] == 0:
                    self._add_item(j)
            self._accumulate_aw()
        free = self.capacity - (self.covered_weight if self.sukp
                                else self.value_sum)
        ids = []
        gains = []
        costs = []
        for j in range(self.m):
            if self.member_[j]:
                continue
            cost = self._cost_of(j)
            if cost <= 0 or cost > free:
                continue
            ids.append(j)
            gains.append(self._gain_of(j))
            costs.append(cost)
        return ids, gains, costs

    # -- visited-set memo ---------------------------------------------------------

    cdef int _memo_rehash(self) except -1:
        cdef i64 new_cap = self.memo_cap * 2
        cdef u64* nh = <u64*>_xmalloc(new_cap * sizeof(u64))
        cdef i64* no = <i64*>_xmalloc(new_cap * sizeof(i64))
        cdef int* ns = <int*>_xmalloc(new_cap * sizeof(int))
        cdef i64 mask = new_cap - 1
        cdef i64 old, idx
        memset(no, 0xFF, new_cap * sizeof(i64))
        for old in range(self.memo_cap):
            if self.memo_off_[old] < 0:
                continue
            idx = <i64>(self.memo_hash_[old] & <u64>mask)
            while no[idx] >= 0:
                idx = (idx + 1) & mask
            nh[idx] = self.memo_hash_[old]
            no[idx] = self.memo_off_[old]
            ns[idx] = self.memo_size_[old]
        PyMem_Free(self.memo_hash_)
        PyMem_Free(self.memo_off_)
        PyMem_Free(self.memo_size_)
        self.memo_hash_ = nh
        self.memo_off_ = no
        self.memo_size_ = ns
        self.memo_cap = new_cap
        return 0

    cdef int _memo_seen_or_insert(self) except -1:
        """1 when the current member set was entered before in this
        add_star call; inserts it and returns 0 otherwise.  Exact: hash
        match is verified against the stored member list.
        """
        cdef i64 j, cnt = 0
        for j in range(self.m):
            if self.member_[j]:
                self.scratch_members_[cnt] = <int>j
                cnt += 1
        cdef u64 h = self.zhash
        cdef i64 mask = self.memo_cap - 1
        cdef i64 idx = <i64>(h & <u64>mask)
        cdef i64 off
        while True:
            off = self.memo_off_[idx]
            if off < 0:
                break
            if (self.memo_hash_[idx] == h and self.memo_size_[idx] == <int>cnt
                    and memcmp(self.pool_ + off, self.scratch_members_,
                               cnt * sizeof(int)) == 0):
                return 1
            idx = (idx + 1) & mask
        cdef i64 need = self.pool_len + cnt
        cdef i64 cap = self.pool_cap
        cdef int* np_
        if need > cap:
            while cap < need:
                cap *= 2
            np_ = <int*>PyMem_Realloc(self.pool_, cap * sizeof(int))
            if np_ == NULL:
                raise MemoryError()
            self.pool_ = np_
            self.pool_cap = cap
        for j in range(cnt):
            self.pool_[self.pool_len + j] = self.scratch_members_[j]
        self.memo_hash_[idx] = h
        self.memo_off_[idx] = self.pool_len
        self.memo_size_[idx] = <int>cnt
        self.pool_len += cnt
        self.memo_count += 1
        if self.memo_count * 10 >= self.memo_cap * 7:
            self._memo_rehash()
        return 0

    cdef void _memo_clear(self) noexcept:
        memset(self.memo_off_, 0xFF, self.memo_cap * sizeof(i64))
        self.memo_count = 0
        self.pool_len = 0

    # -- add-star --------------------------------------------------------------------

    cdef void _record(self) noexcept:
        # callers just added a tabu-checked item: current solution is not tabu
        cdef i64 obj = self.value_sum if self.sukp else self.covered_weight
        cdef i64 j, cnt = 0
        if obj > self.best_value:
            self.best_value = obj
            for j in range(self.m):
                if self.member_[j]:
                    self.best_members_[cnt] = <int>j
                    cnt += 1
            self.best_len = cnt

    cdef void _select_top(self, i64* fc, i64 fc_len, i64 k) noexcept:
        # order the first k candidates by descending gain/cost, ties to the
        # smaller item id; exact via cross-multiplication (products fit i64
        # because instance totals are capped at 2^31 - 1)
        cdef i64 r, p, b, gb, cb, gp, cp, lhs, rhs, tmp
        for r in range(k):
            b = r
            gb = self._gain_of(fc[b])
            cb = self._cost_of(fc[b])
            for p in range(r + 1, fc_len):
                gp = self._gain_of(fc[p])
                cp = self._cost_of(fc[p])
                lhs = gp * cb
                rhs = gb * cp
                if lhs > rhs or (lhs == rhs and fc[p] < fc[b]):
                    b = p
                    gb = gp
                    cb = cp
            tmp = fc[r]
            fc[r] = fc[b]
            fc[b] = tmp

    cdef int _ensure_arena(self, i64 need) except -1:
        cdef i64 cap = self.arena_cap
        cdef i64* na
        if need <= cap:
            return 0
        while cap < need:
            cap *= 2
        na = <i64*>PyMem_Realloc(self.arena_, cap * sizeof(i64))
        if na == NULL:
            raise MemoryError()
        self.arena_ = na
        self.arena_cap = cap
        return 0

    cdef int _node_enter(self, i64 a_num, bint has_dl, double dl) except -1:
        cdef i64 j, cost, free, fc_len, k, undo_mark
        cdef i64* fc
        cdef Frame* fr
        self.entries += 1
        if has_dl and (self.entries & 1023) == 0 and monotonic() >= dl:
            self._stopped = True
        if self._stopped:
            return 0
        if self._memo_seen_or_insert():
            return 0
        undo_mark = self.absorb_len
        if self.sukp:
            self._accumulate_aw()
            for j in range(self.m):
                if self.member_[j] or self._aw_of(j) != 0:
                    continue
                if self._tabu_delta(j, 1):
                    continue
                self._add_item(j)
                self.absorb_log_[self.absorb_len] = <int>j
                self.absorb_len += 1
                self._record()
        else:
            for j in range(self.m):
                if self.member_[j] or self.values[j] != 0:
                    continue
                if self._tabu_delta(j, 1):
                    continue
                self._add_item(j)
                self.absorb_log_[self.absorb_len] = <int>j
                self.absorb_len += 1
                self._record()
            self._accumulate_aw()
        free = self.capacity - (self.covered_weight if self.sukp
                                else self.value_sum)
        self._ensure_arena(self.arena_top + self.m)
        fc = self.arena_ + self.arena_top
        fc_len = 0
        for j in range(self.m):
            if self.member_[j]:
                continue
            cost = self._cost_of(j)
            if cost <= 0 or cost > free:
                continue
            fc[fc_len] = j
            fc_len += 1
        if fc_len == 0:
            while self.absorb_len > undo_mark:
                self.absorb_len -= 1
                self._remove_item(self.absorb_log_[self.absorb_len])
            return 0
        k = a_num if a_num < fc_len else fc_len
        self._select_top(fc, fc_len, k)
        fr = &self.frames_[self.depth]
        fr.start = self.arena_top
        fr.length = k
        fr.nxt = 0
        fr.undo_mark = undo_mark
        fr.pending = -1
        self.depth += 1
        self.arena_top += k
        return 1

    cdef int _explore(self, i64 a_num, bint has_dl, double dl) except -1:
        cdef Frame* fr
        cdef i64 j
        self.depth = 0
        self.arena_top = 0
        self._node_enter(a_num, has_dl, dl)
        while self.depth > 0:
            fr = &self.frames_[self.depth - 1]
            if fr.pending >= 0:
                self._remove_item(fr.pending)
                fr.pending = -1
            if fr.nxt >= fr.length or self._stopped:
                while self.absorb_len > fr.undo_mark:
                    self.absorb_len -= 1
                    self._remove_item(self.absorb_log_[self.absorb_len])
                self.arena_top = fr.start
                self.depth -= 1
                continue
            j = self.arena_[fr.start + fr.nxt]
            fr.nxt += 1
            if self._tabu_delta(j, 1):
                continue
            self._add_item(j)
            fr.pending = j
            self._record()
            self._node_enter(a_num, has_dl, dl)
        return 0

    def add_star(self, a_num, deadline=None):
        cdef bint has_dl = deadline is not None
        cdef double dl = deadline if has_dl else 0.0
        cdef i64 i
        self.best_value = 0
        self.best_len = -1
        self._memo_clear()
        self._explore(a_num, has_dl, dl)
        if self.best_len < 0:
            return 0, None
        return self.best_value, [self.best_members_[i] for i in range(self.best_len)]

    # -- local search ------------------------------------------------------------------

    cdef void _select_bottom(self, i64 cnt, i64 k) noexcept:
        # order the first k members by ascending gain/cost (cost 0 counts
        # as infinite), ties to the smaller item id
        cdef i64 r, p, b, tmp
        cdef i64 gb, cb, gp, cp, lhs, rhs
        cdef bint binf, pinf, better
        for r in range(k):
            b = r
            for p in range(r + 1, cnt):
                gb = self.ls_gain_[b]
                cb = self.ls_cost_[b]
                gp = self.ls_gain_[p]
                cp = self.ls_cost_[p]
                binf = cb == 0
                pinf = cp == 0
                if pinf != binf:
                    better = binf          # finite beats infinite
                elif pinf:
                    better = self.ls_ids_[p] < self.ls_ids_[b]
                else:
                    lhs = gp * cb
                    rhs = gb * cp
                    better = lhs < rhs or (lhs == rhs
                                           and self.ls_ids_[p] < self.ls_ids_[b])
                if better:
                    b = p
            tmp = self.ls_ids_[r]
            self.ls_ids_[r] = self.ls_ids_[b]
            self.ls_ids_[b] = <int>tmp
            tmp = self.ls_gain_[r]
            self.ls_gain_[r] = self.ls_gain_[b]
            self.ls_gain_[b] = tmp
            tmp = self.ls_cost_[r]
            self.ls_cost_[r] = self.ls_cost_[b]
            self.ls_cost_[b] = tmp

    def local_search(self, r_num, a_num, deadline=None):
        cdef bint has_dl = deadline is not None
        cdef double dl = deadline if has_dl else 0.0
        cdef i64 j, i, p, k, t, cnt = 0, aw
        cdef i64 best_v = 0
        best_members = None
        for j in range(self.m):
            if self.member_[j]:
                self.ls_ids_[cnt] = <int>j
                cnt += 1
        k = r_num if r_num < cnt else cnt
        if k > 0:
            for t in range(cnt):
                i = self.ls_ids_[t]
                aw = 0
                for p in range(self.row_ptr[i], self.row_ptr[i + 1]):
                    if self.cover_count_[self.row_idx[p]] == 1:
                        aw += self.weights[self.row_idx[p]]
                if self.sukp:
                    self.ls_gain_[t] = self.values[i]
                    self.ls_cost_[t] = aw
                else:
                    self.ls_gain_[t] = aw
                    self.ls_cost_[t] = self.values[i]
            self._select_bottom(cnt, k)
            for t in range(k):
                if has_dl and monotonic() >= dl:
                    self._stopped = True
                if self._stopped:
                    break
                i = self.ls_ids_[t]
                if self.literal_removal_tabu and not self._tabu_delta(i, -1):
                    continue
                self._remove_item(i)
                value, mem = self.add_star(a_num, deadline)
                self._add_item(i)
                if value > best_v:
                    best_v = value
                    best_members = mem
        return best_v, best_members
