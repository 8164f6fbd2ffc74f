"""Problem instances for the set-union knapsack problem (SUKP) and the
budgeted maximum coverage problem (BMCP).

Both problems share one data model: m items with nonnegative integer values,
n elements with nonnegative integer weights, a binary item-to-element
coverage relation, and a single capacity/budget C.  SUKP maximizes total
item value subject to the weight of the covered-element union staying
within C; BMCP maximizes covered-element weight subject to total item
value staying within C.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Totals are capped so cross-multiplied ratio comparisons and hash sums fit
# comfortably in signed 64-bit arithmetic inside the search kernels.
MAX_TOTAL = 2**31 - 1


class ProblemKind(str, Enum):
    SUKP = "SUKP"
    BMCP = "BMCP"


class InstanceFormatError(ValueError):
    """Malformed instance text; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _as_int_array(seq, name: str) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


class Instance:
    """Immutable problem instance.

    Attributes:
        kind: ProblemKind.SUKP or ProblemKind.BMCP.
        m, n: item and element counts.
        capacity: knapsack capacity (SUKP) or budget (BMCP).
        values: int64 array of m item values.
        weights: int64 array of n element weights.
        coverage: tuple of m sorted int64 arrays of covered element indices.

    Treat all arrays as read-only; the searcher shares instances across
    concurrent runs.
    """

    def __init__(self, kind: ProblemKind, capacity: int,
                 values, weights, coverage: Sequence):
        self.kind = ProblemKind(kind)
        self.capacity = int(capacity)
        self.values = _as_int_array(values, "values")
        self.weights = _as_int_array(weights, "weights")
        self.coverage = tuple(np.asarray(row, dtype=np.int64) for row in coverage)
        self.m = len(self.values)
        self.n = len(self.weights)
        self._validate()
        self.values.setflags(write=False)
        self.weights.setflags(write=False)
        for row in self.coverage:
            row.setflags(write=False)

    def _validate(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("instance needs at least one item and one element")
        if self.capacity < 0:
            raise ValueError("capacity must be nonnegative")
        if len(self.coverage) != self.m:
            raise ValueError(f"expected {self.m} coverage rows, got {len(self.coverage)}")
        if self.values.min(initial=0) < 0 or self.weights.min(initial=0) < 0:
            raise ValueError("values and weights must be nonnegative")
        total_v = int(self.values.sum())
        total_w = int(self.weights.sum())
        if total_v > MAX_TOTAL or total_w > MAX_TOTAL:
            raise ValueError(
                f"total value/weight must not exceed {MAX_TOTAL} "
                "(exact 64-bit ratio arithmetic)")
        for j, row in enumerate(self.coverage):
            if row.ndim != 1:
                raise ValueError(f"coverage row {j} must be one-dimensional")
            if row.size:
                if row.min() < 0 or row.max() >= self.n:
                    raise ValueError(f"coverage row {j}: element index out of range")
                if np.any(np.diff(row) <= 0):
                    raise ValueError(f"coverage row {j}: indices must be sorted and unique")

    @classmethod
    def create(cls, kind: ProblemKind, capacity: int, values, weights,
               coverage: Iterable[Iterable[int]]) -> "Instance":
        """Build an instance, sorting and deduplicating coverage rows."""
        rows = [np.unique(np.asarray(list(row), dtype=np.int64)) for row in coverage]
        return cls(kind, capacity, values, weights, rows)

    # -- derived, cached forms ------------------------------------------------

    @cached_property
    def nnz(self) -> int:
        return sum(int(row.size) for row in self.coverage)

    @cached_property
    def total_weight(self) -> int:
        return int(self.weights.sum())

    @cached_property
    def total_value(self) -> int:
        return int(self.values.sum())

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indices, indptr) of the item-to-element relation."""
        indptr = np.zeros(self.m + 1, dtype=np.int64)
        for j, row in enumerate(self.coverage):
            indptr[j + 1] = indptr[j] + row.size
        indices = (np.concatenate(self.coverage) if self.nnz
                   else np.zeros(0, dtype=np.int64))
        return indices.astype(np.int64), indptr

    @cached_property
    def csc(self) -> tuple[np.ndarray, np.ndarray]:
        """(indices, indptr) of the element-to-item relation."""
        counts = np.zeros(self.n + 1, dtype=np.int64)
        for row in self.coverage:
            counts[1:] += np.bincount(row, minlength=self.n)
        indptr = np.cumsum(counts).astype(np.int64)
        indices = np.zeros(self.nnz, dtype=np.int64)
        fill = indptr[:-1].copy()
        for j, row in enumerate(self.coverage):
            pos = fill[row]
            indices[pos] = j
            fill[row] += 1
        return indices, indptr

    @cached_property
    def bitrows(self) -> np.ndarray:
        """Coverage as bit-packed rows, shape (m, ceil(n/64)), uint64."""
        words = (self.n + 63) // 64
        out = np.zeros((self.m, words), dtype=np.uint64)
        for j, row in enumerate(self.coverage):
            for k in row:
                out[j, k >> 6] |= np.uint64(1 << (int(k) & 63))
        return out

    # -- misc -----------------------------------------------------------------

    def covers(self, j: int, k: int) -> bool:
        row = self.coverage[j]
        pos = np.searchsorted(row, k)
        return pos < row.size and row[pos] == k

    def checksum(self) -> str:
        """Short content hash used to tag run records."""
        return hashlib.sha256(serialize_instance(self).encode()).hexdigest()[:12]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.kind == other.kind and self.capacity == other.capacity
                and np.array_equal(self.values, other.values)
                and np.array_equal(self.weights, other.weights)
                and len(self.coverage) == len(other.coverage)
                and all(np.array_equal(a, b)
                        for a, b in zip(self.coverage, other.coverage)))

    def __repr__(self) -> str:
        return (f"Instance({self.kind.value}, m={self.m}, n={self.n}, "
                f"C={self.capacity})")


@dataclass(frozen=True)
class InstanceStats:
    """Density and size summary of an instance."""

    alpha: float
    beta: float | None
    total_weight: int
    total_value: int


def compute_stats(inst: Instance) -> InstanceStats:
    """alpha = relation-matrix density; beta = C / total weight (SUKP only)."""
    alpha = inst.nnz / (inst.m * inst.n)
    beta = inst.capacity / inst.total_weight if inst.kind is ProblemKind.SUKP else None
    return InstanceStats(alpha=alpha, beta=beta,
                         total_weight=inst.total_weight,
                         total_value=inst.total_value)


# -- canonical text format ----------------------------------------------------
#
#   line 1: SUKP | BMCP
#   line 2: m n
#   line 3: C
#   line 4: m item values
#   line 5: n element weights
#   next m lines: count followed by that many 0-based element indices
#
# '#' starts a comment line; blank lines are ignored.


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, stripped


def _parse_ints(token_line: str, lineno: int, expect: int | None = None):
    try:
        vals = [int(tok) for tok in token_line.split()]
    except ValueError:
        raise InstanceFormatError("expected integers", lineno) from None
    if expect is not None and len(vals) != expect:
        raise InstanceFormatError(
            f"expected {expect} integers, got {len(vals)}", lineno)
    return vals


def parse_instance(text: str, kind: ProblemKind | str | None = None) -> Instance:
    """Parse canonical instance text.

    If `kind` is given it must match the file header; use it to catch
    flag/file mix-ups at the CLI boundary.
    """
    lines = _content_lines(text)

    def next_line(what: str):
        try:
            return next(lines)
        except StopIteration:
            raise InstanceFormatError(f"unexpected end of input, missing {what}") from None

    lineno, header = next_line("kind header")
    try:
        file_kind = ProblemKind(header.upper())
    except ValueError:
        raise InstanceFormatError(f"unknown problem kind {header!r}", lineno) from None
    if kind is not None and ProblemKind(kind) is not file_kind:
        raise InstanceFormatError(
            f"file declares {file_kind.value} but {ProblemKind(kind).value} was requested",
            lineno)

    lineno, counts = next_line("item/element counts")
    m, n = _parse_ints(counts, lineno, expect=2)
    if m < 1 or n < 1:
        raise InstanceFormatError("m and n must be positive", lineno)

    lineno, cap_line = next_line("capacity")
    (capacity,) = _parse_ints(cap_line, lineno, expect=1)
    if capacity < 0:
        raise InstanceFormatError("capacity must be nonnegative", lineno)

    lineno, value_line = next_line("item values")
    values = _parse_ints(value_line, lineno, expect=m)
    if min(values) < 0:
        raise InstanceFormatError("negative item value", lineno)

    lineno, weight_line = next_line("element weights")
    weights = _parse_ints(weight_line, lineno, expect=n)
    if min(weights) < 0:
        raise InstanceFormatError("negative element weight", lineno)

    coverage = []
    for j in range(m):
        lineno, row_line = next_line(f"coverage row {j}")
        nums = _parse_ints(row_line, lineno)
        if not nums:
            raise InstanceFormatError("empty coverage row", lineno)
        count, elems = nums[0], nums[1:]
        if count != len(elems):
            raise InstanceFormatError(
                f"row declares {count} indices but lists {len(elems)}", lineno)
        for k in elems:
            if not 0 <= k < n:
                raise InstanceFormatError(
                    f"element index {k} out of range [0, {n})", lineno)
        if len(set(elems)) != len(elems):
            raise InstanceFormatError("duplicate element index in row", lineno)
        coverage.append(sorted(elems))

    try:
        return Instance(file_kind, capacity, values, weights,
                        [np.asarray(r, dtype=np.int64) for r in coverage])
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def serialize_instance(inst: Instance) -> str:
    out = [inst.kind.value,
           f"{inst.m} {inst.n}",
           str(inst.capacity),
           " ".join(str(v) for v in inst.values),
           " ".join(str(w) for w in inst.weights)]
    for row in inst.coverage:
        out.append(" ".join([str(row.size)] + [str(int(k)) for k in row]))
    return "\n".join(out) + "\n"


def parse_dense(text: str, kind: ProblemKind | str) -> Instance:
    """Legacy reader: `m n` header, capacity, values, weights, then an
    m-by-n dense 0/1 relation matrix.  Public SUKP/BMCP benchmark files use
    this layout; the kind is not encoded, so it must be supplied.
    """
    kind = ProblemKind(kind)
    lines = _content_lines(text)
    tokens: list[tuple[int, int]] = []          # (lineno, value) stream
    for lineno, line in lines:
        for tok in line.split():
            try:
                tokens.append((lineno, int(tok)))
            except ValueError:
                raise InstanceFormatError(f"expected integer, got {tok!r}",
                                          lineno) from None
    pos = 0

    def take(what: str) -> tuple[int, int]:
        nonlocal pos
        if pos >= len(tokens):
            last = tokens[-1][0] if tokens else None
            raise InstanceFormatError(f"unexpected end of input, missing {what}", last)
        tok = tokens[pos]
        pos += 1
        return tok

    _, m = take("item count")
    _, n = take("element count")
    if m < 1 or n < 1:
        raise InstanceFormatError("m and n must be positive", tokens[0][0])
    _, capacity = take("capacity")
    values = [take("item value")[1] for _ in range(m)]
    weights = [take("element weight")[1] for _ in range(n)]
    if min(values) < 0 or min(weights) < 0:
        raise InstanceFormatError("negative value or weight")
    coverage = []
    for j in range(m):
        row = []
        for k in range(n):
            lineno, bit = take(f"matrix entry ({j},{k})")
            if bit not in (0, 1):
                raise InstanceFormatError(f"matrix entry must be 0/1, got {bit}", lineno)
            if bit:
                row.append(k)
        coverage.append(np.asarray(row, dtype=np.int64))
    if pos != len(tokens):
        raise InstanceFormatError("trailing data after matrix", tokens[pos][0])
    try:
        return Instance(kind, capacity, values, weights, coverage)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def load_instance(path, kind: ProblemKind | str | None = None) -> Instance:
    """Load canonical or legacy-dense text, auto-detected from the header."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    for _, line in _content_lines(text):
        first = line.split()[0]
        if first.upper() in (ProblemKind.SUKP.value, ProblemKind.BMCP.value):
            return parse_instance(text, kind)
        if kind is None:
            raise InstanceFormatError(
                f"{path}: legacy dense file, problem kind must be given")
        return parse_dense(text, kind)
    raise InstanceFormatError(f"{path}: empty instance file")


# -- random benchmark families -------------------------------------------------


def instance_name(inst: Instance, density: float) -> str:
    """Benchmark-style file name.

    SUKP: sukp_<m>_<n>_<alpha>_<beta> with two-decimal parameters.
    BMCP: bmcp_<m>_<n>_<density>_<C>.
    """
    if inst.kind is ProblemKind.SUKP:
        beta = inst.capacity / inst.total_weight
        return f"sukp_{inst.m}_{inst.n}_{density:.2f}_{beta:.2f}"
    return f"bmcp_{inst.m}_{inst.n}_{density:g}_{inst.capacity}"


def _check_range(name: str, rng_pair) -> tuple[int, int]:
    lo, hi = int(rng_pair[0]), int(rng_pair[1])
    if lo < 1 or lo > hi:
        raise ValueError(f"{name} must satisfy 1 <= lo <= hi, got ({lo}, {hi})")
    return lo, hi


def _resolve_capacity(kind: ProblemKind, beta, budget, weights) -> int:
    if kind is ProblemKind.SUKP:
        if beta is None or budget is not None:
            raise ValueError("SUKP generation takes beta, not an explicit budget")
        if not 0 < beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {beta}")
        return int(math.floor(beta * int(weights.sum())))
    if budget is None or beta is not None:
        raise ValueError("BMCP generation takes an explicit budget, not beta")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    return int(budget)


def _repair_rows_cols(rows: list[set[int]], m: int, n: int, rng,
                      item_group=None, elem_group=None,
                      group_items=None, group_elems=None) -> None:
    # Every item covers >= 1 element and every element is covered >= once;
    # repairs stay within the group partition when one is given.
    for j in range(m):
        if not rows[j]:
            pool = group_elems[item_group[j]] if group_elems is not None else None
            if pool is not None:
                rows[j].add(int(pool[rng.integers(len(pool))]))
            else:
                rows[j].add(int(rng.integers(n)))
    covered = np.zeros(n, dtype=bool)
    for row in rows:
        for k in row:
            covered[k] = True
    for k in range(n):
        if not covered[k]:
            pool = group_items[elem_group[k]] if group_items is not None else None
            if pool is not None:
                rows[int(pool[rng.integers(len(pool))])].add(k)
            else:
                rows[int(rng.integers(m))].add(k)


def generate_uniform(kind: ProblemKind | str, m: int, n: int, alpha: float,
                     *, beta: float | None = None, budget: int | None = None,
                     value_range=(1, 100), weight_range=(1, 100),
                     seed: int = 0) -> Instance:
    """Random instance with each relation entry set independently with
    probability alpha, then repaired so no item or element is isolated.
    Deterministic for a fixed seed.
    """
    kind = ProblemKind(kind)
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    vlo, vhi = _check_range("value_range", value_range)
    wlo, whi = _check_range("weight_range", weight_range)

    rng = np.random.default_rng(seed)
    rows = [set(np.flatnonzero(rng.random(n) < alpha).tolist()) for _ in range(m)]
    _repair_rows_cols(rows, m, n, rng)
    values = rng.integers(vlo, vhi + 1, size=m)
    weights = rng.integers(wlo, whi + 1, size=n)
    capacity = _resolve_capacity(kind, beta, budget, weights)
    return Instance.create(kind, capacity, values, weights, rows)


def generate_grouped(kind: ProblemKind | str, m: int, n: int, groups: int,
                     rho: float, *, beta: float | None = None,
                     budget: int | None = None,
                     value_range=(1, 100), weight_range=(1, 100),
                     seed: int = 0) -> Instance:
    """Random instance where items and elements are partitioned into groups
    and the relation is drawn with density rho inside each group only.
    """
    kind = ProblemKind(kind)
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if not 1 <= groups <= min(m, n):
        raise ValueError(f"groups must lie in [1, min(m, n)], got {groups}")
    if not 0 < rho <= 1:
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    vlo, vhi = _check_range("value_range", value_range)
    wlo, whi = _check_range("weight_range", weight_range)

    rng = np.random.default_rng(seed)
    item_group = _balanced_partition(m, groups, rng)
    elem_group = _balanced_partition(n, groups, rng)
    group_items = [np.flatnonzero(item_group == g) for g in range(groups)]
    group_elems = [np.flatnonzero(elem_group == g) for g in range(groups)]

    rows: list[set[int]] = [set() for _ in range(m)]
    for g in range(groups):
        elems = group_elems[g]
        for j in group_items[g]:
            hits = elems[rng.random(len(elems)) < rho]
            rows[int(j)] = set(int(k) for k in hits)
    _repair_rows_cols(rows, m, n, rng, item_group, elem_group,
                      group_items, group_elems)
    values = rng.integers(vlo, vhi + 1, size=m)
    weights = rng.integers(wlo, whi + 1, size=n)
    capacity = _resolve_capacity(kind, beta, budget, weights)
    return Instance.create(kind, capacity, values, weights, rows)


def _balanced_partition(count: int, groups: int, rng) -> np.ndarray:
    # Random permutation split into near-equal contiguous chunks; guarantees
    # every group is nonempty on both the item and element side.
    perm = rng.permutation(count)
    labels = np.zeros(count, dtype=np.int64)
    bounds = np.linspace(0, count, groups + 1).astype(int)
    for g in range(groups):
        labels[perm[bounds[g]:bounds[g + 1]]] = g
    return labels
