"""Solution-based tabu store.

A solution S maps to three hash values h_l(S) = (sum of W_l[j] for j in S)
mod L, where the weight tables are W_l[j] = floor(j ** gamma_l) computed on
1-based item numbers and then independently shuffled per run.  Each hash
is one bit in a length-L bit vector; a solution is tabu when all three of
its bits are set.  Bits are only ever set, never cleared.
"""

from __future__ import annotations

import random

import numpy as np

# gamma exponents 1.2, 1.6, 2.0 as exact fractions (p, q) with gamma = p/q
GAMMA_EXPONENTS: tuple[tuple[int, int], ...] = ((6, 5), (8, 5), (2, 1))

DEFAULT_TABU_LEN = 100_000_000


def floor_power(j: int, p: int, q: int) -> int:
    """floor(j ** (p/q)) for positive integers, exactly.

    A float seed gets the answer close; the integer test r**q <= j**p then
    corrects any rounding on either side.
    """
    if j < 1:
        raise ValueError("j must be positive")
    r = int(float(j) ** (p / q))
    while r > 0 and r**q > j**p:
        r -= 1
    while (r + 1) ** q <= j**p:
        r += 1
    return r


def unshuffled_rows(m: int) -> np.ndarray:
    """The three weight tables before shuffling, shape (3, m) int64.

    Row l holds floor((j+1) ** gamma_l) for item j (items are numbered from
    1 inside the hash so item 0 cannot vanish from every sum).
    """
    rows = np.zeros((len(GAMMA_EXPONENTS), m), dtype=np.int64)
    for l, (p, q) in enumerate(GAMMA_EXPONENTS):
        for j in range(m):
            rows[l, j] = floor_power(j + 1, p, q)
    return rows


def build_weights(m: int, rng: random.Random) -> np.ndarray:
    """Per-run weight tables: each row of `unshuffled_rows` shuffled
    independently.  Consumes exactly three shuffles from `rng`.
    """
    rows = unshuffled_rows(m)
    for l in range(rows.shape[0]):
        row = rows[l].tolist()
        rng.shuffle(row)
        rows[l] = row
    return rows


def hash_solution(members, weights: np.ndarray, length: int) -> tuple[int, ...]:
    """The three hash values of an item subset."""
    out = []
    for l in range(weights.shape[0]):
        total = 0
        for j in members:
            total += int(weights[l, j])
        out.append(total % length)
    return tuple(out)


class TabuStore:
    """Three bit vectors of `length` bits each, packed into uint64 words."""

    def __init__(self, length: int = DEFAULT_TABU_LEN):
        if length < 1:
            raise ValueError("tabu length must be positive")
        self.length = length
        words = (length + 63) // 64
        self.bits = np.zeros((len(GAMMA_EXPONENTS), words), dtype=np.uint64)

    def insert(self, hashes) -> None:
        for l, h in enumerate(hashes):
            self.bits[l, h >> 6] |= np.uint64(1 << (h & 63))

    def contains(self, hashes) -> bool:
        for l, h in enumerate(hashes):
            if not (int(self.bits[l, h >> 6]) >> (h & 63)) & 1:
                return False
        return True

    def fill_counts(self) -> list[int]:
        """Set bits per vector; a load diagnostic."""
        return [int(np.unpackbits(self.bits[l].view(np.uint8)).sum())
                for l in range(self.bits.shape[0])]
