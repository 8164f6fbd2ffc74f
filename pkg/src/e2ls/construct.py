"""Random greedy construction.

Builds a maximal feasible solution by repeated sampling: each round scans
for candidates, absorbs the cost-free ones, samples t candidates with
replacement, and adds the best-ratio sample.  Larger t approaches the
deterministic best-ratio greedy; t = 1 is uniform random construction.
"""

from __future__ import annotations

import math
import random

from .engine import make_engine
from .instance import Instance
from .state import SolutionState
from .tabu import TabuStore, build_weights


def default_sample_count(inst: Instance) -> int:
    return math.isqrt(max(inst.m, inst.n) - 1) + 1    # ceil(sqrt(...))


def greedy_fill(engine, t: int, rng: random.Random) -> None:
    """Run the construction loop on an engine holding a feasible solution."""
    if t < 1:
        raise ValueError("sampling count t must be >= 1")
    while True:
        items, gains, costs = engine.greedy_candidates()
        if len(items) == 0:
            return
        best = -1
        best_gain = best_cost = 0
        for _ in range(t):
            p = rng.randrange(len(items))
            gain, cost = int(gains[p]), int(costs[p])
            # first sample always lands; later ones must strictly beat it
            if best < 0 or gain * best_cost > best_gain * cost:
                best, best_gain, best_cost = int(items[p]), gain, cost
        engine.add(best)


def random_greedy(inst: Instance, t: int | None = None,
                  rng: random.Random | None = None,
                  seed: int = 0) -> SolutionState:
    """Standalone construction; the search loop uses greedy_fill directly."""
    if t is None:
        t = default_sample_count(inst)
    if rng is None:
        rng = random.Random(seed)
    # construction ignores tabu, so a 1-bit store satisfies the engine
    engine = make_engine(inst, build_weights(inst.m, random.Random(0)),
                         TabuStore(1))
    greedy_fill(engine, t, rng)
    return SolutionState(inst, engine.members())
