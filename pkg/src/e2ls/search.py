"""Top-level solver loop: greedy construction, remove-and-rebuild local
search, solution-based tabu, and restarts, all under a wall-clock cutoff.
"""

from __future__ import annotations

import dataclasses
import random
import time
from dataclasses import dataclass
from typing import Callable

from .construct import default_sample_count, greedy_fill
from .engine import make_engine
from .instance import Instance, ProblemKind
from .tabu import DEFAULT_TABU_LEN, TabuStore, build_weights

# removal/addition candidate-set sizes that work well per problem kind
KIND_DEFAULTS = {ProblemKind.SUKP: (2, 2), ProblemKind.BMCP: (5, 5)}


@dataclass(frozen=True)
class SearchParams:
    """Solver knobs.  t, r_num, a_num default per instance kind at resolve
    time: t = ceil(sqrt(max(m, n))), r_num = a_num = 2 for SUKP and 5 for
    BMCP.

    cutoff_seconds is the hard wall-clock budget.  max_iterations and
    target_value are optional deterministic stops: the loop also ends after
    that many local-search calls, or once the best value reaches the
    target.  literal_removal_tabu switches the removal step to the variant
    that only explores previously-visited reduced solutions (kept for
    experimentation; the default explores every removal).
    """

    t: int | None = None
    r_num: int | None = None
    a_num: int | None = None
    tabu_len: int = DEFAULT_TABU_LEN
    cutoff_seconds: float = 10.0
    seed: int = 0
    max_iterations: int | None = None
    target_value: int | None = None
    literal_removal_tabu: bool = False
    backend: str | None = None

    def resolve(self, inst: Instance) -> "SearchParams":
        r_def, a_def = KIND_DEFAULTS[inst.kind]
        resolved = dataclasses.replace(
            self,
            t=self.t if self.t is not None else default_sample_count(inst),
            r_num=self.r_num if self.r_num is not None else r_def,
            a_num=self.a_num if self.a_num is not None else a_def)
        if resolved.t < 1:
            raise ValueError("t must be >= 1")
        if resolved.r_num < 1 or resolved.a_num < 1:
            raise ValueError("r_num and a_num must be >= 1")
        if resolved.cutoff_seconds <= 0:
            raise ValueError("cutoff_seconds must be positive")
        if resolved.tabu_len < 1:
            raise ValueError("tabu_len must be >= 1")
        if resolved.max_iterations is not None and resolved.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        return resolved


@dataclass
class RunRecord:
    """Everything observable about one solver run."""

    kind: str
    best_value: int
    best_solution: list[int]
    time_to_best_seconds: float
    wall_time_seconds: float
    iterations: int             # local-search calls
    restarts: int               # greedy re-invocations after empty results
    adds_explored: int          # add_star node entries
    seed: int
    params: dict
    backend: str

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def solve(inst: Instance, params: SearchParams | None = None,
          trace: Callable[[float, int], None] | None = None) -> RunRecord:
    """Run the full search on one instance.

    `trace`, when given, is called as trace(elapsed_seconds, value) at
    every improvement of the global best.
    """
    params = (params or SearchParams()).resolve(inst)
    rng = random.Random(params.seed)
    store = TabuStore(params.tabu_len)
    hash_rows = build_weights(inst.m, rng)
    engine = make_engine(inst, hash_rows, store,
                         params.literal_removal_tabu, params.backend)

    start = time.monotonic()
    deadline = start + params.cutoff_seconds
    best_value = 0
    best_members: list[int] = []
    time_to_best = 0.0
    iterations = 0
    restarts = 0

    greedy_fill(engine, params.t, rng)
    while time.monotonic() < deadline:
        if params.max_iterations is not None and iterations >= params.max_iterations:
            break
        if params.target_value is not None and best_value >= params.target_value:
            break
        value, members = engine.local_search(params.r_num, params.a_num, deadline)
        iterations += 1
        if members is not None:
            engine.set_solution(members)
            engine.mark_current_tabu()
            if value > best_value:
                best_value = value
                best_members = members
                time_to_best = time.monotonic() - start
                if trace is not None:
                    trace(time_to_best, value)
        if engine.stopped:
            break
        if members is None:
            restarts += 1
            engine.clear()
            greedy_fill(engine, params.t, rng)

    return RunRecord(
        kind=inst.kind.value,
        best_value=best_value,
        best_solution=sorted(best_members),
        time_to_best_seconds=time_to_best,
        wall_time_seconds=time.monotonic() - start,
        iterations=iterations,
        restarts=restarts,
        adds_explored=engine.entries,
        seed=params.seed,
        params=dataclasses.asdict(params),
        backend=engine.backend,
    )


# -- thin functional fronts over the engine moves, mainly for tests ------------


def _engine_at(inst: Instance, members, store: TabuStore | None,
               hash_rows, literal_removal_tabu: bool = False,
               backend: str | None = None):
    if store is None:
        store = TabuStore(1)        # empty store: nothing is tabu
    if hash_rows is None:
        hash_rows = build_weights(inst.m, random.Random(0))
    engine = make_engine(inst, hash_rows, store, literal_removal_tabu, backend)
    for j in members:
        engine.add(int(j))
    return engine


def add_star(inst: Instance, members, a_num: int, *,
             store: TabuStore | None = None, hash_rows=None,
             deadline: float | None = None,
             backend: str | None = None) -> tuple[int, list[int] | None]:
    """One addition move from the given member set.

    With an empty tabu store and a_num = m this enumerates every feasible
    superset, so it doubles as an exact solver at small m.
    """
    engine = _engine_at(inst, members, store, hash_rows, backend=backend)
    return engine.add_star(a_num, deadline)


def local_search(inst: Instance, members, r_num: int, a_num: int, *,
                 store: TabuStore | None = None, hash_rows=None,
                 deadline: float | None = None,
                 literal_removal_tabu: bool = False,
                 backend: str | None = None) -> tuple[int, list[int] | None]:
    """One removal-and-rebuild pass from the given member set."""
    engine = _engine_at(inst, members, store, hash_rows,
                        literal_removal_tabu, backend)
    return engine.local_search(r_num, a_num, deadline)
