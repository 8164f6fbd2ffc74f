"""Search-kernel backend selection.

Two interchangeable kernels exist: a compiled extension (_ckern, built by
setup.py when a C compiler is present) and a numpy fallback (_pyengine).
Both follow identical search trajectories; the compiled one is just
faster.  Selection order:

  1. the E2LS_BACKEND environment variable ("c" or "py"), if set;
  2. the compiled kernel when importable;
  3. the numpy fallback.
"""

from __future__ import annotations

import os

import numpy as np

from ._pyengine import PySearchEngine
from .instance import Instance, ProblemKind
from .tabu import TabuStore

try:
    from . import _ckern
except ImportError:
    _ckern = None

_ENV_VAR = "E2LS_BACKEND"


def available_backends() -> list[str]:
    return ["py"] if _ckern is None else ["c", "py"]


def default_backend() -> str:
    env = os.environ.get(_ENV_VAR)
    if env:
        if env not in ("c", "py"):
            raise ValueError(f"{_ENV_VAR} must be 'c' or 'py', got {env!r}")
        if env == "c" and _ckern is None:
            raise RuntimeError(
                f"{_ENV_VAR}=c but the compiled kernel is not installed")
        return env
    return "c" if _ckern is not None else "py"


def make_engine(inst: Instance, hash_rows: np.ndarray, store: TabuStore,
                literal_removal_tabu: bool = False,
                backend: str | None = None):
    """Build a search engine over `inst` sharing `store`'s bit vectors.

    hash_rows is the (3, m) per-run weight matrix from tabu.build_weights.
    """
    if backend is None:
        backend = default_backend()
    row_idx, row_ptr = inst.csr
    col_idx, col_ptr = inst.csc
    args = (inst.kind is ProblemKind.SUKP, inst.capacity,
            inst.values, inst.weights,
            row_idx, row_ptr, col_idx, col_ptr,
            np.ascontiguousarray(hash_rows, dtype=np.int64),
            store.bits, store.length, literal_removal_tabu)
    if backend == "py":
        return PySearchEngine(*args)
    if backend == "c":
        if _ckern is None:
            raise RuntimeError("compiled kernel not installed; use backend='py'")
        return _ckern.CSearchEngine(*args)
    raise ValueError(f"unknown backend {backend!r}")
