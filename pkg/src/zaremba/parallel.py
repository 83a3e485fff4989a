"""Worker-count resolution shared by the compiled kernels and the CLI."""
from __future__ import annotations

import os

import numba

from .errors import DomainError

ENV_THREADS = "ZAREMBA_THREADS"

# the bundled TBB is too old for numba; probing it only produces a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def resolve_workers(workers: int | None = None) -> int:
    """Explicit value, else ``$ZAREMBA_THREADS``, else the machine's CPU count."""
    if workers is None:
        env = os.environ.get(ENV_THREADS)
        if env:
            try:
                workers = int(env)
            except ValueError:
                raise DomainError(f"{ENV_THREADS} must be a positive integer, got {env!r}") from None
        else:
            workers = os.cpu_count() or 1
    if workers < 1:
        raise DomainError(f"worker count must be positive, got {workers}")
    return workers


def apply_workers(workers: int | None = None) -> int:
    """Resolve the worker count and hand it to numba; returns the count used."""
    n = resolve_workers(workers)
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    return n
