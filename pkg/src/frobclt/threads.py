"""Thread-count policy: FROBCLT_THREADS caps every parallel section."""

import os

import numba

# prefer OpenMP; the bundled TBB is too old and only produces a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


def thread_cap() -> int:
    raw = os.environ.get("FROBCLT_THREADS", "").strip()
    limit = numba.config.NUMBA_NUM_THREADS
    if not raw:
        return limit
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"FROBCLT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"FROBCLT_THREADS must be a positive integer, got {raw!r}")
    return min(n, limit)


def apply_thread_cap() -> int:
    n = thread_cap()
    numba.set_num_threads(n)
    return n
