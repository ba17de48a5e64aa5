"""Fixed constants shared by the verifiers and the CLI."""

import os
from concurrent.futures import ThreadPoolExecutor

FLOAT_RANK_TOLERANCE = 1e-8
# cross-check threshold for |det| of an exactly certified witness minor
WITNESS_FLOAT_FLOOR = 1e-6

# symbolic Bareiss over the L_p ring is only run on witness minors this small
SYMBOLIC_DETERMINANT_MAX_COLUMNS = 8
# L_p -> value; first try p itself, then seeded random integers
SPECIALIZATION_SEEDS = (None, 20240917, 1618033)
SPECIALIZATION_RANGE = (2, 10**6)

MAX_MONOMIALS = 64

DECAY_TAIL_FRACTION = 1 / 3
DECAY_RATIO = 1e-6
DECAY_MIN_POINTS = 8
DECAY_MIN_SIGMA_MAX = 50.0
DEFAULT_A_GRID = (0.5, 1.0, 2.0)

RESIDUAL_SERIES_BOUND = 10_000

THREADS_ENV = "ARTIN_INDEP_THREADS"


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map with at most ``thread_cap()`` workers; results keep input order."""
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
