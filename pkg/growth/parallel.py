"""
Bounded Worker Pool

Per-cover computations are independent, so families fan out over a thread
pool. Results come back in input order, which keeps reports byte-identical
whatever the thread count.
"""

from typing import Callable, Iterable, List, Optional, TypeVar
from concurrent.futures import ThreadPoolExecutor
import logging
import os

logger = logging.getLogger(__name__)

THREADS_ENV = "HOMGROW_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def thread_cap(requested: Optional[int] = None) -> int:
    """Worker count: the request, capped by HOMGROW_THREADS when that is set."""
    cap = os.environ.get(THREADS_ENV)
    limit = None
    if cap:
        try:
            limit = max(1, int(cap))
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", THREADS_ENV, cap)
    threads = requested if requested and requested > 0 else (os.cpu_count() or 1)
    return min(threads, limit) if limit else threads


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """map(fn, items) on a bounded pool, results in input order."""
    items = list(items)
    workers = min(thread_cap(threads), max(len(items), 1))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
