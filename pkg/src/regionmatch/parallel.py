"""Fork-join helper used by every parallel matcher phase.

Workers are plain threads: numpy kernels release the GIL, so array-heavy
tasks overlap on real cores, while small task lists fall back to an inline
loop. Results always come back in task order, which keeps every caller
deterministic regardless of scheduling.

Executors are cached per width and live for the process, so repeated
matcher calls do not pay thread start-up costs. Concurrency stays bounded
by the requested worker count, which also bounds peak temporary memory.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_pools: dict[int, ThreadPoolExecutor] = {}
_pools_lock = threading.Lock()


def _pool(workers: int) -> ThreadPoolExecutor:
    with _pools_lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = ThreadPoolExecutor(max_workers=workers)
            _pools[workers] = pool
        return pool


def fork_join(fn: Callable[[T], R], tasks: Sequence[T], workers: int) -> list[R]:
    """Apply ``fn`` to every task, joining before returning.

    With ``workers`` <= 1 or a single task the work runs inline on the
    calling thread over the same task partition, so the observable output
    is identical either way.
    """
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    return list(_pool(workers).map(fn, tasks))
