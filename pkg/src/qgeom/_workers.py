"""Optional process-level parallelism, sized by QGEOM_THREADS.

Unset means a single worker (plain ``map``); 0 means one per CPU.
Results always come back in input order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .errors import ConfigError


def worker_count() -> int:
    raw = os.environ.get("QGEOM_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"QGEOM_THREADS={raw!r} is not an integer") from exc
    if n < 0:
        raise ConfigError("QGEOM_THREADS must be nonnegative")
    return n or (os.cpu_count() or 1)


def pmap(fn, items) -> list:
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
