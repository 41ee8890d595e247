"""Thread fan-out and seed streams.

Work items always get their own ``SeedSequence`` child, derived from the
caller's seed and never from scheduling order, so results are identical
for any thread count. ``EXPANDER_FORGE_THREADS`` caps the pool size.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def thread_count() -> int:
    raw = os.environ.get("EXPANDER_FORGE_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    avail = os.cpu_count() or 1
    return max(1, min(cap, avail) if cap > 0 else avail)


def map_items(fn, items) -> list:
    """``[fn(x) for x in items]``, possibly in parallel, order preserved."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def spawn(seed, n: int, key=None) -> list[np.random.SeedSequence]:
    """``n`` independent child streams of ``seed``.

    With ``key`` (a list of ints, one per child) each child depends only on
    the seed and its own key, not on how many siblings were requested.
    """
    if isinstance(seed, np.random.SeedSequence):
        base_entropy, base_key = seed.entropy, tuple(seed.spawn_key)
    else:
        base_entropy, base_key = int(seed), ()
    if key is None:
        key = range(n)
    return [np.random.SeedSequence(base_entropy, spawn_key=base_key + (int(k),)) for k in key]
