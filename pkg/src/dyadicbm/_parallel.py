"""Deterministic block-parallel execution.

Blocks are computed possibly out of order by a thread pool but absorbed in
block order, so accumulated results never depend on the worker count.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor


def ordered_block_map(starts, make, absorb, workers: int = 1) -> None:
    if workers <= 1:
        for start in starts:
            absorb(make(start))
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        pending = deque()
        for start in starts:
            pending.append(pool.submit(make, start))
            if len(pending) > workers + 1:
                absorb(pending.popleft().result())
        while pending:
            absorb(pending.popleft().result())
