"""Block-partitioned enumeration shared by the framed and Grassmannian sides."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Sequence


class BudgetExceeded(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"search space of {size} candidates exceeds the budget of {budget} "
                         f"(raise it with --budget)")
        self.size = size
        self.budget = budget


def run_blocks(worker: Callable, blocks: Sequence, threads: int = 1) -> Iterator[list]:
    """Apply ``worker`` to each block, yielding results in block order.

    With ``threads > 1`` blocks run in worker processes; the merge order is
    still the block order, so output is identical either way.
    """
    if threads <= 1 or len(blocks) <= 1:
        for b in blocks:
            yield worker(b)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(worker, blocks)
