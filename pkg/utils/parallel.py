"""
Ordered fan-out helper shared by the sweeps.
"""

from typing import Callable, Iterable, List, Optional, TypeVar

from joblib import Parallel, delayed
from tqdm import tqdm

import config

T = TypeVar('T')
R = TypeVar('R')


def ordered_map(func: Callable[[T], R], items: Iterable[T],
                workers: int = config.DEFAULT_WORKERS,
                progress: bool = False, desc: Optional[str] = None) -> List[R]:
    """
    Apply func to every item and return results in input order.

    Args:
        func: Pure function of one item
        items: Work items
        workers: Thread count; 1 runs inline
        progress: Show a tqdm bar
        desc: Progress bar label

    Returns:
        List of results, same order as items regardless of worker count
    """
    items = list(items)
    bar = tqdm(items, desc=desc, disable=not progress, leave=False)

    if workers <= 1 or len(items) < 2:
        return [func(item) for item in bar]

    # threads share the immutable snapshots without pickling
    return Parallel(n_jobs=workers, prefer="threads")(delayed(func)(item) for item in bar)
