from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def run_concurrently(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Applies `func` to every item, on up to `workers` threads.

    Results come back in the order of `items` whatever the completion order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="cell") as pool:
        return list(pool.map(func, items))
