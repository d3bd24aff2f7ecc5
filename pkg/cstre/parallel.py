import asyncio
from typing import Callable, Iterable, Optional, TypeVar

from cstre import env, utils

__all__ = ["map_in_order"]

T = TypeVar("T")
R = TypeVar("R")


async def _gather_in_order(
    func: Callable[[T], R], items: list[T], max_concurrency: int
) -> list["R | BaseException"]:
    semaphore = asyncio.Semaphore(max_concurrency)

    async def run_with_limit(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    return await asyncio.gather(*(run_with_limit(item) for item in items), return_exceptions=True)


def _map_sequential(func: Callable[[T], R], items: list[T]) -> list["R | BaseException"]:
    results: list[R | BaseException] = []
    for item in items:
        try:
            results.append(func(item))
        except Exception as e:
            results.append(e)
    return results


def _in_event_loop() -> bool:
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return False
    return True


def map_in_order(
    func: Callable[[T], R],
    items: Iterable[T],
    max_concurrency: Optional[int] = None,
) -> list["R | BaseException"]:
    """
    Apply func to every item on worker threads, at most max_concurrency at a
    time (default env.SCAN_MAX_CONCURRENCY). Results come back in input order;
    an item whose call raised yields the exception instead of a result.

    Called from inside a running event loop (a notebook, an async caller),
    the items run sequentially on the calling thread, since asyncio.run
    cannot nest.
    """
    work = list(items)
    if not work:
        return []
    limit = env.SCAN_MAX_CONCURRENCY if max_concurrency is None else max_concurrency
    if limit <= 1:
        return _map_sequential(func, work)
    if _in_event_loop():
        utils.logger.debug("parallel.map_in_order(): event loop running, mapping %d items sequentially", len(work))
        return _map_sequential(func, work)
    return asyncio.run(_gather_in_order(func, work, limit))
