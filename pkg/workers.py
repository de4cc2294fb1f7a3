"""Chunked fan-out over source vertices."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from config import THREAD_SETTINGS

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def chunked(items: Sequence[T], size: int) -> List[Sequence[T]]:
    size = max(1, size)
    return [items[i:i + size] for i in range(0, len(items), size)]


def map_chunks(func: Callable[[Sequence[T]], R], items: Sequence[T],
               workers: Optional[int] = None, chunk_size: Optional[int] = None) -> List[R]:
    """
    Apply ``func`` to consecutive chunks of ``items``.

    Results come back in chunk order whatever the worker count, so callers
    that merge them get identical output single- or multi-threaded.
    """
    workers = THREAD_SETTINGS["workers"] if workers is None else workers
    chunk_size = THREAD_SETTINGS["chunk_size"] if chunk_size is None else chunk_size
    chunks = chunked(items, chunk_size)
    if workers <= 1 or len(chunks) <= 1:
        return [func(chunk) for chunk in chunks]
    logger.debug(f"Fanning {len(items)} items over {workers} threads in {len(chunks)} chunks")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, chunks))
