"""Ordered map over independent chunks, optionally across processes.

Results always come back in chunk order, so merges are identical for any
worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def chunk_map(fn: Callable[[T], R], chunks: Iterable[T], workers: int = 1) -> list[R]:
    chunks = list(chunks)
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=min(workers, len(chunks))) as ex:
        return list(ex.map(fn, chunks))
