"""Order-preserving parallel map capped by ``IMPURITY_THERMO_THREADS``."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

__all__ = ["thread_count", "ordered_map"]

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "IMPURITY_THERMO_THREADS"


def thread_count() -> int:
    """Worker count from the environment; unset, empty or ``0`` means automatic."""
    raw = os.environ.get(ENV_VAR, "").strip()
    try:
        n = int(raw) if raw else 0
    except ValueError:
        n = 0
    if n < 0:
        n = 0
    return n or min(32, os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``[fn(x) for x in items]``, possibly evaluated concurrently; order is kept."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
