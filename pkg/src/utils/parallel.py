"""Mapa paralelo com ordem de resultado fixa."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import config

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int]) -> int:
    return max(1, int(threads if threads is not None else config.DEFAULT_THREADS))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """Aplica ``fn`` a cada item; o resultado segue a ordem de ``items``.

    Qualquer redução feita sobre a lista devolvida fica independente do
    número de threads.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
