"""Gerador aleatório único e divisível.

Toda a aleatoriedade do pacote passa por ``numpy.random.SeedSequence``:
trabalho paralelo recebe sementes filhas indexadas pelo item de trabalho,
nunca pela thread, de modo que o resultado não depende do número de threads.
"""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    """Normaliza qualquer semente aceita para uma SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(0, 2**63 - 1)))
    return np.random.SeedSequence(seed)


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed_sequence(seed))


def spawn(seed: SeedLike, count: int) -> list[np.random.SeedSequence]:
    """Sementes filhas independentes, uma por item de trabalho."""
    return seed_sequence(seed).spawn(count)
