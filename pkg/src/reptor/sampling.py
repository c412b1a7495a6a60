"""Seeded random instances for property suites."""

from __future__ import annotations

import random

from .charlat import TorusSubgroup, subgroup_from_cocharacters
from .intlin import IntMatrix, Sublattice

__all__ = ["random_subtorus", "random_sublattice", "random_matrix"]


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -3, hi: int = 3) -> IntMatrix:
    return IntMatrix(rows, cols, tuple(tuple(rng.randint(lo, hi) for _ in range(cols)) for _ in range(rows)))


def random_subtorus(rng: random.Random, r: int, rank: int | None = None, window: int = 3) -> TorusSubgroup:
    """Image subtorus of ``rank`` random cocharacters with entries in ``[-window, window]``.

    Redraws until the cocharacters are independent, so the result has exactly ``rank``.
    """
    if rank is None:
        rank = rng.randint(0, r)
    while True:
        rows = [[rng.randint(-window, window) for _ in range(r)] for _ in range(rank)]
        s = subgroup_from_cocharacters(r, rows)
        if s.rank == rank:
            return s


def random_sublattice(rng: random.Random, r: int, gens: int | None = None, window: int = 3) -> Sublattice:
    if gens is None:
        gens = rng.randint(0, r)
    return Sublattice.span(r, [[rng.randint(-window, window) for _ in range(r)] for _ in range(gens)])
