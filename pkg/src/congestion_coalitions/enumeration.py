"""Exhaustive generators over partitions, coalition strategies and blockers.

Everything here works on symmetry classes: partitions are size vectors and
coalition strategies are sorted multisets of links.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, product
from math import comb, prod
from typing import Iterator

from .core_model import Partition, Profile

QVector = tuple[int, ...]


def enumerate_partitions(n_players: int) -> list[Partition]:
    """All integer partitions of ``n_players``, grand coalition first."""
    if n_players < 1:
        raise ValueError("need at least one player")

    def parts(n, largest):
        if n == 0:
            yield ()
            return
        for first in range(min(n, largest), 0, -1):
            for rest in parts(n - first, first):
                yield (first,) + rest

    return [Partition(p) for p in parts(n_players, n_players)]


def enumerate_coalition_strategies(size: int, n_links: int) -> list[tuple[int, ...]]:
    """Every multiset of ``size`` links, as sorted tuples."""
    if size < 1 or n_links < 1:
        raise ValueError("size and link count must be positive")
    return list(combinations_with_replacement(range(n_links), size))


def count_joint_profiles(partition: Partition, n_links: int) -> int:
    return prod(comb(n_links + l - 1, l) for l in partition.sizes)


def enumerate_joint_profiles(partition: Partition, n_links: int) -> Iterator[Profile]:
    """Lazily yield every canonical joint profile of ``partition``."""
    per_size = {l: enumerate_coalition_strategies(l, n_links) for l in set(partition.sizes)}
    yield from product(*(per_size[l] for l in partition.sizes))


def enumerate_blocking_qvectors(partition: Partition) -> list[QVector]:
    """Candidate blocking coalitions as member counts drawn from each coalition.

    ``q[i]`` players come from coalition ``i``.  The empty coalition and the
    existing coalitions themselves are excluded.
    """
    out = []
    n = len(partition)
    for q in product(*(range(l + 1) for l in partition.sizes)):
        nonzero = [i for i in range(n) if q[i]]
        if not nonzero:
            continue
        if len(nonzero) == 1 and q[nonzero[0]] == partition.sizes[nonzero[0]]:
            continue
        out.append(q)
    return out
