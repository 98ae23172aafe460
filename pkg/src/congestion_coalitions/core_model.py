"""Congestion game primitives: reward models, partitions, profiles and worths.

Links are indexed from 0 in code, so link ``0`` is the best link :math:`a_1`.
Congestion counts ``k`` are ordinary counts starting at 1.
"""

from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# tolerance for every strict comparison between computed rewards
EPS = 1e-9

EQUI_DIVISIBLE = "equi-divisible"
TABULAR = "tabular"

Profile = tuple[tuple[int, ...], ...]


@contextmanager
def tolerance(eps: float):
    """Temporarily change the comparison tolerance used by the whole package."""
    global EPS
    if not eps > 0:
        raise ValueError("tolerance must be positive")
    old, EPS = EPS, eps
    try:
        yield
    finally:
        EPS = old


class DomainError(ValueError):
    """Raised when a link index or congestion count is out of range."""


@dataclass(frozen=True, eq=False)
class RewardModel:
    """Per-player link rewards ``mu_a(k)`` for ``k = 1..n_players``.

    ``table[a, k - 1]`` is the reward each of ``k`` players gets when they
    share link ``a``.  Use :meth:`from_means` for the equi-divisible model
    (``mu_a(k) = mu_a / k``) and :meth:`from_table` for arbitrary tables.
    """

    table: np.ndarray
    mode: str = TABULAR
    _padded: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 1:
            raise ValueError(f"reward table must be a non-empty 2-d array, got shape {table.shape}")
        if self.mode not in (EQUI_DIVISIBLE, TABULAR):
            raise ValueError(f"unknown reward mode {self.mode!r}")
        if not np.all(np.isfinite(table)) or np.any(table <= 0):
            raise ValueError("all rewards must be finite and strictly positive")
        solo = table[:, 0]
        if np.any(np.diff(solo) > 0):
            raise ValueError(f"links must be sorted by nonincreasing solo reward, got {solo.tolist()}")
        table.setflags(write=False)
        padded = np.hstack([np.zeros((table.shape[0], 1)), table])
        padded.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_padded", padded)

    @classmethod
    def from_means(cls, means: Sequence[float], n_players: int) -> RewardModel:
        means = np.asarray(means, dtype=float)
        if n_players < 1:
            raise ValueError("need at least one player")
        k = np.arange(1, n_players + 1)
        return cls(means[:, None] / k[None, :], mode=EQUI_DIVISIBLE)

    @classmethod
    def from_table(cls, table) -> RewardModel:
        return cls(np.asarray(table, dtype=float), mode=TABULAR)

    @property
    def n_links(self) -> int:
        return self.table.shape[0]

    @property
    def n_players(self) -> int:
        return self.table.shape[1]

    @property
    def means(self) -> np.ndarray:
        """Solo rewards ``mu_a = mu_a(1)``."""
        return self.table[:, 0]

    @property
    def padded(self) -> np.ndarray:
        """Table with a leading zero column, so ``padded[a, 0] == 0``."""
        return self._padded

    def reward(self, link: int, k: int) -> float:
        return eval_reward(self, link, k)

    def with_first_mean(self, mu1: float) -> RewardModel:
        """Equi-divisible copy with the best link's mean replaced by ``mu1``."""
        if self.mode != EQUI_DIVISIBLE:
            raise ValueError("sweeping the first mean needs the equi-divisible model")
        means = self.means.copy()
        means[0] = mu1
        return RewardModel.from_means(means, self.n_players)

    def __repr__(self):
        if self.mode == EQUI_DIVISIBLE:
            return f"RewardModel.from_means({self.means.tolist()}, n_players={self.n_players})"
        return f"RewardModel.from_table({self.table.tolist()})"


def eval_reward(model: RewardModel, link: int, k: int) -> float:
    """Reward per player when ``k`` players share ``link``."""
    if not 0 <= link < model.n_links:
        raise DomainError(f"link {link} outside 0..{model.n_links - 1}")
    if not 1 <= k <= model.n_players:
        raise DomainError(f"congestion {k} outside 1..{model.n_players}")
    return float(model.table[link, k - 1])


@dataclass(frozen=True)
class Partition:
    """Coalition sizes of ``N`` identical players, largest first."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"coalition sizes must be positive, got {sizes}")
        if any(b > a for a, b in zip(sizes, sizes[1:])):
            raise ValueError(f"coalition sizes must be nonincreasing, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def of(cls, *sizes: int) -> Partition:
        return cls(tuple(sorted(sizes, reverse=True)))

    @property
    def n_players(self) -> int:
        return sum(self.sizes)

    @property
    def starts(self) -> tuple[int, ...]:
        """Offset of the first member of each coalition in a flat assignment."""
        out, acc = [], 0
        for s in self.sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    @property
    def is_grand(self) -> bool:
        return len(self.sizes) == 1

    @property
    def is_all_alone(self) -> bool:
        return all(s == 1 for s in self.sizes)

    def __len__(self):
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def __getitem__(self, i):
        return self.sizes[i]

    def __str__(self):
        return "[" + ",".join(map(str, self.sizes)) + "]"


def canonical_profile(partition: Partition, profile: Sequence) -> Profile:
    """Sort each coalition's links so profiles that differ only by
    relabelling players inside a coalition compare equal.

    ``profile`` is either a flat assignment of ``N`` links or one sequence
    of links per coalition.
    """
    if len(profile) and all(isinstance(x, (int, np.integer)) for x in profile):
        if len(profile) != partition.n_players:
            raise ValueError(f"flat assignment has {len(profile)} entries, expected {partition.n_players}")
        blocks = [profile[s:s + l] for s, l in zip(partition.starts, partition.sizes)]
    else:
        blocks = list(profile)
        if len(blocks) != len(partition):
            raise ValueError(f"profile has {len(blocks)} coalition blocks, expected {len(partition)}")
        for block, l in zip(blocks, partition.sizes):
            if len(block) != l:
                raise ValueError(f"coalition block {tuple(block)} does not match size {l}")
    return tuple(tuple(sorted(int(a) for a in block)) for block in blocks)


def flatten_profile(profile: Profile) -> tuple[int, ...]:
    return tuple(a for block in profile for a in block)


def congestion_vector(profile: Iterable, n_links: int) -> np.ndarray:
    """Number of players on each link.

    Accepts a flat assignment or a per-coalition profile.
    """
    links = []
    for x in profile:
        if isinstance(x, (int, np.integer)):
            links.append(int(x))
        else:
            links.extend(int(a) for a in x)
    if links and (min(links) < 0 or max(links) >= n_links):
        raise DomainError(f"profile uses a link outside 0..{n_links - 1}")
    return np.bincount(np.asarray(links, dtype=int), minlength=n_links)


def _own_reward(model: RewardModel, block: Sequence[int], gamma: np.ndarray) -> float:
    # distinct links, each weighted by the coalition's own multiplicity
    return sum(c * model.table[a, gamma[a] - 1] for a, c in sorted(Counter(block).items()))


def coalition_utility(model: RewardModel, partition: Partition, profile: Profile, i: int,
                      beta: float = 0.0) -> float:
    """Total reward of coalition ``i`` minus its communication cost ``(l_i - 1) * beta``.

    Congestion on each link counts every player, inside and outside the coalition.
    """
    if beta < 0:
        raise ValueError("communication cost must be nonnegative")
    profile = canonical_profile(partition, profile)
    gamma = congestion_vector(profile, model.n_links)
    return float(_own_reward(model, profile[i], gamma)) - (partition.sizes[i] - 1) * beta


def zero_cost_worth(model: RewardModel, partition: Partition, profile: Profile, i: int) -> float:
    return coalition_utility(model, partition, profile, i, 0.0)


def zero_cost_worths(model: RewardModel, partition: Partition, profile: Profile) -> np.ndarray:
    """Zero-cost worth of every coalition of ``partition`` under ``profile``."""
    profile = canonical_profile(partition, profile)
    gamma = congestion_vector(profile, model.n_links)
    return np.array([_own_reward(model, block, gamma) for block in profile], dtype=float)


@dataclass(frozen=True)
class WorthRecord:
    coalition_index: int
    zero_cost_worth: float
    size: int

    def at(self, beta: float) -> float:
        return self.zero_cost_worth - (self.size - 1) * beta


def worth_records(model: RewardModel, partition: Partition, profile: Profile) -> list[WorthRecord]:
    return [WorthRecord(i, float(w), l)
            for i, (w, l) in enumerate(zip(zero_cost_worths(model, partition, profile), partition.sizes))]


@dataclass(frozen=True, eq=False)
class PayoffVector:
    """Per-player payoffs; ``feasible`` is False when some payoff is negative."""

    values: np.ndarray
    feasible: bool


def fair_payoff(partition: Partition, worths: Sequence[float]) -> PayoffVector:
    """Split each coalition's worth equally among its members."""
    worths = np.asarray(worths, dtype=float)
    if worths.shape != (len(partition),):
        raise ValueError(f"expected {len(partition)} worths, got {worths.shape}")
    values = np.repeat(worths / np.asarray(partition.sizes), partition.sizes)
    return PayoffVector(values, bool(np.all(values >= -EPS)))
