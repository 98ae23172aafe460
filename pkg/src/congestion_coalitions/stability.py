"""Pessimal anticipation, blocking statistics and beta-stability sets.

A blocking coalition ``C`` is described by ``q``, the number of its members
taken from each coalition of the current partition.  Under the fair payoff,
the pair (partition, equilibrium) resists ``C`` at cost ``beta`` iff

    gamma + d * beta >= 0,
    d     = sum_i q_i / l_i - 1,
    gamma = sum_i (q_i / l_i) * w_i - pessimal[|C|],

where ``w_i`` are zero-cost worths.  Sorting candidates by the signs of
``(d, gamma)`` turns the family of linear conditions into one closed interval
per pair, or nothing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from . import core_model as cm
from .core_model import Partition, RewardModel, fair_payoff
from .enumeration import QVector, enumerate_blocking_qvectors
from .equilibrium import EquilibriumCache, NashEquilibrium, solve_all

log = logging.getLogger(__name__)

INF = math.inf

Interval = tuple[float, float]


@dataclass
class PessimalTable:
    """Worst zero-cost worth a coalition of each size can be pushed to.

    ``values[k]`` for ``k = 1..N`` (index 0 unused).  ``witnesses[k]`` is the
    (partition, equilibrium, coalition index) attaining it, or None when no
    partition with a size-``k`` coalition has a pure equilibrium.
    """

    values: list[float]
    witnesses: list

    def __getitem__(self, k):
        return self.values[k]

    def at(self, k: int, beta: float) -> float:
        return self.values[k] - (k - 1) * beta

    @property
    def n_players(self) -> int:
        return len(self.values) - 1


def build_pessimal_table(model: RewardModel, cache: EquilibriumCache | None = None) -> PessimalTable:
    """Minimise a size-``k`` coalition's worth over all arrangements of the
    other players and all pure equilibria of the resulting game."""
    if cache is None:
        cache = solve_all(model)
    n = model.n_players
    values = [INF] * (n + 1)
    witnesses = [None] * (n + 1)
    for partition, nes in cache.equilibria.items():
        for ne in nes:
            for i, (size, w) in enumerate(zip(partition.sizes, ne.worths)):
                if w < values[size]:
                    values[size] = w
                    witnesses[size] = (partition, ne, i)
    values[0] = 0.0
    for k in range(1, n + 1):
        if values[k] == INF:
            log.warning("no partition containing a coalition of size %d has a pure equilibrium", k)
    return PessimalTable(values, witnesses)


@dataclass(frozen=True)
class BlockingStats:
    q: QVector
    d_exact: Fraction
    gamma: float

    @property
    def d(self) -> float:
        return float(self.d_exact)

    @property
    def size(self) -> int:
        return sum(self.q)

    @property
    def beta_bar(self) -> float | None:
        """Cost at which this candidate's condition switches, or None when ``d == 0``."""
        if self.d_exact == 0:
            return None
        return -self.gamma / float(self.d_exact)

    @property
    def region(self) -> str:
        """One of ``'--'``, ``'+-'``, ``'++'``, ``'-+'`` by signs of (d, gamma)."""
        if self.gamma < 0:
            return "--" if self.d_exact <= 0 else "+-"
        return "++" if self.d_exact >= 0 else "-+"

    def blocks_at(self, beta: float) -> bool:
        return self.gamma + self.d * beta < -cm.EPS


def blocking_stats(partition: Partition, ne: NashEquilibrium, q: QVector, table: PessimalTable) -> BlockingStats:
    if len(q) != len(partition) or any(not 0 <= qi <= l for qi, l in zip(q, partition.sizes)) or sum(q) < 1:
        raise ValueError(f"invalid blocking vector {q} for partition {partition}")
    shares = [Fraction(qi, l) for qi, l in zip(q, partition.sizes)]
    d = sum(shares) - 1
    gamma = sum(float(s) * w for s, w in zip(shares, ne.worths)) - table[sum(q)]
    if abs(gamma) <= cm.EPS:
        gamma = 0.0
    return BlockingStats(tuple(q), d, gamma)


@dataclass
class PairStability:
    """Stability of one (partition, equilibrium) pair as a function of beta."""

    partition: Partition
    ne: NashEquilibrium
    stats: list[BlockingStats]
    beta_d: float
    beta_u: float
    always_blocked: list[QVector]

    @property
    def interval(self) -> Interval | None:
        if self.always_blocked or self.beta_d > self.beta_u + cm.EPS:
            return None
        return (self.beta_d, max(self.beta_u, self.beta_d))

    @property
    def stable_somewhere(self) -> bool:
        return self.interval is not None

    def contains(self, beta: float, tol: float | None = None) -> bool:
        tol = cm.EPS if tol is None else tol
        iv = self.interval
        return iv is not None and iv[0] - tol <= beta <= iv[1] + tol


def classify_pair(partition: Partition, ne: NashEquilibrium, table: PessimalTable) -> PairStability:
    stats = [blocking_stats(partition, ne, q, table) for q in enumerate_blocking_qvectors(partition)]
    lower = [s.beta_bar for s in stats if s.region == "+-"]
    upper = [s.beta_bar for s in stats if s.region == "-+"]
    return PairStability(
        partition, ne, stats,
        beta_d=max(lower, default=0.0),
        beta_u=min(upper, default=INF),
        always_blocked=[s.q for s in stats if s.region == "--"],
    )


def union_intervals(intervals: Iterable[Interval], tol: float | None = None) -> list[Interval]:
    tol = cm.EPS if tol is None else tol
    merged: list[list[float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


OK = "ok"
NO_PURE_NE = "no-pure-ne"


@dataclass
class PartitionStability:
    partition: Partition
    status: str
    pairs: list[PairStability] = field(default_factory=list)

    @property
    def intervals(self) -> list[Interval]:
        """Values of beta at which at least one pair is stable."""
        return union_intervals(p.interval for p in self.pairs if p.interval is not None)

    def contains(self, beta: float, tol: float | None = None) -> bool:
        tol = cm.EPS if tol is None else tol
        return any(lo - tol <= beta <= hi + tol for lo, hi in self.intervals)

    @property
    def upper_threshold(self) -> float | None:
        """Largest per-pair upper bound among pairs never blocked at every beta.

        This is the max-over-equilibria threshold; it can exceed the top of
        :attr:`intervals` when such a pair's lower bound lies above its upper one.
        """
        uppers = [p.beta_u for p in self.pairs if not p.always_blocked]
        return max(uppers) if uppers else None


def partition_stability_set(partition: Partition, nes: list[NashEquilibrium], table: PessimalTable) -> PartitionStability:
    if not nes:
        return PartitionStability(partition, NO_PURE_NE)
    ps = PartitionStability(partition, OK, [classify_pair(partition, ne, table) for ne in nes])
    ivs = ps.intervals
    top = ivs[-1][1] if ivs else None
    if ps.upper_threshold is not None and top != ps.upper_threshold:
        log.info("partition %s: union of pair intervals tops out at %s, max-over-equilibria threshold is %s",
                 partition, top, ps.upper_threshold)
    return ps


@dataclass
class StabilityAnalysis:
    cache: EquilibriumCache
    table: PessimalTable
    partitions: dict[Partition, PartitionStability]

    @property
    def model(self) -> RewardModel:
        return self.cache.model

    def __getitem__(self, partition):
        if not isinstance(partition, Partition):
            partition = Partition(tuple(partition))
        return self.partitions[partition]

    def stable_at(self, beta: float) -> list[Partition]:
        return [p for p, ps in self.partitions.items() if ps.contains(beta)]


def analyze_stability(model: RewardModel, cache: EquilibriumCache | None = None) -> StabilityAnalysis:
    """Equilibria, pessimal table and stability sets of every partition."""
    if cache is None:
        cache = solve_all(model)
    table = build_pessimal_table(model, cache)
    partitions = {p: partition_stability_set(p, nes, table) for p, nes in cache.equilibria.items()}
    return StabilityAnalysis(cache, table, partitions)


def direct_blocking_oracle(partition: Partition, ne: NashEquilibrium, beta: float,
                           table: PessimalTable) -> tuple[bool, QVector | None]:
    """Check blocking at one ``beta`` straight from the definition.

    Walks every labelled subset of players that is not already a coalition,
    pays everyone their fair share at cost ``beta`` and asks whether the
    subset could guarantee strictly more under pessimal anticipation.
    Returns ``(stable, q)`` with ``q`` describing the first blocker found.
    """
    if beta < 0:
        raise ValueError("communication cost must be nonnegative")
    worths = np.asarray(ne.worths) - (np.asarray(partition.sizes) - 1) * beta
    payoff = fair_payoff(partition, worths).values
    owner = np.repeat(np.arange(len(partition)), partition.sizes)
    existing = {frozenset(np.flatnonzero(owner == i).tolist()) for i in range(len(partition))}
    n = partition.n_players
    for k in range(1, n + 1):
        anticipated = table[k] - (k - 1) * beta
        for members in combinations(range(n), k):
            if frozenset(members) in existing:
                continue
            if payoff[list(members)].sum() < anticipated - cm.EPS:
                q = tuple(int(np.sum(owner[list(members)] == i)) for i in range(len(partition)))
                return False, q
    return True, None
