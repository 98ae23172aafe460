"""Best responses and pure Nash equilibria of the game among coalitions.

Equilibria are found by filtering the full joint-profile stream, so the
returned sets are complete.  Communication cost never enters: it is a fixed
offset per coalition and cannot change anyone's best response.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import core_model as cm
from .core_model import Partition, Profile, RewardModel, canonical_profile, congestion_vector, zero_cost_worths
from .enumeration import enumerate_coalition_strategies, enumerate_joint_profiles, enumerate_partitions

log = logging.getLogger(__name__)


class NonUniqueOptimizer(Exception):
    """The grand coalition's reward maximisation has several optimizers."""

    def __init__(self, profiles, worth0):
        self.profiles = profiles
        self.worth0 = worth0
        super().__init__(f"{len(profiles)} grand-coalition optimizers tie at worth {worth0:.9g}: {profiles}")


@dataclass(frozen=True)
class NashEquilibrium:
    profile: Profile
    worths: tuple[float, ...]  # zero-cost worth per coalition


@dataclass(frozen=True)
class GcSolution:
    profile: Profile
    worth0: float


@lru_cache(maxsize=None)
def _strategy_table(size: int, n_links: int):
    strategies = enumerate_coalition_strategies(size, n_links)
    counts = np.zeros((len(strategies), n_links), dtype=int)
    for row, s in enumerate(strategies):
        np.add.at(counts[row], list(s), 1)
    counts.setflags(write=False)
    return strategies, counts


def _strategy_values(model: RewardModel, size: int, opponent_congestion) -> tuple[list, np.ndarray]:
    strategies, counts = _strategy_table(size, model.n_links)
    opp = np.asarray(opponent_congestion, dtype=int)
    if opp.shape != (model.n_links,) or np.any(opp < 0):
        raise ValueError(f"opponent congestion must be {model.n_links} nonnegative counts")
    if opp.sum() + size > model.n_players:
        raise ValueError("more players than the reward table covers")
    total = counts + opp[None, :]
    rewards = model.padded[np.arange(model.n_links)[None, :], total]
    return strategies, (counts * rewards).sum(axis=1)


def best_response(model: RewardModel, size: int, opponent_congestion) -> tuple[float, list[tuple[int, ...]]]:
    """Best total reward a coalition of ``size`` can get against fixed opponents.

    Returns the optimal value and every multiset of links attaining it
    (ties within the tolerance).
    """
    strategies, values = _strategy_values(model, size, opponent_congestion)
    best = float(values.max())
    return best, [s for s, v in zip(strategies, values) if v >= best - cm.EPS]


class _BestValueCache:
    def __init__(self, model):
        self.model = model
        self._cache = {}

    def __call__(self, size, opp):
        key = (size, opp.tobytes())
        if key not in self._cache:
            self._cache[key] = float(_strategy_values(self.model, size, opp)[1].max())
        return self._cache[key]


def _is_nash(model, partition, profile, best_value):
    gamma = congestion_vector(profile, model.n_links)
    for block, size in zip(profile, partition.sizes):
        own = np.bincount(block, minlength=model.n_links)
        value = float((own * model.padded[np.arange(model.n_links), gamma]).sum())
        if value < best_value(size, gamma - own) - cm.EPS:
            return False
    return True


def is_nash(model: RewardModel, partition: Partition, profile) -> bool:
    """True when no coalition gains by unilaterally changing its multiset."""
    profile = canonical_profile(partition, profile)
    return _is_nash(model, partition, profile, _BestValueCache(model))


def gc_optimizer(model: RewardModel, n_players: int | None = None) -> GcSolution:
    """Reward-maximising link multiset for the grand coalition.

    Raises :class:`NonUniqueOptimizer` when two multisets tie within the tolerance.
    """
    n = model.n_players if n_players is None else n_players
    best, argmax = best_response(model, n, np.zeros(model.n_links, dtype=int))
    if len(argmax) > 1:
        raise NonUniqueOptimizer([(s,) for s in argmax], best)
    return GcSolution((argmax[0],), best)


def enumerate_pure_ne(model: RewardModel, partition: Partition) -> list[NashEquilibrium]:
    """Every pure Nash equilibrium of ``partition``, in canonical sorted order.

    May be empty: a game among coalitions of different sizes need not have a
    pure equilibrium.
    """
    if partition.n_players != model.n_players:
        raise ValueError(f"partition has {partition.n_players} players, reward table covers {model.n_players}")
    if partition.is_grand:
        sol = gc_optimizer(model)
        return [NashEquilibrium(sol.profile, (sol.worth0,))]
    best_value = _BestValueCache(model)
    out = []
    for profile in enumerate_joint_profiles(partition, model.n_links):
        if _is_nash(model, partition, profile, best_value):
            out.append(NashEquilibrium(profile, tuple(float(w) for w in zero_cost_worths(model, partition, profile))))
    return out


@dataclass
class EquilibriumCache:
    """Pure equilibria of every partition of one instance.

    ``no_pure_ne`` lists partitions whose equilibrium set came back empty;
    ``gc_tie`` holds the tied optimizers when the grand coalition's
    maximisation is not unique (those optimizers are then used as its
    equilibria).
    """

    model: RewardModel
    equilibria: dict[Partition, list[NashEquilibrium]]
    no_pure_ne: list[Partition] = field(default_factory=list)
    gc_tie: NonUniqueOptimizer | None = None

    @property
    def partitions(self) -> list[Partition]:
        return list(self.equilibria)

    def __getitem__(self, partition):
        return self.equilibria[partition]


def solve_all(model: RewardModel) -> EquilibriumCache:
    equilibria, missing, tie = {}, [], None
    for partition in enumerate_partitions(model.n_players):
        try:
            nes = enumerate_pure_ne(model, partition)
        except NonUniqueOptimizer as exc:
            log.warning("%s", exc)
            tie = exc
            nes = [NashEquilibrium(p, (exc.worth0,)) for p in exc.profiles]
        if not nes:
            log.warning("partition %s has no pure equilibrium", partition)
            missing.append(partition)
        equilibria[partition] = nes
    return EquilibriumCache(model, equilibria, missing, tie)
