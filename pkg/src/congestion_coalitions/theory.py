"""Regime predicates, theorem cross-checks and the blocking graph.

The verdict functions recompute everything by brute force and compare it
with what the closed-form regime results predict, so a disagreement points
at either a bug or a false claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import networkx as nx
import numpy as np

from . import core_model as cm
from .core_model import EQUI_DIVISIBLE, Partition, RewardModel, canonical_profile
from .enumeration import QVector, enumerate_blocking_qvectors
from .equilibrium import is_nash
from .stability import StabilityAnalysis, analyze_stability, blocking_stats

CONFIRMED = "confirmed"
NOT_APPLICABLE = "not-applicable"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class RegimeReport:
    """Which closed-form regimes an instance falls into.

    The "halved" reward of link ``a`` is ``mu_a(2)``, i.e. ``mu_a / 2`` in the
    equi-divisible model.
    """

    severe: bool
    gc_unstable_band: bool
    thm4ii_k: int | None  # smallest k >= 2 with mu_1(2) > mu_k
    thm4iii_k: int | None  # largest k <= N-1 with mu_k(2) > mu_N
    limited_resources: bool
    mu_bar: float
    bully_ne: bool  # mu_1 < 6 mu_{N-1}, a sufficient condition only; see bully_ne_check

    def as_dict(self):
        return {
            "severe": self.severe,
            "gc_unstable_band": self.gc_unstable_band,
            "thm4ii_k": self.thm4ii_k,
            "thm4iii_k": self.thm4iii_k,
            "limited_resources": self.limited_resources,
            "mu_bar": self.mu_bar,
            "bully_ne": self.bully_ne,
        }


def _check_regime_inputs(model: RewardModel, n: int):
    if n != model.n_players:
        raise ValueError(f"model covers {model.n_players} players, asked about {n}")
    if model.n_links < n:
        raise ValueError(f"regime predicates need at least as many links as players ({model.n_links} < {n})")


def classify_regime(model: RewardModel, n_players: int | None = None) -> RegimeReport:
    n = model.n_players if n_players is None else n_players
    _check_regime_inputs(model, n)
    mu = model.means[:n]  # mu[i] is mu_{i+1}
    mu_bar = float(mu.mean())
    if n < 2:
        return RegimeReport(False, False, None, None, False, mu_bar, False)
    half = model.table[:n, 1]
    mu_n = mu[-1]
    monotone = bool(np.all(np.diff(model.table, axis=0) <= cm.EPS))
    severe = bool(half[0] < mu_n - cm.EPS and monotone)
    band = bool(mu_n + cm.EPS < half[0] < mu_bar - mu_n - cm.EPS)
    k_ii = next((k for k in range(2, n + 1) if half[0] > mu[k - 1] + cm.EPS), None)
    k_iii = next((k for k in range(n - 1, 0, -1) if half[k - 1] > mu_n + cm.EPS), None)
    limited = bool(half[0] < mu_bar - mu_n - cm.EPS and half[n - 2] > mu_n + cm.EPS)
    bully = bool(mu[0] < 6 * mu[n - 2] - cm.EPS)
    return RegimeReport(severe, band, k_ii, k_iii, limited, mu_bar, bully)


@dataclass
class Verdict:
    status: str
    checks: list[str] = field(default_factory=list)
    counterexamples: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == CONFIRMED

    def as_dict(self):
        return {"status": self.status, "checks": self.checks, "counterexamples": self.counterexamples}


def _finish(checks, bad):
    return Verdict(COUNTEREXAMPLE if bad else CONFIRMED, checks, bad)


def permutation_class(partition: Partition, n_links_used: int | None = None) -> set:
    """Canonical profiles that give every player a different top link."""
    n = partition.n_players
    links = range(n if n_links_used is None else n_links_used)
    return {canonical_profile(partition, perm) for perm in permutations(links, n)}


def verify_theorem3(model: RewardModel, analysis: StabilityAnalysis | None = None) -> Verdict:
    """Under severe congestion every partition's equilibria are exactly the
    permutations of the top links, and every partition is stable at zero cost."""
    n = model.n_players
    if model.n_links < n or not classify_regime(model).severe:
        return Verdict(NOT_APPLICABLE, ["instance is not severely congested"])
    if analysis is None:
        analysis = analyze_stability(model)
    checks, bad = [], []
    for partition, nes in analysis.cache.equilibria.items():
        expected = permutation_class(partition)
        found = {ne.profile for ne in nes}
        checks.append(f"{partition}: {len(found)} equilibria, {len(expected)} permutations")
        if found != expected:
            extra, missing = sorted(found - expected), sorted(expected - found)
            bad.append(f"{partition}: equilibria differ from permutations (extra {extra[:3]}, missing {missing[:3]})")
        if not analysis[partition].contains(0.0):
            bad.append(f"{partition}: not stable at beta=0")
    return _finish(checks, bad)


def _blocked_by_merger(partition, nes, table):
    full = tuple(partition.sizes)
    return all(blocking_stats(partition, ne, full, table).blocks_at(0.0) for ne in nes)


def verify_theorem4(model: RewardModel, analysis: StabilityAnalysis | None = None) -> Verdict:
    """Equi-divisible claims: the grand coalition is never stable inside the
    unstable band, and large partitions are blocked by the grand coalition at
    zero cost when the best (or worst) link is lopsided enough."""
    if model.mode != EQUI_DIVISIBLE:
        return Verdict(NOT_APPLICABLE, ["needs the equi-divisible model"])
    n = model.n_players
    if model.n_links < n or n < 2:
        return Verdict(NOT_APPLICABLE, ["needs at least two players and as many links as players"])
    regime = classify_regime(model)
    if analysis is None:
        analysis = analyze_stability(model)
    checks, bad = [], []
    gc = Partition((n,))
    if regime.gc_unstable_band:
        checks.append("(i) grand coalition unstable for all beta")
        if analysis[gc].intervals:
            bad.append(f"(i) grand coalition stable on {analysis[gc].intervals}")
    claims = []
    if regime.thm4ii_k is not None:
        claims.append(("(ii)", regime.thm4ii_k))
    if regime.thm4iii_k is not None:
        claims.append(("(iii)", n - regime.thm4iii_k + 1))
    for label, threshold in claims:
        checks.append(f"{label} partitions with at least {threshold} coalitions blocked by the grand coalition at beta=0")
        for partition, nes in analysis.cache.equilibria.items():
            if len(partition) < threshold or not nes:
                continue
            if not _blocked_by_merger(partition, nes, analysis.table):
                bad.append(f"{label} {partition} has an equilibrium the grand coalition does not block")
            elif analysis[partition].contains(0.0):
                bad.append(f"{label} {partition} stable at beta=0")
    if not checks:
        return Verdict(NOT_APPLICABLE, ["no hypothesis holds"])
    return _finish(checks, bad)


def bully_profile(n_players: int):
    """The big coalition takes the top ``N-1`` links, the singleton doubles up on the best one."""
    return (tuple(range(n_players - 1)), (0,))


def bully_ne_check(model: RewardModel) -> tuple[bool, tuple | None]:
    """Confirm the bully equilibrium of ``(N-1, 1)`` when ``mu_1 < 6 mu_{N-1}``.

    Returns ``(False, None)`` when the sufficient condition fails; the
    profile may still be an equilibrium then, but nothing is claimed.
    """
    n = model.n_players
    if model.mode != EQUI_DIVISIBLE or n < 2 or model.n_links < n - 1:
        return False, None
    if not model.means[0] < 6 * model.means[n - 2] - cm.EPS:
        return False, None
    profile = bully_profile(n)
    return is_nash(model, Partition((n - 1, 1)), profile), profile


def successor_partition(partition: Partition, q: QVector) -> Partition:
    """Partition after ``q`` deviators unite; whatever is left of each broken
    coalition stays together."""
    rest = [l - qi for l, qi in zip(partition.sizes, q) if l - qi > 0]
    return Partition.of(sum(q), *rest)


def blocking_graph(model: RewardModel, beta: float, analysis: StabilityAnalysis | None = None) -> nx.MultiDiGraph:
    """Directed graph over (partition, equilibrium) pairs.

    An edge ``u -> v`` labelled ``q`` means the coalition described by ``q``
    blocks ``u`` at cost ``beta`` and ``v`` is one of the equilibria of the
    resulting partition.
    """
    if analysis is None:
        analysis = analyze_stability(model)
    g = nx.MultiDiGraph()
    for partition, nes in analysis.cache.equilibria.items():
        for ne in nes:
            g.add_node((partition, ne.profile))
    for partition, nes in analysis.cache.equilibria.items():
        qs = enumerate_blocking_qvectors(partition)
        for ne in nes:
            for q in qs:
                if not blocking_stats(partition, ne, q, analysis.table).blocks_at(beta):
                    continue
                target = successor_partition(partition, q)
                for ne2 in analysis.cache.equilibria[target]:
                    g.add_edge((partition, ne.profile), (target, ne2.profile), q=q)
    return g


def detect_cycles(graph: nx.DiGraph, length_bound: int | None = None) -> list[list]:
    """Elementary cycles of the blocking graph as node lists.

    Dense graphs have very many cycles; pass ``length_bound`` to keep the
    search small.
    """
    simple = nx.DiGraph(graph)
    return [list(c) for c in nx.simple_cycles(simple, length_bound=length_bound)]
