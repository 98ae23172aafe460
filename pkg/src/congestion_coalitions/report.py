"""Instance files, the analysis pipeline and report/figure emission.

Instance files are YAML::

    schema_version: 1
    n_players: 5
    mode: equi-divisible        # or: tabular
    links:                      # solo means, or {mu: .., table: [mu(1), .., mu(N)]}
      - 0.6
      - 0.52
    # or, for sweeps only, the links after the best one:
    # tail: [0.52, 0.5, 0.45, 0.3]
    beta: symbolic              # or {start: 0, stop: 0.5, step: 0.01}
    sweep: [0.55, 0.6, 1.1]     # optional values of the best link's mean
    epsilon: 1.0e-9
    theory_checks: true
    cycle_detection: false

Reports are JSON with ``"inf"`` standing for an unbounded interval end and
floats rounded to 9 significant digits; figure data is CSV.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import core_model as cm
from .core_model import EQUI_DIVISIBLE, TABULAR, RewardModel
from .equilibrium import solve_all
from .stability import StabilityAnalysis, analyze_stability
from .theory import (blocking_graph, bully_ne_check, classify_regime, detect_cycles, verify_theorem3,
                     verify_theorem4)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FIGURE_COLUMNS = ["mu1", "mu1_half_minus_mubar", "partition", "interval_lo", "interval_hi"]


class InstanceError(ValueError):
    """Malformed or invalid instance file."""


@dataclass
class BetaGrid:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        self.start, self.stop, self.step = float(self.start), float(self.stop), float(self.step)

    def values(self) -> list[float]:
        if self.step <= 0 or self.stop < self.start or self.start < 0:
            raise InstanceError(f"bad beta grid {self}")
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(n)]

    @classmethod
    def parse(cls, text: str) -> BetaGrid:
        """Read ``start:stop:step``."""
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise InstanceError(f"beta grid must look like start:stop:step, got {text!r}") from None
        return cls(start, stop, step)


@dataclass
class InstanceConfig:
    n_players: int
    means: list[float]
    mode: str = EQUI_DIVISIBLE
    tables: list[list[float]] | None = None
    beta: BetaGrid | None = None  # None means symbolic intervals only
    sweep: list[float] | None = None
    epsilon: float = 1e-9
    theory_checks: bool = True
    cycle_detection: bool = False
    cycle_length_bound: int = 2
    tail: list[float] | None = None  # fixed links 2..M; the best link comes from the sweep
    warnings: list[str] = field(default_factory=list, compare=False)

    def __post_init__(self):
        # plain floats so dumps and reloads are byte-identical
        self.means = [float(m) for m in self.means]
        if self.tables is not None:
            self.tables = [[float(x) for x in row] for row in self.tables]
        if self.tail is not None:
            self.tail = [float(m) for m in self.tail]
        if self.sweep is not None:
            self.sweep = [float(m) for m in self.sweep]
        self.epsilon = float(self.epsilon)

    def model(self, mu1: float | None = None) -> RewardModel:
        if self.mode == TABULAR:
            if mu1 is not None:
                raise InstanceError("mu1 sweeps need the equi-divisible model")
            return RewardModel.from_table(self.tables)
        if self.tail is not None:
            if mu1 is None:
                raise InstanceError("an instance given by its tail needs a mu1 value")
            means = [mu1] + list(self.tail)
        else:
            means = list(self.means)
        if mu1 is not None:
            means[0] = mu1
            if sorted(means, reverse=True) != means:
                self.warnings.append(f"sweep value mu1={mu1} is not the largest mean; links re-sorted")
                log.warning("%s", self.warnings[-1])
                means.sort(reverse=True)
        return RewardModel.from_means(means, self.n_players)

    def to_dict(self) -> dict:
        if self.tail is not None:
            links = None
        elif self.mode == TABULAR:
            links = [{"mu": m, "table": list(t)} for m, t in zip(self.means, self.tables)]
        else:
            links = list(self.means)
        out = {
            "schema_version": SCHEMA_VERSION,
            "n_players": self.n_players,
            "mode": self.mode,
            **({"links": links} if links is not None else {"tail": list(self.tail)}),
            "beta": "symbolic" if self.beta is None else
                    {"start": self.beta.start, "stop": self.beta.stop, "step": self.beta.step},
            "epsilon": self.epsilon,
            "theory_checks": self.theory_checks,
            "cycle_detection": self.cycle_detection,
            "cycle_length_bound": self.cycle_length_bound,
        }
        if self.sweep is not None:
            out["sweep"] = list(self.sweep)
        return out


def _require(data, key, kind, default=None, required=False):
    if key not in data:
        if required:
            raise InstanceError(f"missing required field {key!r}")
        return default
    value = data[key]
    if kind is float:
        if isinstance(value, bool):
            raise InstanceError(f"field {key!r} must be a number")
        try:
            return float(value)
        except (TypeError, ValueError):
            raise InstanceError(f"field {key!r} must be a number, got {value!r}") from None
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InstanceError(f"field {key!r} must be an integer, got {value!r}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise InstanceError(f"field {key!r} must be true or false, got {value!r}")
        return value
    return value


def _number(value, where):
    if isinstance(value, bool):
        raise InstanceError(f"{where} must be a number")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InstanceError(f"{where} must be a number, got {value!r}") from None


def parse_instance(text: str, source: str = "<string>") -> InstanceConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark is not None else source
        problem = getattr(exc, "problem", None) or str(exc)
        raise InstanceError(f"{where}: cannot parse instance: {problem}") from None
    if not isinstance(data, dict):
        raise InstanceError(f"{source}: instance must be a mapping")

    version = _require(data, "schema_version", int, required=True)
    if version != SCHEMA_VERSION:
        raise InstanceError(f"{source}: unsupported schema_version {version}")
    n = _require(data, "n_players", int, required=True)
    if n < 1:
        raise InstanceError("n_players must be at least 1")
    mode = data.get("mode", EQUI_DIVISIBLE)
    if mode not in (EQUI_DIVISIBLE, TABULAR):
        raise InstanceError(f"mode must be {EQUI_DIVISIBLE!r} or {TABULAR!r}, got {mode!r}")

    if ("links" in data) == ("tail" in data):
        raise InstanceError("give exactly one of links and tail")
    tail_form = "tail" in data
    raw_links = data["tail" if tail_form else "links"]
    if not isinstance(raw_links, list) or not raw_links:
        raise InstanceError(f"{'tail' if tail_form else 'links'} must be a non-empty list")
    if tail_form and mode == TABULAR:
        raise InstanceError("tail form needs the equi-divisible model")
    means, tables = [], []
    for idx, link in enumerate(raw_links):
        where = f"{'tail' if tail_form else 'links'}[{idx}]"
        if isinstance(link, dict):
            table = link.get("table")
            mu = link.get("mu", table[0] if isinstance(table, list) and table else None)
            mu = _number(mu, f"{where}.mu")
            if table is not None:
                if not isinstance(table, list) or len(table) != n:
                    raise InstanceError(f"{where}.table must list {n} rewards")
                table = [_number(x, f"{where}.table") for x in table]
                if abs(table[0] - mu) > 1e-12:
                    raise InstanceError(f"{where}: mu {mu} disagrees with table[0] {table[0]}")
        else:
            mu, table = _number(link, where), None
        if not mu > 0 or (table is not None and min(table) <= 0):
            raise InstanceError(f"{where}: rewards must be strictly positive")
        means.append(mu)
        tables.append(table)
    if mode == TABULAR and any(t is None for t in tables):
        raise InstanceError("tabular mode needs a full table for every link")

    warnings = []
    order = sorted(range(len(means)), key=lambda i: -means[i])
    if order != list(range(len(means))):
        warnings.append("links were not sorted by nonincreasing mean; re-sorted")
        log.warning("%s: links re-sorted by nonincreasing mean", source)
        means = [means[i] for i in order]
        tables = [tables[i] for i in order]

    beta = data.get("beta", "symbolic")
    if beta == "symbolic":
        grid = None
    elif isinstance(beta, dict):
        grid = BetaGrid(_require(beta, "start", float, required=True), _require(beta, "stop", float, required=True),
                        _require(beta, "step", float, required=True))
        grid.values()
    else:
        raise InstanceError("beta must be 'symbolic' or a {start, stop, step} mapping")

    sweep = data.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, list) or not sweep:
            raise InstanceError("sweep must be a non-empty list of numbers")
        sweep = [_number(x, "sweep") for x in sweep]
        if any(x <= 0 for x in sweep):
            raise InstanceError("sweep values must be strictly positive")
        if mode == TABULAR:
            raise InstanceError("sweep needs the equi-divisible model")
    elif tail_form:
        raise InstanceError("tail form needs a sweep list")

    epsilon = _require(data, "epsilon", float, default=1e-9)
    if not epsilon > 0:
        raise InstanceError("epsilon must be positive")
    bound = _require(data, "cycle_length_bound", int, default=2)
    if bound < 1:
        raise InstanceError("cycle_length_bound must be at least 1")
    if tail_form:
        means = [max(sweep[0], means[0])] + means
    return InstanceConfig(
        n_players=n, means=means, mode=mode, tail=means[1:] if tail_form else None,
        tables=tables if mode == TABULAR else None,
        beta=grid, sweep=sweep, epsilon=epsilon,
        theory_checks=_require(data, "theory_checks", bool, default=True),
        cycle_detection=_require(data, "cycle_detection", bool, default=False),
        cycle_length_bound=bound,
        warnings=warnings,
    )


def load_instance(path) -> InstanceConfig:
    path = Path(path)
    return parse_instance(path.read_text(), str(path))


def dump_instance(config: InstanceConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False, default_flow_style=None)


def save_instance(config: InstanceConfig, path) -> None:
    Path(path).write_text(dump_instance(config))


def _num(x):
    if x is None:
        return None
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.9g}")


def _interval(iv):
    return None if iv is None else [_num(iv[0]), _num(iv[1])]


def _profile(profile):
    return [list(block) for block in profile]


def _instance_report(config: InstanceConfig, model: RewardModel, mu1: float) -> dict:
    warnings = []
    analysis = analyze_stability(model, solve_all(model))
    cache = analysis.cache
    degenerate = False
    if cache.gc_tie is not None:
        degenerate = True
        warnings.append(f"non-unique grand-coalition optimizer: {cache.gc_tie}")
    for p in cache.no_pure_ne:
        degenerate = True
        warnings.append(f"partition {p} has no pure equilibrium; excluded from stability claims")

    n = model.n_players
    has_top_links = model.n_links >= n
    mu_bar = float(model.means[:n].mean()) if has_top_links else None
    report = {
        "mu1": _num(mu1),
        "mu1_half_minus_mubar": _num(mu1 / 2 - mu_bar) if mu_bar is not None else None,
        "n_players": n,
        "n_links": model.n_links,
        "mode": model.mode,
        "means": [_num(m) for m in model.means],
        "pessimal": [
            {
                "size": k,
                "value": _num(analysis.table[k]),
                "witness": None if analysis.table.witnesses[k] is None else {
                    "partition": str(analysis.table.witnesses[k][0]),
                    "profile": _profile(analysis.table.witnesses[k][1].profile),
                    "coalition": analysis.table.witnesses[k][2],
                },
            }
            for k in range(1, n + 1)
        ],
        "partitions": [_partition_report(ps) for ps in analysis.partitions.values()],
    }
    if config.beta is not None:
        report["stable_on_grid"] = [
            {"beta": _num(b), "partitions": [str(p) for p in analysis.stable_at(b)]}
            for b in config.beta.values()
        ]
    if config.theory_checks:
        if has_top_links:
            report["regime"] = {k: _num(v) if isinstance(v, float) else v
                                for k, v in classify_regime(model).as_dict().items()}
            confirmed, witness = bully_ne_check(model)
            report["theorems"] = {
                "theorem3": verify_theorem3(model, analysis).as_dict(),
                "theorem4": verify_theorem4(model, analysis).as_dict(),
                "bully_ne": {"confirmed": confirmed, "profile": None if witness is None else _profile(witness)},
            }
        else:
            report["regime"] = None
            report["theorems"] = None
            warnings.append("fewer links than players; regime predicates and theorem checks skipped")
    if config.cycle_detection:
        report["cycles"] = _cycles_report(model, analysis, config)
    report["warnings"] = warnings
    report["degenerate"] = degenerate
    return report


def _partition_report(ps) -> dict:
    return {
        "partition": str(ps.partition),
        "sizes": list(ps.partition.sizes),
        "status": ps.status,
        "stability_set": [_interval(iv) for iv in ps.intervals],
        "upper_threshold": _num(ps.upper_threshold),
        "equilibria": [
            {
                "profile": _profile(pair.ne.profile),
                "worths0": [_num(w) for w in pair.ne.worths],
                "interval": _interval(pair.interval),
                "beta_d": _num(pair.beta_d),
                "beta_u": _num(pair.beta_u),
                "always_blocked_by": [list(q) for q in pair.always_blocked],
            }
            for pair in ps.pairs
        ],
    }


def _cycles_report(model, analysis: StabilityAnalysis, config: InstanceConfig, beta: float | None = None) -> list:
    betas = [0.0] if beta is None and config.beta is None else [beta] if beta is not None else config.beta.values()
    out = []
    for b in betas:
        graph = blocking_graph(model, b, analysis)
        cycles = detect_cycles(graph, length_bound=config.cycle_length_bound)
        out.append({
            "beta": _num(b),
            "nodes": graph.number_of_nodes(),
            "edges": graph.number_of_edges(),
            "cycles": sorted(
                ([{"partition": str(p), "profile": _profile(prof)} for p, prof in cycle] for cycle in cycles),
                key=lambda c: json.dumps(c),
            ),
        })
    return out


def run_analysis(config: InstanceConfig, sweep: bool | None = None) -> dict:
    """Run the whole pipeline on every sweep point (or the instance as given).

    ``sweep=False`` ignores the instance's sweep list.
    """
    use_sweep = config.sweep is not None if sweep is None else sweep
    if use_sweep and config.sweep is None:
        raise InstanceError("instance has no sweep values")
    points = config.sweep if use_sweep else [None]
    instances = []
    with cm.tolerance(config.epsilon):
        for mu1 in points:
            model = config.model(mu1)
            instances.append(_instance_report(config, model, float(model.means[0]) if mu1 is None else mu1))
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "config_warnings": list(config.warnings),
        "instances": instances,
    }


def report_is_degenerate(report: dict) -> bool:
    return any(inst["degenerate"] for inst in report["instances"])


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def emit_figure_data(report: dict) -> list[dict]:
    """One row per stable interval of each partition at each sweep point.

    Partitions that are never stable get no row, i.e. a missing bar.
    """
    rows = []
    for inst in report["instances"]:
        for part in inst["partitions"]:
            for lo, hi in part["stability_set"]:
                rows.append({
                    "mu1": inst["mu1"],
                    "mu1_half_minus_mubar": inst["mu1_half_minus_mubar"],
                    "partition": part["partition"],
                    "interval_lo": lo,
                    "interval_hi": hi,
                })
    return rows


def figure_rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIGURE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row[k] is None else row[k] for k in FIGURE_COLUMNS})
    return buf.getvalue()
