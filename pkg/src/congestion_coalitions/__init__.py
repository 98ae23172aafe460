"""Exhaustive stability analysis of coalition structures in atomic congestion games."""

from .core_model import (EPS, EQUI_DIVISIBLE, TABULAR, DomainError, Partition, PayoffVector, RewardModel,
                         WorthRecord, canonical_profile, coalition_utility, congestion_vector, eval_reward,
                         fair_payoff, tolerance, worth_records, zero_cost_worth, zero_cost_worths)
from .enumeration import (count_joint_profiles, enumerate_blocking_qvectors, enumerate_coalition_strategies,
                          enumerate_joint_profiles, enumerate_partitions)
from .equilibrium import (EquilibriumCache, GcSolution, NashEquilibrium, NonUniqueOptimizer, best_response,
                          enumerate_pure_ne, gc_optimizer, is_nash, solve_all)
from .report import (InstanceConfig, InstanceError, dump_instance, emit_figure_data, load_instance,
                     parse_instance, run_analysis)
from .stability import (BlockingStats, PairStability, PartitionStability, PessimalTable, StabilityAnalysis,
                        analyze_stability, blocking_stats, build_pessimal_table, classify_pair,
                        direct_blocking_oracle, partition_stability_set)
from .theory import (Verdict, blocking_graph, bully_ne_check, bully_profile, classify_regime, detect_cycles,
                     successor_partition, verify_theorem3, verify_theorem4)

__version__ = "0.1.0"
