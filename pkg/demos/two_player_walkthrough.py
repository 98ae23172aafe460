# Two players, two links: the smallest game where coalitions matter.
# Everything printed here can be checked by hand.
import math

from congestion_coalitions import Partition, RewardModel, analyze_stability, direct_blocking_oracle

model = RewardModel.from_means([1.0, 0.4], n_players=2)
print(model)
print("reward table mu_a(k):")
print(model.table)

analysis = analyze_stability(model)

# Alone, both players crowd onto the good link: 0.5 each beats 0.4.
# Together they split across both links and earn 1.4.
for partition, nes in analysis.cache.equilibria.items():
    for ne in nes:
        print(f"{partition}: equilibrium {ne.profile}, zero-cost worths {ne.worths}")

print("pessimal table:", analysis.table.values[1:])

# Each candidate deviation is a linear condition gamma + d * beta >= 0.
for partition, ps in analysis.partitions.items():
    for pair in ps.pairs:
        for s in pair.stats:
            print(f"{partition} q={s.q}: d={s.d_exact}, gamma={s.gamma:+.3f}, region {s.region}, "
                  f"switch at beta={s.beta_bar:.6g}")
    print(f"{partition} stable on", [(round(lo, 9), round(hi, 9)) for lo, hi in ps.intervals])

# Cross-check against the blocking definition itself on a grid
gc = Partition((2,))
(ne,) = analysis.cache[gc]
for beta in [0.0, 0.3, 0.4, 0.5, 1.0]:
    stable, witness = direct_blocking_oracle(gc, ne, beta, analysis.table)
    print(f"beta={beta}: grand coalition {'stable' if stable else f'blocked by q={witness}'}")

assert analysis[(1, 1)].intervals[0][1] == math.inf
