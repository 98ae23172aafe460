# Three five-player instances that land in different regimes.
# Severe congestion keeps everyone apart and every partition is stable for free.
# A weak last link (limited resources) leaves nothing stable at zero cost.
# A dominant first link makes the grand coalition the only stable one at zero cost.
from congestion_coalitions import RewardModel, analyze_stability, classify_regime, verify_theorem3, verify_theorem4

instances = {
    "severe": [0.55, 0.52, 0.5, 0.45, 0.3],
    "limited": [0.6, 0.52, 0.5, 0.45, 0.1],
    "major link": [1.1, 0.52, 0.5, 0.45, 0.3],
}


def fmt(intervals):
    if not intervals:
        return "never"
    return " u ".join(f"[{lo:.4g}, {hi:.4g}]" for lo, hi in intervals)


for name, means in instances.items():
    model = RewardModel.from_means(means, 5)
    regime = classify_regime(model)
    analysis = analyze_stability(model)
    print(f"\n== {name}: mu = {means}")
    print("   regime flags:", {k: v for k, v in regime.as_dict().items() if k != "mu_bar" and v not in (False, None)})
    for partition, ps in analysis.partitions.items():
        print(f"   {str(partition):12s} {len(ps.pairs):4d} equilibria   stable {fmt(ps.intervals)}")
    print("   stable at beta=0:", [str(p) for p in analysis.stable_at(0.0)])
    print("   severe-congestion verdict:", verify_theorem3(model, analysis).status)
    print("   equi-divisible verdict:   ", verify_theorem4(model, analysis).status)
