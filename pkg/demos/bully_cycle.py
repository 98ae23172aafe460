# With scarce resources nothing settles at zero cost.
# The grand coalition loses a member who would rather sit with the weak link,
# then the four remaining players pile onto the best link with the deserter
# until merging back pays again.
from congestion_coalitions import (Partition, RewardModel, analyze_stability, blocking_graph, bully_ne_check,
                                   detect_cycles)

model = RewardModel.from_means([0.6, 0.52, 0.5, 0.45, 0.1], 5)
analysis = analyze_stability(model)

ok, profile = bully_ne_check(model)
print("bully equilibrium of (4,1):", profile, "confirmed" if ok else "not an equilibrium")

graph = blocking_graph(model, beta=0.0, analysis=analysis)
print(f"blocking graph at beta=0: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")

gc = (Partition((5,)), analysis.cache[Partition((5,))][0].profile)
bully = (Partition((4, 1)), profile)
for u, v in [(gc, bully), (bully, gc)]:
    qs = sorted({d["q"] for d in graph.get_edge_data(u, v).values()})
    print(f"  {u[0]} {u[1]} -> {v[0]} {v[1]} via q={qs}")

two_cycles = [c for c in detect_cycles(graph, length_bound=2) if len(c) == 2]
print(f"{len(two_cycles)} two-step cycles, e.g.")
for c in sorted(two_cycles, key=repr)[:3]:
    print("  ", " <-> ".join(f"{p} {prof}" for p, prof in c))

# A little communication cost calms things down
for beta in [0.05, 0.1, 0.15, 0.2]:
    g = blocking_graph(model, beta, analysis)
    print(f"beta={beta}: {g.number_of_edges()} edges, stable: {[str(p) for p in analysis.stable_at(beta)]}")
