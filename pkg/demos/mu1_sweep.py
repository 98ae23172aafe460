# Raise the best link's mean against a fixed tail and watch stability bars move.
# Writes the figure data to mu1_sweep.csv next to this script and draws crude text bars.
from pathlib import Path

from congestion_coalitions import emit_figure_data, load_instance, run_analysis
from congestion_coalitions.report import figure_rows_to_csv

here = Path(__file__).parent
config = load_instance(here / "instances" / "mu1_sweep.yaml")
report = run_analysis(config)
rows = emit_figure_data(report)
(here / "mu1_sweep.csv").write_text(figure_rows_to_csv(rows))

WIDTH, BETA_MAX = 50, 0.5


def bar(lo, hi):
    hi = BETA_MAX if hi == "inf" else min(hi, BETA_MAX)
    a, b = int(lo / BETA_MAX * WIDTH), max(int(hi / BETA_MAX * WIDTH), int(lo / BETA_MAX * WIDTH) + 1)
    return " " * a + "#" * (b - a)


for inst in report["instances"]:
    print(f"\nmu1 = {inst['mu1']}   mu1/2 - mean = {inst['mu1_half_minus_mubar']:+.3f}")
    for part in inst["partitions"]:
        if part["partition"] == "[1,1,1,1,1]":
            continue
        cells = [bar(lo, hi) for lo, hi in part["stability_set"]] or ["(never stable)"]
        print(f"  {part['partition']:10s} |{cells[0]}")
print(f"\nbeta axis 0 .. {BETA_MAX}, {len(rows)} rows written to mu1_sweep.csv")
