import csv
import io
import json

import pytest

from conftest import FIGURE_TAIL, LIMITED_MEANS, N2_MEANS, SEVERE_MEANS, TIED_GC_TABLE
from congestion_coalitions import InstanceError, dump_instance, emit_figure_data, load_instance, parse_instance
from congestion_coalitions.report import (BetaGrid, InstanceConfig, figure_rows_to_csv, report_is_degenerate,
                                          report_to_json, run_analysis)


def _yaml(**fields):
    lines = ["schema_version: 1"]
    for k, v in fields.items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def test_load_tail_with_sweep(tmp_path):
    path = tmp_path / "fig1.yaml"
    path.write_text(_yaml(n_players=5, tail="[.52, .5, .45, .3]", sweep="[0.95, 1.1]"))
    config = load_instance(path)
    assert config.tail == list(FIGURE_TAIL) and config.sweep == [0.95, 1.1]
    assert config.model(1.1).means.tolist() == [1.1, *FIGURE_TAIL]


def test_load_minimal_two_players(tmp_path):
    path = tmp_path / "n2.yaml"
    path.write_text(_yaml(n_players=2, links="[1.0, 0.4]"))
    config = load_instance(path)
    assert config.means == [1.0, 0.4] and config.beta is None and config.epsilon == 1e-9
    assert config.theory_checks and not config.cycle_detection


def test_zero_mean_rejected():
    with pytest.raises(InstanceError, match="strictly positive"):
        parse_instance(_yaml(n_players=2, links="[1.0, 0]"))


def test_malformed_yaml_reports_line():
    with pytest.raises(InstanceError, match=r"x\.yaml:3:"):
        parse_instance("schema_version: 1\nn_players: 2\nlinks: [1.0, 0.4]]\nepsilon: 1e-9\n", "x.yaml")


@pytest.mark.parametrize("text,message", [
    (_yaml(n_players=2), "exactly one of links and tail"),
    ("n_players: 2\nlinks: [1.0]\n", "schema_version"),
    (_yaml(n_players=0, links="[1.0]"), "at least 1"),
    (_yaml(n_players=2, links="[1.0, x]"), "number"),
    (_yaml(n_players=2, links="[1.0]", mode="weird"), "mode"),
    (_yaml(n_players=2, links="[1.0]", epsilon=-1), "epsilon"),
    (_yaml(n_players=2, tail="[0.4]"), "sweep"),
    (_yaml(n_players=2, links="[1.0]", beta="{start: 1, stop: 0, step: 0.1}"), "beta grid"),
    ("schema_version: 2\nn_players: 2\nlinks: [1.0]\n", "schema_version 2"),
    ("- 1\n- 2\n", "mapping"),
])
def test_validation_errors(text, message):
    with pytest.raises(InstanceError, match=message):
        parse_instance(text)


def test_string_epsilon_is_coerced():
    assert parse_instance(_yaml(n_players=2, links="[1.0]", epsilon="'1e-7'")).epsilon == 1e-7
    # yaml reads an exponent without a dot as a string
    assert parse_instance(_yaml(n_players=2, links="[1.0]", epsilon="1e-7")).epsilon == 1e-7


def test_unsorted_links_are_sorted_with_warning(caplog):
    config = parse_instance(_yaml(n_players=2, links="[0.4, 1.0]"))
    assert config.means == [1.0, 0.4] and config.warnings
    assert "re-sorted" in caplog.text


def test_tabular_links():
    config = parse_instance(_yaml(n_players=2, mode="tabular",
                                  links="[{mu: 0.4, table: [0.4, 0.35]}, {table: [1.0, 0.7]}]"))
    assert config.model().table.tolist() == [[1.0, 0.7], [0.4, 0.35]]
    with pytest.raises(InstanceError):
        parse_instance(_yaml(n_players=2, mode="tabular", links="[1.0, 0.4]"))
    with pytest.raises(InstanceError):
        parse_instance(_yaml(n_players=2, mode="tabular", links="[{table: [1.0]}]"))


def test_beta_grid():
    assert BetaGrid(0, 0.3, 0.1).values() == [0.0, 0.1, 0.2, 0.3]
    assert BetaGrid.parse("0:1:0.5").values() == [0.0, 0.5, 1.0]
    with pytest.raises(InstanceError):
        BetaGrid.parse("0:1")


def test_run_analysis_two_players():
    config = InstanceConfig(n_players=2, means=list(N2_MEANS), beta=BetaGrid(0, 1, 0.2))
    report = run_analysis(config)
    (inst,) = report["instances"]
    sets = {p["partition"]: p["stability_set"] for p in inst["partitions"]}
    assert sets == {"[2]": [[0.0, 0.4]], "[1,1]": [[0.4, "inf"]]}
    assert [r["partitions"] for r in inst["stable_on_grid"]][:3] == [["[2]"], ["[2]"], ["[2]", "[1,1]"]]
    assert [row["value"] for row in inst["pessimal"]] == [0.5, 1.4]
    assert not inst["degenerate"] and report["schema_version"] == 1


def test_run_analysis_severe_and_limited():
    inst = run_analysis(InstanceConfig(5, list(SEVERE_MEANS), beta=BetaGrid(0, 0, 1)))["instances"][0]
    assert len(inst["partitions"]) == 7 and len(inst["stable_on_grid"][0]["partitions"]) == 7
    assert inst["theorems"]["theorem3"]["status"] == "confirmed"
    inst = run_analysis(InstanceConfig(5, list(LIMITED_MEANS), beta=BetaGrid(0, 0, 1)))["instances"][0]
    assert inst["stable_on_grid"][0]["partitions"] == []
    assert next(p for p in inst["partitions"] if p["partition"] == "[5]")["stability_set"] == []
    assert inst["regime"]["limited_resources"]


def test_run_analysis_flags_tie():
    config = InstanceConfig(2, [1.0, 0.4], mode="tabular", tables=TIED_GC_TABLE)
    report = run_analysis(config)
    assert report_is_degenerate(report)
    assert "non-unique" in report["instances"][0]["warnings"][0]


def test_run_analysis_with_cycles():
    config = InstanceConfig(5, list(LIMITED_MEANS), cycle_detection=True)
    (entry,) = run_analysis(config)["instances"][0]["cycles"]
    pairs = [{c["partition"] for c in cycle} for cycle in entry["cycles"]]
    assert {"[5]", "[4,1]"} in pairs


def test_fewer_links_than_players_skips_theory():
    inst = run_analysis(InstanceConfig(3, [1.0, 0.5]))["instances"][0]
    assert inst["theorems"] is None and inst["warnings"]


def test_sweep_resorts_small_mu1():
    config = InstanceConfig(5, [0.6, *FIGURE_TAIL], sweep=[0.5])
    inst = run_analysis(config)["instances"][0]
    assert inst["means"] == [0.52, 0.5, 0.5, 0.45, 0.3] and config.warnings


def test_round_trip_is_byte_stable(tmp_path):
    config = InstanceConfig(5, [0.95, *FIGURE_TAIL], sweep=[0.95, 1.1], beta=BetaGrid(0, 0.2, 0.05),
                            cycle_detection=True)
    path = tmp_path / "rt.yaml"
    path.write_text(dump_instance(config))
    again = load_instance(path)
    assert again == config
    assert report_to_json(run_analysis(again)) == report_to_json(run_analysis(config))


def test_json_is_sorted_and_finite():
    text = report_to_json(run_analysis(InstanceConfig(2, list(N2_MEANS))))
    data = json.loads(text)
    assert json.dumps(data, indent=2, sort_keys=True) + "\n" == text
    assert "Infinity" not in text and '"inf"' in text


def test_figure_rows():
    config = InstanceConfig(5, [0.95, *FIGURE_TAIL], tail=list(FIGURE_TAIL), sweep=[0.95, 1.1])
    report = run_analysis(config)
    rows = emit_figure_data(report)
    at = [r for r in rows if r["mu1"] == 0.95]
    assert {r["mu1_half_minus_mubar"] for r in at} == {-0.069}
    # the never-stable partition at this point gets no row
    assert "[2,2,1]" not in {r["partition"] for r in at}
    assert all(r["interval_lo"] == 0.0 for r in rows if r["partition"] == "[5]")
    assert all(r["interval_hi"] == "inf" for r in rows if r["partition"] == "[1,1,1,1,1]")
    # pure projection of the report
    expected = sum(len(p["stability_set"]) for inst in report["instances"] for p in inst["partitions"])
    assert len(rows) == expected


def test_figure_csv():
    rows = emit_figure_data(run_analysis(InstanceConfig(2, list(N2_MEANS))))
    parsed = list(csv.DictReader(io.StringIO(figure_rows_to_csv(rows))))
    assert [r["partition"] for r in parsed] == ["[2]", "[1,1]"]
    assert parsed[1]["interval_hi"] == "inf"
