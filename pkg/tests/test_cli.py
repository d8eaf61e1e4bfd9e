import csv
import io
import json

import pytest

from mimox.cli import (
    Scenario,
    cmd_figure5,
    cmd_probe,
    cmd_tables,
    cmd_verify,
    main,
)


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def _csv_out(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bound_matches_known_totals(capsys):
    assert main(["bound", "--config", "3,3,3,3"]) == 0
    payload = _json_out(capsys)
    assert payload["outer_total"] == "4"
    assert payload["per_Z_totals"]["z21"] == "3"
    assert all(set(row) == {"coeffs", "rhs", "label"}
               for row in payload["region_constraints"])

    assert main(["bound", "--config", "1,1,1,1"]) == 0
    assert _json_out(capsys)["outer_total"] == "4/3"

    assert main(["bound", "--config", "3,3,3,3", "--mask", "z21"]) == 0
    assert _json_out(capsys)["outer_total"] == "3"


def test_bound_rejects_masks_without_a_bound(capsys):
    assert main(["bound", "--config", "3,3,3,3", "--mask", "ic"]) == 2
    assert "error:" in capsys.readouterr().err


def test_allocate_uses_the_reversed_network_when_it_wins(capsys):
    assert main(["allocate", "--config", "2,2,5,5", "--tmax", "2"]) == 0
    payload = _json_out(capsys)
    assert payload["dof"] == "4"
    assert payload["side"] == "reciprocal"
    assert payload["T"] == 1
    assert payload["gap_to_outer"] == "0"


def test_allocate_rank_deficient_has_no_outer_gap(capsys):
    assert main(["allocate", "--config", "4,4,4,4", "--ranks", "2,2,2,2",
                 "--tmax", "3"]) == 0
    payload = _json_out(capsys)
    assert payload["dof"] == "8"
    assert payload["gap_to_outer"] is None


def test_allocate_single_message_weight_hits_the_link_cap(capsys):
    assert main(["allocate", "--config", "3,3,3,3", "--tmax", "2",
                 "--weights", "1,0,0,0"]) == 0
    payload = _json_out(capsys)
    assert payload["dof"] == "3"
    assert payload["per_message_dof"][0] == "3"
    assert payload["gap_to_outer"] == "0"


def test_verify_passes_and_repeats_byte_identically(capsys):
    argv = ["verify", "--config", "3,3,3,3", "--tmax", "2", "--trials", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    rows = _csv_out(first)
    assert len(rows) == 3
    assert all(row["passed"] == "true" for row in rows)
    assert all(row["achieved_dof"] == "4" for row in rows)
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_verify_overallocation_yields_failure_rows(capsys):
    assert main(["verify", "--config", "3,3,3,3", "--trials", "2",
                 "--alloc", "8,0,0,0,0,0,0,0", "--alloc-t", "1"]) == 3
    rows = _csv_out(capsys.readouterr().out)
    assert all(row["passed"] == "false" for row in rows)
    assert all(row["note"] for row in rows)


def test_verify_explicit_reciprocal_allocation(capsys):
    assert main(["verify", "--config", "2,2,5,5", "--trials", "2",
                 "--alloc", "0,0,0,0,2,2,2,2", "--alloc-t", "1",
                 "--alloc-side", "reciprocal"]) == 0
    rows = _csv_out(capsys.readouterr().out)
    assert all(row["passed"] == "true" for row in rows)
    assert all(row["achieved_dof"] == "4" for row in rows)


def test_verify_jobs_do_not_change_rows():
    scenario = Scenario.from_dict({"config": [3, 3, 3, 3], "t_max": 2})
    serial, ok1 = cmd_verify(scenario, trials=3, jobs=1)
    parallel, ok2 = cmd_verify(scenario, trials=3, jobs=2)
    assert ok1 and ok2
    assert serial == parallel


def test_tables_small_range_all_equal(capsys):
    assert main(["tables", "--which", "I", "--range", "1,3"]) == 0
    rows = _csv_out(capsys.readouterr().out)
    assert rows
    assert all(row["equal"] == "true" for row in rows)
    # rows served through the reversed network say so
    starred = [row for row in rows if row["regime"] == "N/2 ≤ M < N"]
    assert starred and all(row["side"] == "reciprocal" for row in starred)


def test_tables_viii_attains_the_saturating_total():
    rows, all_equal = cmd_tables(("VIII",), (3, 8), (3, 3))
    assert all_equal
    per_m = {int(row[2]): row[16] for row in rows}
    for m in range(3, 9):
        assert per_m[m] == str(min(6, m))


def test_tables_rejects_unknown_ids(capsys):
    assert main(["tables", "--which", "XVIII"]) == 2
    assert main(["tables", "--which", "I", "--range", "4,1"]) == 2
    capsys.readouterr()


def test_figure5_curves_and_crossover():
    rows = cmd_figure5(4, (2,), (0, 1, 2, 3, 4))
    by_rc = {row[1]: row for row in rows}
    assert by_rc[2][5] == 8
    for rc in (0, 1, 2, 3, 4):
        row = by_rc[rc]
        if rc + 2 <= 4:
            assert row[5] == row[4]
        else:
            assert row[5] < row[4]


def test_figure5_renders_next_to_the_report(tmp_path, capsys):
    out = tmp_path / "curves.csv"
    assert main(["figure5", "--m", "3", "--output", str(out)]) == 0
    capsys.readouterr()
    assert out.exists()
    assert (tmp_path / "curves.png").exists()
    rows = _csv_out(out.read_text())
    assert len(rows) == 3 * 4


def test_probe_reports_zero_gap_on_the_tiny_grid():
    rows = cmd_probe((1, 1), weight_samples=2, seed=0, t_max=3)
    assert rows == [(1, 1, 1, 1, 2, 3, "0", "0")]


def test_scenario_file_with_flag_overrides(tmp_path, capsys):
    scen = tmp_path / "scen.json"
    scen.write_text(json.dumps({"config": [3, 3, 3, 3], "seed": 5,
                                "t_max": 2}))
    out = tmp_path / "rows.csv"
    bundle = tmp_path / "bundle.json"
    assert main(["verify", "--scenario", str(scen), "--seed", "7",
                 "--trials", "2", "--output", str(out),
                 "--bundle", str(bundle)]) == 0
    capsys.readouterr()
    data = json.loads(bundle.read_text())
    assert data["inputs"]["seed"] == 7
    assert data["outputs"]["payload"] == out.read_text()
    assert data["versions"]["mimox"]
    rows = _csv_out(out.read_text())
    assert rows[0]["seed"] == "7"


def test_scenario_rejects_unknown_keys(tmp_path, capsys):
    scen = tmp_path / "scen.json"
    scen.write_text(json.dumps({"config": [3, 3, 3, 3], "bogus": 1}))
    assert main(["bound", "--scenario", str(scen)]) == 2
    assert "unknown scenario keys" in capsys.readouterr().err


def test_invalid_inputs_exit_two(capsys):
    assert main(["bound", "--config", "3,3"]) == 2
    assert main(["allocate", "--config", "3,3,3,3", "--weights", "0,0,0,0"]) == 2
    assert main(["verify", "--config", "3,3,3,3", "--trials", "0"]) == 2
    assert main(["verify", "--config", "3,3,3,3", "--alloc", "1,2,3"]) == 2
    capsys.readouterr()


def test_scenario_round_trip():
    data = {"config": [4, 3, 2, 1], "ranks": [2, 2, 1, 1], "mask": "z21",
            "t_max": 5, "weights": ["1", "2", "1/2", "1"], "seed": 9,
            "tol_rank": 1e-9, "tol_res": 1e-7,
            "channel_mode": "time-varying"}
    scenario = Scenario.from_dict(data)
    assert scenario.to_dict() == data
    with pytest.raises(Exception):
        Scenario.from_dict({"config": [4, 3, 2, 1], "channel_mode": "warped"})
