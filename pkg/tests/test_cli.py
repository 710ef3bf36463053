"""End to end driver runs."""

import json
from pathlib import Path

import pytest

from urcalab.cli import main


def _load_report(out_dir):
    with open(Path(out_dir) / "report.json") as fh:
        return json.load(fh)


def test_invariants_run(tmp_path):
    rc = main(["--experiment", "invariants", "--out", str(tmp_path)])
    assert rc == 0
    report = _load_report(tmp_path)
    assert report["schema_version"] == 1
    assert report["passed"] is True
    inv = report["experiments"]["invariants"]
    assert inv["passed"] is True
    assert inv["results"]["car_max_defect"] == 0
    assert inv["results"]["free_ground_energy"] == 0.0


def test_report_fields_complete(tmp_path):
    main(["-e", "degeneracy", "--out", str(tmp_path)])
    report = _load_report(tmp_path)
    for key in ("config", "constants", "experiments", "timestamp", "passed"):
        assert key in report
    assert report["constants"]["den"] == pytest.approx(0.01)


def test_missing_config_exit_code(tmp_path):
    rc = main(["--config", str(tmp_path / "nope.ini"), "--out", str(tmp_path)])
    assert rc == 2


def test_bad_config_key_exit_code(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[x]\nnot_a_key = 1\n")
    rc = main(["--config", str(bad), "--out", str(tmp_path)])
    assert rc == 2


def test_deterministic_report(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        rc = main(["-e", "ground-state", "--seed", "5", "--out", str(out)])
        assert rc == 0
    lines1 = [l for l in (out1 / "report.json").read_text().splitlines() if '"timestamp"' not in l]
    lines2 = [l for l in (out2 / "report.json").read_text().splitlines() if '"timestamp"' not in l]
    assert lines1 == lines2


def test_ground_state_tables(tmp_path):
    rc = main(["-e", "ground-state", "--out", str(tmp_path)])
    assert rc == 0
    csv_path = tmp_path / "tables" / "ground_state.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header.split(",") == ["g", "e0", "bound"]


def test_ir_gap_experiment(tmp_path):
    rc = main(["-e", "ir-gap", "--out", str(tmp_path)])
    assert rc == 0
    report = _load_report(tmp_path)
    rows = report["experiments"]["ir-gap"]["results"]["rows"]
    assert [r["n"] for r in rows] == [1, 2, 3, 4]
    assert all(r["gap"] >= r["bound"] for r in rows)
    assert (tmp_path / "tables" / "ir_gap.csv").exists()


def test_pull_through_experiment(tmp_path):
    rc = main(["-e", "pull-through", "--out", str(tmp_path)])
    assert rc == 0
    report = _load_report(tmp_path)
    res = report["experiments"]["pull-through"]["results"]
    assert res["max_residual"] <= 1e-8
    assert res["occupation_within_bound"] is True


def test_coupling_override_recorded(tmp_path):
    rc = main(["-e", "degeneracy", "--coupling", "1e-6", "--out", str(tmp_path)])
    assert rc == 0
    report = _load_report(tmp_path)
    assert report["config"]["coupling"] == pytest.approx(1e-6)
    assert report["experiments"]["degeneracy"]["results"]["g"] == pytest.approx(1e-6)


def test_experiment_error_sets_exit_code(tmp_path):
    # a neutrino shell parked on a cutoff scale trips the ir-gap guard;
    # the error is recorded in the report and the exit status reflects it
    ini = tmp_path / "clash.ini"
    ini.write_text("[grid]\nneutrino_shells = 0.5\n")
    rc = main(["-e", "ir-gap", "--config", str(ini), "--out", str(tmp_path)])
    assert rc == 1
    report = _load_report(tmp_path)
    assert report["passed"] is False
    res = report["experiments"]["ir-gap"]["results"]
    assert "error" in res


def test_weak_regime_warning_recorded(tmp_path):
    # outside |g| <= g2 the gap bound is not claimed, only warned about
    rc = main(["-e", "ir-gap", "--coupling", "0.5", "--out", str(tmp_path)])
    report = _load_report(tmp_path)
    warnings = report["experiments"]["ir-gap"]["results"]["warnings"]
    assert warnings


def test_dump_operators(tmp_path):
    rc = main(["-e", "degeneracy", "--dump-operators", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "operators" / "h0.txt").exists()
    assert (tmp_path / "operators" / "hi.txt").exists()
