import csv
import json
import subprocess
import sys

import pytest

from peerde.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main([*argv, "--out", str(out)])
    doc = json.loads(out.read_text()) if code == 0 and out.exists() else None
    return code, doc


def test_optimize_writes_json_and_csv(tmp_path):
    code, doc = run(tmp_path, "optimize", "--fn", "sphere", "--dim", "3", "--gens", "50", "--np", "12", "--seed", "7")
    assert code == 0
    assert doc["manifest"]["command"] == "optimize" and doc["manifest"]["seed"] == 7
    rows = list(csv.reader(open(tmp_path / "out.convergence.csv")))
    assert rows[0] == ["generation", "best_fitness"] and len(rows) == 52
    assert len(doc["result"]["history"]) == 51


def test_optimize_zero_generations_one_row(tmp_path):
    code, _ = run(tmp_path, "optimize", "--gens", "0", "--csv", str(tmp_path / "c.csv"))
    assert code == 0
    assert len((tmp_path / "c.csv").read_text().splitlines()) == 2


@pytest.mark.parametrize("argv", [
    ["optimize", "--fn", "nosuch"],
    ["optimize", "--strategy", "bogus"],
    ["optimize", "--f", "3"],
    ["optimize", "--np", "3"],
    ["simulate", "--reps", "0"],
    ["fit", "missing.csv"],
])
def test_usage_errors_exit_2(tmp_path, argv):
    assert main([*argv, "--out", str(tmp_path / "x.json")]) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["optimize", "--dim", "abc"])
    assert info.value.code == 2


def test_report_hand_fixture(tmp_path, hand8_path):
    code, doc = run(tmp_path, "report", str(hand8_path), "--csv", str(tmp_path / "t.csv"))
    assert code == 0
    q8 = doc["groups"]["all"]["thresholds"]["q8"]
    assert q8["counts"] == {"1.5": 6, "2.0": 5, "2.5": 3, "3.0": 2} and q8["n"] == 8
    assert doc["groups"]["child"]["thresholds"]["q8"]["counts"]["2.0"] == 3
    assert doc["groups"]["parent"]["respondent_stats"] == {"mean": 1.5, "min": 1, "max": 2, "n_respondents": 2}
    assert doc["groups"]["all"]["median_profile"]["q1"] == 2.25
    assert doc["rejections"] == []
    assert "student" not in doc["groups"]
    assert len((tmp_path / "t.csv").read_text().splitlines()) == 1 + 3 * 8 * 4


def test_report_group_filter(tmp_path, hand8_path):
    code, doc = run(tmp_path, "report", str(hand8_path), "--group", "parent")
    assert code == 0 and list(doc["groups"]) == ["parent"]
    assert main(["report", str(hand8_path), "--group", "student"]) == 3


def test_report_empty_and_missing(tmp_path, hand8_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(hand8_path.read_text().splitlines()[0] + "\n")
    assert main(["report", str(empty)]) == 3
    assert main(["report", str(tmp_path / "missing.csv")]) == 1


def test_report_partial_ingestion(tmp_path, hand8_path):
    lines = hand8_path.read_text().splitlines()
    lines[3] = lines[3].replace(",2,M,0", ",1.7,M,0")
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    code, doc = run(tmp_path, "report", str(bad))
    assert code == 0
    assert doc["rejections"] == [{"line": 4, "reason": "invalid rating"}]
    assert doc["n_records"] == 7


@pytest.fixture
def fixture_csv(tmp_path):
    path = tmp_path / "fixture.csv"
    assert main(["export-fixture", "--out", str(path), "--seed", "5", "--n-subjects", "150",
                 "--male-shift", "1.0"]) == 0
    assert (tmp_path / "fixture.truth.csv").exists()
    return path


def test_fit_model_deterministic(tmp_path, fixture_csv):
    argv = ["fit", str(fixture_csv), "--model", "M1", "--seed", "1", "--gens", "200"]
    code, a = run(tmp_path, *argv)
    assert code == 0
    _, b = run(tmp_path, *argv)
    a["manifest"].pop("timestamp"), b["manifest"].pop("timestamp")
    assert a == b
    assert a["fit"]["spec"]["id"] == "M1" and a["fit"]["lr_p_value"] < 0.05


def test_fit_m3_null_fixture(tmp_path):
    # one record per subject so rows are independent; q8 drawn independently of sex
    import numpy as np
    from conftest import make_record
    from peerde.survey import Dataset, export

    rng = np.random.default_rng(0)
    recs = [make_record(rid=f"r{i}", sid=f"s{i}", q9=str(rng.choice(["F", "M"])),
                        q8=float(rng.integers(0, 7)) / 2) for i in range(200)]
    path = tmp_path / "null.csv"
    export(Dataset(tuple(recs)), path)
    code, doc = run(tmp_path, "fit", str(path), "--model", "M3", "--seed", "1", "--gens", "150")
    assert code == 0
    assert doc["fit"]["lr_statistic"] < 2.706 and doc["fit"]["lr_p_value"] > 0.1


def test_fit_custom_auc(tmp_path, fixture_csv):
    code, doc = run(tmp_path, "fit", str(fixture_csv), "--response", "q8", "--regressors", "q5,q4",
                    "--criterion", "auc", "--gens", "100")
    assert code == 0
    assert doc["fit"]["criterion"] == "auc" and 0.5 < doc["fit"]["auc"] <= 1.0


def test_fit_auc_on_ordered_model_is_usage_error(tmp_path, fixture_csv):
    assert main(["fit", str(fixture_csv), "--model", "M1", "--criterion", "auc",
                 "--out", str(tmp_path / "x.json")]) == 2


def test_fit_degenerate_exit_4(tmp_path):
    path = tmp_path / "const.csv"
    assert main(["export-fixture", "--out", str(path), "--n-subjects", "30", "--bias-zero", "--noise", "0"]) == 0
    text = path.read_text().splitlines()
    header, rows = text[0], [r.split(",") for r in text[1:]]
    for r in rows:
        r[13] = "F"
    path.write_text(header + "\n" + "\n".join(",".join(r) for r in rows) + "\n")
    assert main(["fit", str(path), "--model", "M3", "--out", str(tmp_path / "f.json")]) == 4


def test_simulate_noiseless(tmp_path):
    code, doc = run(tmp_path, "simulate", "--bias-zero", "--noise", "0", "--reps", "3", "--n-subjects", "40")
    assert code == 0
    assert all(v == 0.0 for rep in doc["replications"] for v in rep.values())
    assert set(doc["win_rate"]) == {"peer_vs_self", "peer_vs_parent"}


def test_config_file_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gens": 4, "np": 9, "reps": 2}))
    code, doc = run(tmp_path, "optimize", "--config", str(cfg), "--np", "11", "--dim", "2")
    assert code == 0
    assert doc["result"]["generations"] == 4 and doc["manifest"]["config"]["np"] == 11
    monkeypatch.setenv("PEERDE_CONFIG", str(cfg))
    code, doc = run(tmp_path, "optimize", "--dim", "2")
    assert doc["manifest"]["config"]["np"] == 9
    monkeypatch.setenv("PEERDE_CONFIG", str(tmp_path / "nope.json"))
    assert main(["optimize"]) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "peerde", "optimize", "--gens", "2", "--dim", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["generations"] == 2
