import json
import subprocess
import sys

import pytest

from expknap.cli import main, report_from_csv
from expknap.core import Instance, load_instance


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lowerbound_exact_output(capsys):
    code, out, _ = run(capsys, "lowerbound", "--n", "10")
    assert code == 0
    assert out == '{"i_star":5,"success_bound":0.6}\n'


def test_adversarial_exact_output(capsys):
    assert run(capsys, "adversarial", "--n", "5")[1] == '{"value":0.2}\n'
    report = json.loads(run(capsys, "adversarial", "--n", "7", "--check")[1])
    assert report["value"] == pytest.approx(report["vertex_value"], abs=1e-12)


def test_secretary_report(capsys):
    code, out, err = run(capsys, "secretary", "--n", "1000", "--trials", "20000", "--seed", "7")
    report = json.loads(out)
    assert code == 0
    assert report["seed"] == 7 and report["params"]["t"] == 367
    assert report["success_rate"] == pytest.approx(0.632, abs=0.02)
    assert "success=" in err


def test_secretary_exhaustive(capsys):
    report = json.loads(run(capsys, "secretary", "--n", "8", "--t", "2", "--exhaustive")[1])
    assert report["success_hits"] * 8 == report["trials"] * 6


def test_ksecretary_requires_k(capsys):
    code, _, err = run(capsys, "ksecretary", "--n", "10")
    assert code == 2 and "usage" in err


def test_knapsack_report(capsys):
    code, out, _ = run(capsys, "knapsack", "--n", "50", "--trials", "300", "--algorithm", "aug-on")
    report = json.loads(out)
    assert code == 0 and report["algorithm"] == "aug_on"
    assert report["ratio"] == pytest.approx(report["mean_value"] / report["denominator_value"])


@pytest.mark.parametrize("argv", [
    ["knapsack", "--n", "10", "--capacity-aug", "2.5"],
    ["knapsack", "--n", "10", "--capacity-aug", "1"],
    ["secretary"],
    ["secretary", "--n", "10", "--t", "11"],
    ["secretary", "--n", "10", "--trials", "0"],
    ["secretary", "--n", "9", "--exhaustive"],
    ["knapsack", "--n", "10", "--t", "3"],
    ["secretary", "--n", "10", "--generator", "nope"],
    ["histogram", "--n", "5", "--format", "xml"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2
    assert "usage" in capsys.readouterr().err


def test_unreadable_instance(capsys, tmp_path):
    code, _, err = run(capsys, "oracle", "--instance", str(tmp_path / "missing.csv"))
    assert code == 1 and "error" in err


def test_malformed_instance_names_line(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("id,value,weight\n0,1.0,0.5\n1,abc,0.5\n")
    code, _, err = run(capsys, "oracle", "--instance", str(path))
    assert code == 1 and "line 3" in err


def test_zero_weight_instance(tmp_path):
    path = tmp_path / "zero.csv"
    path.write_text("id,value,weight\n0,1.0,0.0\n")
    with pytest.raises(ValueError):
        load_instance(path)


def test_overweight_after_rescale(capsys, tmp_path):
    path = tmp_path / "heavy.csv"
    path.write_text("id,value,weight\n0,1.0,5\n1,2.0,12\n")
    code, _, err = run(capsys, "oracle", "--instance", str(path), "--capacity", "10")
    assert code == 1 and "weight" in err


def test_instance_file_oracle(capsys, tmp_path):
    path = tmp_path / "three.csv"
    path.write_text("id,value,weight\n0,6,0.5\n1,4,0.5\n2,1,0.5\n")
    assert load_instance(path).n == 3
    report = json.loads(run(capsys, "oracle", "--instance", str(path))[1])
    assert report["fractional_value"] == 10 and report["integral_value"] == 10


def test_json_and_csv_instances_agree(tmp_path):
    inst = Instance.from_arrays([3.0, 1.5, 0.25], [0.2, 0.9, 1.0])
    (tmp_path / "a.csv").write_text("id,value,weight\n" + "".join(
        f"{it.id},{it.value!r},{it.weight!r}\n" for it in inst.items))
    (tmp_path / "a.json").write_text(json.dumps(inst.to_dict()))
    assert load_instance(tmp_path / "a.csv") == load_instance(tmp_path / "a.json") == inst


def test_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("EXPKNAP_SEED", "13")
    a = run(capsys, "secretary", "--n", "30", "--trials", "200")[1]
    b = run(capsys, "secretary", "--n", "30", "--trials", "200", "--seed", "13")[1]
    assert a == b and json.loads(a)["seed"] == 13
    monkeypatch.setenv("EXPKNAP_SEED", "x")
    assert run(capsys, "secretary", "--n", "30", "--trials", "5")[0] == 2


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "lowerbound", "--n", "10", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text()) == {"i_star": 5, "success_bound": 0.6}


@pytest.mark.parametrize("argv", [
    ["histogram", "--n", "200", "--trials", "500"],
    ["secretary", "--n", "50", "--trials", "400", "--generator", "exponential"],
    ["knapsack", "--n", "40", "--trials", "300"],
    ["lowerbound", "--n", "12"],
])
def test_csv_matches_json(capsys, argv):
    as_json = json.loads(run(capsys, *argv)[1])
    as_csv = report_from_csv(run(capsys, *argv, "--format", "csv")[1])
    if "histogram" in as_json:
        as_json["histogram"] = {k: v for k, v in as_json["histogram"].items()}
    assert as_csv == as_json


def test_histogram_default_threshold(capsys):
    report = json.loads(run(capsys, "histogram", "--n", "100", "--trials", "50")[1])
    assert report["params"]["t"] == 37


def test_repeatable_and_jobs_independent(capsys):
    argv = ["knapsack", "--n", "60", "--trials", "400", "--seed", "3"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    c = run(capsys, *argv, "--jobs", "4")[1]
    assert a == b == c


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "expknap", "lowerbound", "--n", "10"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == '{"i_star":5,"success_bound":0.6}\n'
    assert "i*=5" in proc.stderr
