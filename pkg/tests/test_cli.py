import json

import numpy as np
import pytest

from normcc.cli import main
from normcc.pipeline import (ConfigError, RunConfig, ratio_sweep,
                             report_json, run)


@pytest.fixture
def path_file(tmp_path):
    f = tmp_path / "path.txt"
    f.write_text("a b\nb c\n")
    return str(f)


def test_round_with_oracle(path_file, tmp_path, capsys):
    out = tmp_path / "rep.json"
    rc = main(["round", "--input", path_file, "--oracle", "--out", str(out),
               "--norms", "top:1", "--norms", "lp:inf"])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1
    assert rep["oracle"]["max_ratio"] <= 63.3
    assert rep["norms"]["top:1"] == rep["norms"]["lp:inf"]
    assert set(rep["clustering"]["assignment"]) == {"a", "b", "c"}
    # reports always echo the parameters, graph stats, and the ledger
    assert rep["config"]["beta"] == 0.5858
    assert rep["graph"] == {"n": 3, "m": 2, "source": path_file}
    assert "ledger" in rep and "fractional" in rep


def test_round_complete3_reports_exact_optimal(capsys):
    rc = main(["round", "--gen", "complete:3", "--oracle"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["norms"] == {"lp:1": 0.0, "lp:2": 0.0, "lp:inf": 0.0}
    assert rep["oracle"]["exact_optimal"] is True
    assert rep["oracle"]["max_ratio"] == 0.0
    assert rep["oracle"]["violations_k"] == []


def test_build_lp_outputs_solution(path_file, capsys):
    rc = main(["build-lp", "--input", path_file])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["default"] == 1
    assert payload["slack"] == 0.0
    vals = {(u, v): x for u, v, x in payload["pairs"]}
    assert vals[(0, 1)] == pytest.approx(1 / 3)
    assert vals[(0, 2)] == pytest.approx(1 / 2)
    assert payload["labels"] == ["a", "b", "c"]


def test_build_lp_sampled(capsys):
    rc = main(["build-lp", "--gen", "planted:40,4,0.9,0.05", "--seed", "3",
               "--pipeline", "sampled"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["slack"] > 0


def test_precluster_command(capsys):
    rc = main(["precluster", "--gen", "complete:3", "--oracle"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["oracle"]["exact_optimal"] is True
    assert rep["clustering"]["clusters"] == [["0", "1", "2"]]
    assert rep["ledger"]["logical_rounds"] == 2


def test_precluster_ratio_within_bound(path_file, capsys):
    rc = main(["precluster", "--input", path_file, "--oracle"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["oracle"]["max_ratio"] <= 359


def test_evaluate_round_trip(path_file, tmp_path):
    rep_path = tmp_path / "rep.json"
    assert main(["round", "--input", path_file, "--out", str(rep_path)]) == 0
    rep = json.loads(rep_path.read_text())
    clust_path = tmp_path / "clust.json"
    clust_path.write_text(json.dumps(rep["clustering"]))
    out_path = tmp_path / "eval.json"
    assert main(["evaluate", "--input", path_file, "--clustering",
                 str(clust_path), "--norms", "lp:1", "--out",
                 str(out_path)]) == 0
    ev = json.loads(out_path.read_text())
    assert ev["disagreements"] == rep["disagreements"]


def test_cli_usage_errors(path_file, capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["round", "--input", path_file, "--pipeline", "bogus"])
    assert exc.value.code == 2
    # sampled + sequential rounding is incompatible
    assert main(["round", "--gen", "gnp:10,0.5", "--pipeline", "sampled",
                 "--rounding", "seq"]) == 2
    # both or neither graph source
    assert main(["round", "--gen", "gnp:10,0.5", "--input", path_file]) == 2
    assert main(["round", "--gen", "ring:9"]) == 2
    # oracle beyond the enumeration cap
    assert main(["round", "--gen", "gnp:40,0.2", "--oracle"]) == 2
    assert main(["round", "--input", str(tmp_path / "missing.txt")]) == 2


def test_verify_quick_single_criterion(capsys):
    rc = main(["verify", "--quick", "--criteria", "11"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS [11]" in out


def test_bench_smoke(capsys):
    rc = main(["bench", "--n", "300"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert "l_values" in payload["kernels"]
    assert payload["backend_in_use"] in ("cython", "python")


def test_reports_byte_identical():
    cfg = RunConfig(gen="planted:50,5,0.85,0.05", pipeline="exact",
                    rounding="parallel", seed=11)
    assert report_json(run(cfg)) == report_json(run(cfg))


def test_ratio_sweep_edge_cases():
    # clean case
    sweep = ratio_sweep(np.array([2.0, 0.0]), np.array([1.0, 2.0]))
    assert sweep["ratio_per_k"] == [2.0, 1.0]
    assert sweep["max_ratio"] == 2.0 and not sweep["exact_optimal"]
    # zero optimum with zero cost counts as optimal
    sweep = ratio_sweep(np.zeros(2), np.zeros(2))
    assert sweep["exact_optimal"] and sweep["max_ratio"] == 0.0
    # positive cost against a zero optimum is flagged, not infinite
    sweep = ratio_sweep(np.array([1.0, 1.0]), np.array([0.0, 2.0]))
    assert sweep["violations_k"] == [1]
    assert sweep["max_ratio"] is None
    json.dumps(sweep)      # still strictly valid JSON


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(gen="gnp:5,0.5", pipeline="sampled",
                  rounding="seq").validate()
    with pytest.raises(ConfigError):
        RunConfig().validate()
    with pytest.raises(ConfigError):
        RunConfig(gen="gnp:5,0.5", rounding="parallel",
                  epsilon=0.3).validate()
