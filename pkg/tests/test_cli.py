import json

import numpy as np
import pytest

from charfun.cli import main

BARTLETT = ["bartlett", "--k", "15", "--nu", "1,1,1,1,1,2,2,2,2,2,3,3,3,3,3", "--probs", "0.9,0.95,0.99", "--xmin", "0"]
WILKS = ["wilks", "--p", "10", "--q", "7", "--n", "30", "--probs", "0.9,0.95,0.99", "--x", "0:6:100", "--xmin", "0"]


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_bartlett_example(capsys):
    code, out, err = run(capsys, BARTLETT)
    assert code == 0 and err == ""
    doc = json.loads(out)
    q = [e["q"] for e in doc["quantiles"]]
    approx = [e["approx"] for e in doc["quantiles"]]
    np.testing.assert_allclose(q, [20.3969, 22.8508, 27.9221], atol=1e-3)
    np.testing.assert_allclose(approx, [21.0641, 23.6848, 29.1412], atol=1e-3)
    assert doc["spec"]["statistic"] == "bartlett"
    assert doc["grid"]["A"] == 0.0
    assert len(doc["x"]) == 100


def test_wilks_example_maps_manova_parameters(capsys):
    code, out, _ = run(capsys, WILKS)
    assert code == 0
    doc = json.loads(out)
    assert doc["spec"]["p"] == 10 and doc["spec"]["n"] == 23 and doc["spec"]["q"] == 6
    assert doc["spec"]["manova"] == {"p": 10, "n": 30, "q": 7}
    assert len(doc["x"]) == 100 and doc["x"][-1] == 6.0
    assert all(0.0 <= v <= 1.0 for v in doc["cdf"])
    raw = json.loads(run(capsys, ["wilks", "--raw", "--p", "10", "--n", "23", "--q", "6", "--probs", "0.9", "--xmin", "0"])[1])
    assert raw["quantiles"][0]["q"] == pytest.approx(doc["quantiles"][0]["q"], abs=1e-9)


def test_qform_validate(capsys):
    code, out, _ = run(capsys, ["qform", "--lambdas", "2,1,0.5", "--probs", "0.95", "--validate", "--xmin", "0"])
    assert code == 0
    doc = json.loads(out)
    assert doc["validation"]["passed"] is True
    assert doc["validation"]["ks_distance"] < doc["validation"]["critical_value_1pct"]
    assert len(doc["quantiles"]) == 1


def test_validate_subcommand(capsys):
    code, out, _ = run(capsys, ["validate", "wilks-cs", "--p", "10", "--n", "30", "--q", "7", "--n-sim", "20000", "--probs", "0.5"])
    assert code == 0
    v = json.loads(out)["validation"]
    assert v["n_sim"] == 20000 and v["passed"] is True


def test_csv_matches_json(capsys):
    _, js, _ = run(capsys, WILKS)
    _, cs, _ = run(capsys, WILKS + ["--format", "csv"])
    doc = json.loads(js)
    lines = cs.splitlines()
    assert lines[0] == "x,pdf,cdf"
    table = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:] if not ln.startswith("#")])
    np.testing.assert_allclose(table[:, 0], doc["x"], rtol=1e-9)
    np.testing.assert_allclose(table[:, 1], doc["pdf"], rtol=1e-9, atol=1e-300)
    np.testing.assert_allclose(table[:, 2], doc["cdf"], rtol=1e-9)
    quants = [ln.split(",") for ln in lines if ln.startswith("# quantile,")]
    np.testing.assert_allclose([float(q[2]) for q in quants], [e["q"] for e in doc["quantiles"]], rtol=1e-9)


def test_output_is_deterministic_and_written_to_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    assert main(BARTLETT + ["--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    _, again, _ = run(capsys, BARTLETT)
    assert target.read_text(encoding="utf-8") == again


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nosuch"],
        ["bartlett", "--k", "3"],
        ["bartlett", "--k", "3", "--nu", "1,2,x", "--probs", "0.5"],
        ["wilks", "--p", "3", "--n", "10", "--q", "2", "--probs", "1.5"],
        ["qform", "--lambdas", "1,2", "--x", "0:1"],
        ["cvm"],
        ["cvm", "--probs", "0.5", "--validate"],
        ["chi2-quantile", "--df", "-1", "--probs", "0.5"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 2 and out == ""
    assert err.count("\n") == 1
    assert json.loads(err)["error"] == "usage"


@pytest.mark.parametrize(
    "argv, kind",
    [
        (["bartlett", "--k", "3", "--nu", "1,2", "--probs", "0.5"], "domain"),
        (["wilks", "--p", "10", "--q", "7", "--n", "5", "--probs", "0.5"], "domain"),
        (["qform", "--lambdas=-1,2", "--probs", "0.5"], "domain"),
        (["log-beta", "--alpha", "0", "--beta", "1", "--probs", "0.5"], "domain"),
        (["wilks", "--p", "3", "--q", "2", "--n", "10", "--probs", "0.5", "--xmin", "5", "--xmax", "1"], "domain"),
    ],
)
def test_computation_errors(capsys, argv, kind):
    code, out, err = run(capsys, argv)
    assert code == 1 and out == ""
    assert err.count("\n") == 1
    assert json.loads(err)["error"] == kind


def test_chi2_quantile_subcommand(capsys):
    code, out, _ = run(capsys, ["chi2-quantile", "--df", "14", "--probs", "0.9,0.95,0.99"])
    assert code == 0
    q = [e["q"] for e in json.loads(out)["quantiles"]]
    np.testing.assert_allclose(q, [21.0641, 23.6848, 29.1412], atol=1e-3)


@pytest.mark.parametrize("stat", ["cvm", "ad"])
def test_asymptotic_statistics(capsys, stat):
    code, out, _ = run(capsys, [stat, "--probs", "0.95", "--xmin", "0", "--n-nodes", "4000"])
    assert code == 0
    q = json.loads(out)["quantiles"][0]["q"]
    # tabulated asymptotic 5% critical values
    assert q == pytest.approx({"cvm": 0.4614, "ad": 2.4924}[stat], abs=2e-3)


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "bartlett" in capsys.readouterr().out
