import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from hlawka import campaign
from hlawka.cli import main
from hlawka.numerics import parse_scalar
from hlawka.quadratic import QuadraticForm, hlawka_margin

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_classical_relation(capsys):
    code, out, _ = run(capsys, "verify", str(DATA / "classical_relation.json"), "--kind", "relation")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == campaign.SCHEMA
    assert parse_scalar(rep["result"]["C1"]) == 0 and parse_scalar(rep["result"]["C2"]) == 0
    assert rep["result"]["sum_mode"] == "LEQ_a" and rep["falsification"] is False


def test_verify_degenerate_is_usage_error(capsys):
    code, out, err = run(capsys, "verify", str(DATA / "degenerate_relation.json"), "--kind", "relation")
    assert code == 2 and out == "" and "a" in err and "error" in err


def test_verify_malformed_json(capsys):
    code, _, err = run(capsys, "verify", str(DATA / "malformed.json"), "--kind", "relation")
    assert code == 2 and "parse error" in err and "line" in err


def test_verify_missing_key_location(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"weights": [1], "f_eta": [1], "f_xi": ["x/y"], "a": 1, "b": 1}))
    code, _, err = run(capsys, "verify", str(p), "--kind", "relation")
    assert code == 2 and "$.f_xi[0]" in err


def test_verify_quadratic_matches_library(capsys):
    code, out, _ = run(capsys, "verify", str(DATA / "minkowski_triple.json"), "--kind", "quadratic")
    rep = json.loads(out)["result"]
    assert code == 0 and rep["signature"] == [1, 2, 0] and parse_scalar(rep["four_point_residual"]) == 0
    m = hlawka_margin(QuadraticForm.minkowski(3), (2, 1, 0), (3, 1, 1), (4, -1, 1), "reverse")
    assert parse_scalar(rep["hlawka_margin"]) == m
    assert rep["relation"]["sum_mode"] == "GEQ_a"
    code, out, _ = run(capsys, "verify", str(DATA / "euclidean_triple.json"), "--kind", "quadratic")
    assert code == 0 and json.loads(out)["result"]["verdict"] == "holds"


def test_verify_semigroup_and_integral(capsys):
    code, out, _ = run(capsys, "verify", str(DATA / "measure_symmdiff.json"), "--kind", "semigroup")
    rep = json.loads(out)["result"]
    assert code == 0 and rep["verdict"] == "holds"
    # A & B & C = {1} with weight 2: stated coefficient leaves mu(A & B & C), the exact one leaves 0
    residuals = {k: parse_scalar(v) for k, v in rep["measure_identity_residuals"].items()}
    assert residuals == {"union": 0, "symmdiff": 2, "symmdiff_exact": 0}
    code, out, _ = run(capsys, "verify", str(DATA / "integral_triple.json"), "--kind", "integral")
    rep = json.loads(out)["result"]
    assert code == 0 and parse_scalar(rep["inner_identity_residual"]) == 0
    assert set(rep["margins"]) == {"ttw00", "t_variant", "rearrangement", "groupmain"}


def test_verify_unknown_kind(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", str(DATA / "classical_relation.json"), "--kind", "nope"])
    assert exc.value.code == 2


def test_campaign_identities_small(capsys):
    code, out, _ = run(capsys, "campaign", "--suite", "identities", "--trials", "100", "--seed", "7")
    rep = json.loads(out)
    body = rep["suites"]["identities"]
    assert code == 0 and body["falsifications"] == [] and body["checked"] == 300
    assert body["checked"] == body["holds"] + body["marginal"] + len(body["falsifications"])


def test_campaign_counterexample_whitelisted(capsys):
    code, out, _ = run(capsys, "campaign", "--suite", "counterexample", "--param", "counterexample_n=4",
                       "--param", "counterexample_k=2")
    body = json.loads(out)["suites"]["counterexample"]
    assert code == 0
    assert len(body["falsifications"]) == 2
    assert all(f["expected"] and f["label"] == campaign.EXPECTED_LABEL for f in body["falsifications"])


def test_campaign_semigroup_reports_stated_identity(capsys):
    code, out, _ = run(capsys, "campaign", "--suite", "semigroup", "--trials", "20", "--seed", "1")
    rep = json.loads(out)
    checks = rep["suites"]["semigroup"]["checks"]
    assert checks["measure_union_identity"]["falsifications"] == 0
    assert checks["measure_symmdiff_identity_exact"]["falsifications"] == 0
    assert checks["measure_symmdiff_identity"]["falsifications"] > 0
    assert code == 1 and rep["unexpected_falsifications"] == checks["measure_symmdiff_identity"]["falsifications"]


def test_campaign_deterministic(capsys):
    argv = ("campaign", "--suite", "integral", "--trials", "30", "--seed", "3")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    _, c, _ = run(capsys, "campaign", "--suite", "integral", "--trials", "30", "--seed", "4")
    assert c != a


def test_campaign_bad_param(capsys):
    code, _, err = run(capsys, "campaign", "--suite", "identities", "--param", "nope=1")
    assert code == 2 and "nope" in err
    with pytest.raises(SystemExit) as exc:
        main(["campaign", "--param", "novalue"])
    assert exc.value.code == 2


def test_counterexample_command(capsys, tmp_path):
    out_file = tmp_path / "ce.json"
    code, out, _ = run(capsys, "counterexample", "--n", "5", "--k", "3", "--samples", "200", "--json", str(out_file))
    rep = json.loads(out_file.read_text())
    assert code == 0 and out == ""
    assert rep["forward_fails_A"] and rep["reverse_fails_B"] and rep["sampled_containment"]["ok"]
    assert rep["signature"] == [3, 2, 0]
    assert parse_scalar(rep["forward_margin_A"]) == pytest.approx(-0.13342691192657932, abs=1e-12)


def test_counterexample_bad_k(capsys):
    code, _, err = run(capsys, "counterexample", "--n", "4", "--k", "4")
    assert code == 2 and err


def test_config_validation():
    with pytest.raises(ValueError):
        campaign.CampaignConfig(suite="bogus")
    with pytest.raises(ValueError):
        campaign.CampaignConfig(trials=0)


def test_derive_seed_stable():
    assert campaign.derive_seed(42, "a", 1) == campaign.derive_seed(42, "a", 1)
    assert campaign.derive_seed(42, "a", 1) != campaign.derive_seed(42, "a", 2)


def test_console_script():
    exe = shutil.which("hlawka")
    cmd = [exe] if exe else [sys.executable, "-m", "hlawka.cli"]
    proc = subprocess.run(cmd + ["verify", str(DATA / "classical_relation.json"), "--kind", "relation"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and parse_scalar(json.loads(proc.stdout)["result"]["C2"]) == 0
