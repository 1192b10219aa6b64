import json

import pytest

from simpvec.cli import main, run_command


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_pair(capsys):
    code, out, _ = run(capsys, "validate", "pair 1")
    assert code == 0
    assert out.splitlines()[0] == "ok"


def test_homology_b2(capsys):
    code, out, _ = run(capsys, "homology", "bnr 2", "--up-to", "4", "--json")
    rep = json.loads(out)
    assert code == 0
    assert rep["results"]["betti"] == [0, 0, 1, 0, 0]
    assert rep["bounds"] == {"up_to": 4}
    assert rep["schema"] == "simpvec-report" and rep["version"] == 1


def test_dual_b2(capsys):
    code, out, _ = run(capsys, "dual", "bnr 2", "--n", "2", "--check-pairing", "--check-double-dual", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["results"]["level_dims"] == [1, 1, 1]
    assert rep["results"]["double_dual"] and rep["results"]["pairing_hom_nondegenerate"]


def test_verification_failure_exit_code(capsys):
    code, out, _ = run(capsys, "pairing-check", "bnr 2", "--n", "1")
    assert code == 1
    assert out.strip().endswith("FAILED")


def test_usage_and_parse_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "dual", "pair 1")[0] == 2
    code, _, err = run(capsys, "validate", "torus 3")
    assert code == 2 and "unknown built-in" in err


def test_kstar_witness(capsys):
    code, out, _ = run(capsys, "kstar-defect", "pair 1", "--theta", "1", "--w", "0,1,0", "--json")
    rep = json.loads(out)
    assert code == 0
    assert rep["results"]["defect"] == "1"


@pytest.mark.parametrize("argv", [
    ["level", "B2", "3"], ["normalized", "pair 1"], ["dk", "pair 2"], ["ez-check", "B1", "pair 1"],
    ["tensor-order", "B1", "B2"], ["double-dual", "B1", "--n", "1"], ["validate", "tensor(B1, B1)"]])
def test_commands_pass(argv):
    code, rep, _ = run_command(argv)
    assert code == 0 and rep["ok"], rep


def test_dk_complex(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"dims": [1, 2], "differentials": {"1": [["1", "0"]]}}))
    code, out, _ = run(capsys, "dk", "--complex", str(p), "--json")
    assert code == 0 and json.loads(out)["results"]["normalized_equals_input"]


def test_reports_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "dual", "pair 1", "--n", "1", "--check-pairing", "--report", str(a))
    run(capsys, "dual", "pair 1", "--n", "1", "--check-pairing", "--report", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_suite_on_fixture_dir(capsys):
    from pathlib import Path
    d = Path(__file__).resolve().parents[1] / "fixtures"
    code, out, _ = run(capsys, "suite", str(d))
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines()[:-2])
