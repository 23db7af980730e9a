import json

import pytest
from mpmath import mp

from protnum.cli import main
from protnum.families import make_family
from protnum.protection import ProtectionReport, root_limits, vertex_limits


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def test_probs_finite_example(capsys):
    rc, out = run_cli(capsys, "probs", "--family", "plane", "--n", "3", "--k", "2")
    assert rc == 0
    assert out.strip() == "1/2"


def test_probs_limit_csv(capsys):
    rc, out = run_cli(capsys, "probs", "--family", "plane", "--kmax", "3",
                      "--precision", "20", "--format", "csv")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "family,mode,k,value"
    assert lines[1].startswith("plane,root,1,1.0")


def test_limits_text_shows_reference_digits(capsys):
    rc, out = run_cli(capsys, "limits", "--family", "plane", "--mode", "root",
                      "--precision", "30")
    assert rc == 0
    assert "1.622971384715353" in out


def test_limits_json_roundtrip(capsys):
    rc, out = run_cli(capsys, "limits", "--family", "cayley", "--precision", "25")
    assert rc == 0
    rc, out = run_cli(capsys, "limits", "--family", "cayley", "--precision", "25",
                      "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert len(payload) == 2  # root and vertex
    for entry in payload:
        rebuilt = ProtectionReport.from_dict(entry)
        fn = root_limits if entry["mode"] == "root" else vertex_limits
        assert rebuilt == fn(make_family("cayley"), 25)
        assert rebuilt.to_dict() == entry


def test_coeffs_json(capsys):
    rc, out = run_cli(capsys, "coeffs", "--family", "polya", "--series", "T",
                      "--trunc", "8", "--format", "json")
    assert rc == 0
    assert json.loads(out) == ["0", "1", "1", "2", "4", "9", "20", "48", "115"]
    rc, out = run_cli(capsys, "coeffs", "--family", "cayley", "--series", "T",
                      "--trunc", "4", "--format", "json")
    assert json.loads(out) == ["0", "1", "1", "3/2", "8/3"]
    rc, out = run_cli(capsys, "coeffs", "--family", "polya", "--series", "Sk",
                      "--k", "2", "--trunc", "6", "--format", "json")
    assert json.loads(out)[3] == "1"  # first witness at z^(k+1)


def test_table_csv_contains_published_rows(capsys):
    rc, out = run_cli(capsys, "table", "--format", "csv", "--precision", "20")
    assert rc == 0
    assert "Polya trees,2.15489,0.99532" in out
    assert "Plane trees,1.62297,0.72765" in out


def test_sample_json(capsys):
    rc, out = run_cli(capsys, "sample", "--family", "plane", "--n", "20",
                      "--trials", "25", "--seed", "3", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert payload["family"] == "plane"
    assert payload["trials"] == 25
    assert payload["variance_defined"] is True
    rc2, out2 = run_cli(capsys, "sample", "--family", "plane", "--n", "20",
                        "--trials", "25", "--seed", "3", "--format", "json")
    assert out2 == out


def test_usage_errors_exit_2(capsys):
    rc, _ = run_cli(capsys, "limits", "--family", "not-a-family")
    assert rc == 2
    rc, _ = run_cli(capsys, "probs", "--family", "plane")  # neither --k nor --kmax
    assert rc == 2
    with pytest.raises(SystemExit) as exc:
        main(["limits", "--no-such-flag"])
    assert exc.value.code == 2


def test_precision_failure_exit_3(capsys):
    rc, _ = run_cli(capsys, "limits", "--family", "polya", "--mode", "vertex",
                    "--precision", "30", "--trunc", "32")
    assert rc == 3


def test_verify_single_family_passes(capsys):
    rc, out = run_cli(capsys, "verify", "--family", "plane", "--skip-statistical")
    assert rc == 0
    assert "PASS root-constants-plane" in out
    assert "FAIL" not in out


def test_verify_reports_reference_mismatch(capsys):
    # the published non-plane-binary constants fail the exact cross-checks
    rc, out = run_cli(capsys, "verify", "--family", "non-plane-binary",
                      "--skip-statistical")
    assert rc == 1
    assert "FAIL root-constants-non-plane-binary" in out
    assert "FAILED: root-constants-non-plane-binary" in out
    assert "PASS oracle-non-plane-binary" in out
    assert "PASS residual-non-plane-binary" in out
