import json
import subprocess
import sys

import jsonschema
import pytest

from natorder import schemas
from natorder.catalog.setups import ENV_VAR, default_catalog_path
from natorder.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, command, *argv, prefix=()):
    code, out, _ = run(capsys, *prefix, command, *argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, schemas.load(command))
    return code, doc


def test_no_arguments_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == EXIT_USAGE and "usage" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--setup", "nope"),
        ("verify",),
        ("verify", "--setup", "Q-2", "--unknown-flag"),
        ("mindet", "--setup", "golden"),
        ("mindet", "--setup", "Qi-3-2", "--bound", "1", "--mode", "block"),
        ("export", "--setup", "Qi-2-2", "--mode", "symmetric", "--out", "x.csv"),
        ("enumerate", "--family", "Q-3"),
        ("simulate", "--config", "/does/not/exist.json", "--out", "x.csv"),
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "natorder" in capsys.readouterr().out


def test_every_run_logs_version_and_checksum(capsys, caplog):
    caplog.set_level("INFO", logger="natorder")
    run(capsys, "list")
    assert "natorder 0.1.0" in caplog.text and "sha256" in caplog.text


def test_list(capsys):
    code, doc = run_json(capsys, "list")
    assert code == EXIT_OK
    assert [s["id"] for s in doc["setups"] if not s["extra"]] == ["Q-2", "Q-2-2", "Qi-2-2", "Qi-2-3", "Qi-3-2"]


def test_verify_q2(capsys):
    code, doc = run_json(capsys, "verify", "--setup", "Q-2")
    assert code == EXIT_OK
    rep = doc["reports"][0]
    assert rep["computed"]["value"] == "36"
    assert rep["formula_equals_traceform"]
    assert rep["lattice"]["min_determinant"]["exact"] == "1"


def test_verify_text_output(capsys):
    code, out, _ = run(capsys, "verify", "--setup", "Q-2", "--no-metrics")
    assert code == EXIT_OK
    assert "36 = 2^2 * 3^2 (formula)" in out


def test_strict_mode_follows_theorem_value(capsys):
    # Qi-2-2: the table entry differs but the theorem value matches the computation
    code, doc = run_json(capsys, "verify", "--setup", "Qi-2-2", "--strict", "--no-metrics")
    rep = doc["reports"][0]
    assert code == EXIT_OK
    assert rep["matches_table"] is False and rep["matches_theorem"] is True
    # Q-2-2: computed differs from the claimed theorem value
    code, doc = run_json(capsys, "verify", "--setup", "Q-2-2", "--strict", "--no-metrics")
    assert code == EXIT_MISMATCH
    assert "strict_failure" in doc["reports"][0]


def test_default_mode_reports_without_failing(capsys):
    code, doc = run_json(capsys, "verify", "--setup", "Q-2-2", "--no-metrics")
    rep = doc["reports"][0]
    assert code == EXIT_OK
    assert rep["matches_theorem"] is False
    assert rep["claimed"]["theorem"]["value"] != rep["computed"]["value"]


def test_verify_all_schema(capsys):
    code, doc = run_json(capsys, "verify", "--setup", "all")
    assert code == EXIT_OK
    assert len(doc["reports"]) == 5


def test_mindet(capsys):
    code, doc = run_json(capsys, "mindet", "--setup", "golden", "--bound", "1")
    assert code == EXIT_OK
    assert doc["min_determinant"]["exact"] == "1" and doc["min_determinant"]["certified"]
    code, doc = run_json(capsys, "mindet", "--setup", "Q-2", "--constellation", "qam4")
    assert code == EXIT_OK and doc["min_determinant"]["certified"]


def test_enumerate(capsys):
    code, doc = run_json(capsys, "enumerate", "--family", "Q-2", "--bound", "30")
    assert code == EXIT_OK
    assert doc["winner"]["params"] == [-3] and doc["unique_minimizer"]


def test_export_then_simulate(capsys, tmp_path):
    cb = tmp_path / "golden.csv"
    code, doc = run_json(capsys, "export", "--setup", "golden", "--mode", "symmetric", "--out", str(cb))
    assert code == EXIT_OK and doc["words"] == 256
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"codebook": "golden.csv", "snr_grid_db": [0, 10], "trials_per_point": 200}))
    out = tmp_path / "rates.csv"
    code, doc = run_json(capsys, "simulate", "--config", str(cfg), "--out", str(out))
    assert code == EXIT_OK
    text = out.read_text()
    assert text.startswith("# codebook: golden.csv") and "snr_db,trials" in text
    assert [r["trials"] for r in doc["rows"]] == [200, 200]


def test_bad_config_is_usage_error(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"codebook": "x.csv", "snr_grid_db": [0], "trials_per_point": 0}))
    assert run(capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "o.csv"))[0] == EXIT_USAGE


def test_catalog_override(capsys, tmp_path, monkeypatch):
    alt = tmp_path / "alt.json"
    with open(default_catalog_path()) as fh:
        doc = json.load(fh)
    doc["version"] = "9.9.9-test"
    alt.write_text(json.dumps(doc))
    monkeypatch.setenv(ENV_VAR, str(alt))
    _, doc = run_json(capsys, "list")
    assert doc["catalog"]["version"] == "9.9.9-test"
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "missing.json"))
    assert run(capsys, "list")[0] == EXIT_USAGE
    # --catalog wins over the environment
    _, doc = run_json(capsys, "list", prefix=("--catalog", str(alt)))
    assert doc["catalog"]["source"] == str(alt)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "natorder"], capture_output=True, text=True)
    assert res.returncode == EXIT_USAGE
