"""Command-line surface: exit codes, formats, schema validity."""

import json
import pathlib

import jsonschema

from quartic.cli import main

DOCS = pathlib.Path(__file__).resolve().parent.parent / "docs"
SCHEMA = json.loads((DOCS / "report_schema.json").read_text())

Q_TEXT = "3 0 2 0; 1 0 0 0; -1 0 0 0; 0 0 0 0"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    blob = json.loads(out)
    jsonschema.validate(blob, SCHEMA)
    return code, blob


def test_classify_reference_example(capsys):
    code, blob = run_json(capsys, "classify", Q_TEXT, "--k", "1")
    assert code == 0
    assert blob["results"][0]["value"]["class"] == "elliptic"


def test_classify_default_view(capsys):
    code, blob = run_json(capsys, "classify", Q_TEXT)
    assert code == 0
    assert blob["results"][0]["value"]["class"] == "hyperbolic"


def test_parse_error_exit_two(capsys):
    code = main(["classify", "3 0 2 0; 1 0 0 0; -1 0 0 0"])
    err = capsys.readouterr().err
    assert code == 2
    assert "4 ';'-separated entries" in err


def test_entry_position_in_parse_error(capsys):
    code = main(["classify", "3 0 2 0; 1 0; -1 0 0 0; 0 0 0 0"])
    err = capsys.readouterr().err
    assert code == 2
    assert "entry 2" in err


def test_repr_kappa4(capsys):
    code, blob = run_json(capsys, "repr",
                          "5 -3 1 -2; 1 0 0 0; -1 0 0 0; 0 0 0 0",
                          "--kappa", "4")
    assert code == 0
    grid = blob["results"][0]["value"]
    assert grid[0] == ["5", "-4", "2", "-6", "1", "0", "0", "0"]
    assert blob["results"][1]["value"] == "1"


def test_repr_kappa3_cubic_entries(capsys):
    code, blob = run_json(capsys, "repr",
                          "1 0 0; 0 1 0; 0 0 0; 1 0 0", "--kappa", "3")
    assert code == 0
    assert len(blob["results"][0]["value"]) == 6


def test_margin_command(capsys):
    code, blob = run_json(capsys, "margin", "--N", "2", "--L", "2")
    assert code == 0
    val = blob["results"][0]["value"]
    assert val["N"] == 2 and val["L"] == 2
    assert float(val["margin"][0]) > 0
    assert set(val["factors"]) == {"s0", "s1", "s2"}


def test_certify_command(capsys):
    code, blob = run_json(capsys, "certify", "--N", "3", "--L", "4")
    assert code == 0
    names = [r["name"] for r in blob["results"]]
    assert "pingpong_certificate" in names and "word_crosscheck" in names


def test_search_command(capsys):
    code, blob = run_json(capsys, "search", "--bound", "1", "--count", "3")
    assert code == 0
    cands = blob["results"][0]["value"]
    assert len(cands) == 3
    assert "matrix" in cands[0]


def test_conjugate_command(capsys):
    code, blob = run_json(capsys, "conjugate", Q_TEXT, "--n", "2")
    assert code == 0
    rec = blob["results"][0]["value"]
    assert rec["n"] == 2 and rec["closed_forms_match"]


def test_probe_inequality_command(capsys):
    code, blob = run_json(capsys, "probe-inequality", Q_TEXT, "--which", "13")
    assert code == 0
    assert blob["results"][0]["verdict"] == "probe-only"


def test_unknown_inequality_rejected(capsys):
    code = main(["probe-inequality", Q_TEXT, "--which", "12"])
    assert code == 2


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "quartic.cfg"
    cfg.write_text("L = 1\nN = 2\n")
    code, blob = run_json(capsys, "margin", "--config", str(cfg))
    assert code == 0
    assert blob["results"][0]["value"]["L"] == 1
    # flags beat the file
    code, blob = run_json(capsys, "margin", "--config", str(cfg), "--L", "2")
    assert blob["results"][0]["value"]["L"] == 2


def test_bad_config_exit_two(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("unknown = 3\n")
    assert main(["margin", "--config", str(cfg)]) == 2
