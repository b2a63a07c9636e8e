"""Main command."""

import json
import os
import sys

import pytest

from asd_boundary.scripts import main


def test_main(monkeypatch, capsys):
    """Test if main command shows help when called without the subcommand."""
    monkeypatch.setattr(sys, "argv", ["asd-boundary"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 2
    out, err = capsys.readouterr()
    assert "usage: asd-boundary [-h]" in err
    assert "asd-boundary: error:" in err


def test_toy(monkeypatch, capsys, tmp_path):
    output = str(tmp_path / "toy.json")
    monkeypatch.setattr(sys, "argv", ["asd-boundary", "toy", "--L", "0", "--output", output])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 0
    out, _ = capsys.readouterr()
    assert out.startswith("toy: toy integral 0 ")
    with open(output) as fd:
        assert json.load(fd)["result"]["value"] == 0.0


def test_count(monkeypatch, capsys, tmp_path):
    output = str(tmp_path / "count.json")
    monkeypatch.setattr(
        sys, "argv", ["asd-boundary", "count", "--L", "1e-2", "--K", "1", "--alpha", "1", "--seed", "7", "--output", output]
    )
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 0
    with open(output) as fd:
        document = json.load(fd)
    assert document["result"]["total_signed_count"] == 6
    assert document["seed"] == 7
    assert "boundary ratio 6/64" in capsys.readouterr().out


def test_ip_closed(monkeypatch, capsys, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(sys, "argv", ["asd-boundary", "ip", "--method", "closed"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 0
    assert os.path.exists(tmp_path / "ip.json")
    with open(tmp_path / "ip.json") as fd:
        assert json.load(fd)["result"]["value"] == pytest.approx(1.0)


def test_invalid_choice(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["asd-boundary", "ip", "--method", "simpson"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 2


def test_suite(monkeypatch, capsys, tmp_path):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({"schema_version": "1.0", "experiments": [{"command": "toy"}]}))
    monkeypatch.setattr(sys, "argv", ["asd-boundary", "-v", "suite", str(suite), "--output-dir", str(tmp_path / "out")])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 0
    out, _ = capsys.readouterr()
    assert "toy [toy] exit 0" in out


def test_suite_with_incompatible_schema(monkeypatch, capsys, tmp_path):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({"schema_version": "2.1", "experiments": []}))
    monkeypatch.setattr(sys, "argv", ["asd-boundary", "suite", str(suite)])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 2
    assert "SchemaVersionError" in capsys.readouterr().out


def test_sample_count_in_float_notation(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(sys, "argv", ["asd-boundary", "ip", "--method", "closed", "--n_samples", "1e7"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 0
    with open(tmp_path / "ip.json") as fd:
        assert json.load(fd)["params"]["n_samples"] == 10_000_000


def test_zero_backgrounds(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(sys, "argv", ["asd-boundary", "count", "--n_backgrounds", "0"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 2
