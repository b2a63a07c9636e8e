"""Suites of experiments."""

import json
import os

import pytest

from asd_boundary.exceptions import SchemaVersionError
from asd_boundary.experiments import load_suite, run_suite, shipped_suite


def write_suite(tmp_path, experiments, version="1.0", parallel=False):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"schema_version": version, "experiments": experiments, "parallel": parallel}))
    return str(path)


def test_empty_suite(tmp_path):
    result = run_suite(write_suite(tmp_path, []), str(tmp_path / "out"))
    assert result.exit_code == 0
    assert result.results == []
    assert result.summary.splitlines() == ["asd-boundary suite: 0 experiment(s), exit code 0"]


def test_failing_experiment_sets_the_exit_code(tmp_path):
    suite = write_suite(
        tmp_path,
        [
            {"name": "toy", "command": "toy", "params": {"L": 1.0}},
            {"name": "misconfigured", "command": "count", "params": {"background": "degenerate"}},
        ],
        parallel=True,
    )
    out = tmp_path / "out"
    result = run_suite(suite, str(out))
    assert result.exit_code == 3
    assert "misconfigured [count] exit 3" in result.summary
    assert os.path.exists(out / "toy.json")
    assert os.path.exists(out / "summary.txt")
    aggregate = json.loads((out / "suite.json").read_text())
    assert [row["exit_code"] for row in aggregate["experiments"]] == [0, 3]


def test_headline_ratios(tmp_path):
    suite = write_suite(tmp_path, [{"command": "report", "seed": 7}])
    result = run_suite(suite, str(tmp_path / "out"))
    assert result.exit_code == 0
    assert "boundary ratio: 6/64" in result.summary
    assert "fiber ratio: 1/8" in result.summary
    text = result.results[0].document["result"]["text"]
    assert "fiber limit: 1/2" in text


def test_schema_version_is_checked(tmp_path):
    with pytest.raises(SchemaVersionError):
        run_suite(write_suite(tmp_path, [], version="2.0"))


def test_shipped_suite_parses(tmp_path):
    names, specs, parallel = load_suite(shipped_suite(), str(tmp_path))
    assert parallel
    assert len(names) == len(specs)
    assert {spec.command for spec in specs} >= {"count", "report", "ip", "toy"}
    for spec in specs:
        spec.resolved_params()


@pytest.mark.slow
def test_shipped_suite(tmp_path):
    result = run_suite(shipped_suite(), str(tmp_path))
    assert result.exit_code == 0
    assert "boundary ratio: 6/64" in result.summary
    assert "fiber ratio: 1/8" in result.summary
