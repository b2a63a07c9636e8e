"""Experiment specifications and the runner."""

import json
import os

import pytest

from asd_boundary.exceptions import ExperimentValidationError
from asd_boundary.experiments import SCHEMAS, ExperimentSpec, float_list, positive_int, run


def load(path):
    with open(path) as fd:
        return json.load(fd)


def test_resolved_params_fill_defaults():
    spec = ExperimentSpec("count", {"L": "1e-3"})
    assert spec.resolved_params() == {"L": 1e-3, "K": 1.0, "alpha": 1.0, "n_backgrounds": 1, "background": "generic"}
    assert spec.output_path == "count.json"


@pytest.mark.parametrize(
    ["command", "params"],
    [
        ("count", {"L": "1e-3", "beta": 2}),
        ("count", {"L": "small"}),
        ("ip", {"method": "simpson"}),
        ("sensitivity", {"eps": 3}),
        ("count", {"n_backgrounds": 0}),
        ("count", {"n_backgrounds": "-2"}),
        ("continuation", {"n_backgrounds": "1.5"}),
        ("ip", {"n_samples": "1e7.5"}),
        ("sensitivity", {"L_values": ""}),
    ],
)
def test_invalid_params(command, params):
    with pytest.raises(ExperimentValidationError):
        ExperimentSpec(command, params).resolved_params()


def test_counts_accept_float_notation():
    assert ExperimentSpec("ip", {"n_samples": "1e7"}).resolved_params()["n_samples"] == 10**7
    assert ExperimentSpec("count", {"n_backgrounds": 2.0}).resolved_params()["n_backgrounds"] == 2
    assert positive_int("3") == 3
    assert isinstance(positive_int("1e5"), int)
    for value in ("0", "nan", "inf", "2.5", "many"):
        with pytest.raises(ValueError):
            positive_int(value)


def test_zero_backgrounds_is_a_validation_failure(output_path):
    result = run(ExperimentSpec("count", {"n_backgrounds": 0}, output_path=output_path), echo=False)
    assert result.exit_code == 2
    document = load(output_path)
    assert document["result"] is None
    assert document["error"]["type"] == "ExperimentValidationError"


def test_unknown_command():
    with pytest.raises(ExperimentValidationError):
        ExperimentSpec("plot")


def test_float_list():
    assert float_list("1e-2, 3e-3,1e-3") == [1e-2, 3e-3, 1e-3]
    assert float_list([1, 2]) == [1.0, 2.0]
    with pytest.raises(ValueError):
        float_list(" , ")


def test_every_command_has_a_schema():
    assert set(SCHEMAS) >= {
        "reduce",
        "count",
        "degenerate",
        "continuation",
        "sensitivity",
        "toy",
        "ip",
        "fiber",
        "concentration",
        "report",
    }


def test_toy_document(output_path, capsys):
    result = run(ExperimentSpec("toy", {"L": 0.0}, output_path=output_path))
    assert result.exit_code == 0
    document = load(output_path)
    assert document["schema_version"] == "1.0"
    assert document["result"]["value"] == 0.0
    assert document["error"] is None
    assert document["params"] == {"L": 0.0, "x_max": 1e9, "lambda_max": 1e9}
    assert document["sidecar"]["duration"] >= 0.0
    out, _ = capsys.readouterr()
    assert out.startswith("toy: toy integral 0 ")


def test_documents_are_deterministic(tmp_path):
    documents = []
    for name in ("first", "second"):
        path = str(tmp_path / f"{name}.json")
        run(ExperimentSpec("ip", {"method": "mc", "n_samples": 100_000}, seed=9, output_path=path), echo=False)
        document = load(path)
        del document["sidecar"]
        documents.append(json.dumps(document, sort_keys=True))
    assert documents[0] == documents[1]


def test_validation_failure_is_recorded(output_path):
    result = run(ExperimentSpec("toy", {"offset": 1.0}, output_path=output_path), echo=False)
    assert result.exit_code == 2
    document = load(output_path)
    assert document["result"] is None
    assert document["error"]["type"] == "ExperimentValidationError"


def test_degenerate_matrix_exit_code(output_path):
    result = run(ExperimentSpec("reduce", {"matrix": "1,0,0,0,1,0,0,0,1"}, output_path=output_path), echo=False)
    assert result.exit_code == 3
    assert load(output_path)["error"]["type"] == "DegenerateInputError"


def test_reduce_document(output_path):
    result = run(ExperimentSpec("reduce", output_path=output_path), echo=False)
    assert result.exit_code == 0
    branches = [d["branch"] for d in result.document["result"]["decompositions"]]
    assert branches == ["plus", "minus"]


def test_count_writes_csv(tmp_path):
    path = str(tmp_path / "count.json")
    result = run(ExperimentSpec("count", {"L": 1e-2}, seed=7, output_path=path), echo=False)
    assert result.exit_code == 0
    assert result.document["result"]["total_signed_count"] == 6
    assert result.headlines == {"boundary ratio": "6/64"}
    csv_path = str(tmp_path / "count.solutions.csv")
    assert os.path.exists(csv_path)
    with open(csv_path) as fd:
        lines = fd.read().splitlines()
    assert lines[0] == "background,pair,y0,y1,y2,y3,lambda,sign,residual"
    assert len(lines) == 7


def test_wrong_count_is_a_certificate_failure(output_path):
    result = run(ExperimentSpec("count", {"background": "degenerate"}, output_path=output_path), echo=False)
    assert result.exit_code == 3
