"""Headline report from the command line."""

import json
import shlex
import sys

import pytest
from pytest_bdd import given, parsers, scenarios, then, when

from asd_boundary.scripts import main

scenarios("report.feature")


@given(parsers.parse('the command line arguments "{arguments}"'), target_fixture="argv")
def _(arguments, tmp_path):
    return ["asd-boundary", *shlex.split(arguments), "--output", str(tmp_path / "result.json")]


@when("the command is run", target_fixture="exit_code")
def _(argv, monkeypatch):
    monkeypatch.setattr(sys, "argv", argv)
    with pytest.raises(SystemExit) as excinfo:
        main()
    return excinfo.value.code


@pytest.fixture
def document(tmp_path):
    with open(tmp_path / "result.json") as fd:
        return json.load(fd)


@then(parsers.parse("the exit code is {code:d}"))
def _(exit_code, code):
    assert exit_code == code


@then(parsers.parse("the result document has boundary ratio {boundary} and fiber ratio {fiber}"))
def _(document, boundary, fiber):
    assert document["result"]["count"]["boundary_ratio"] == boundary
    assert document["result"]["fiber"]["ratio_label"] == fiber


@then(parsers.parse("the result document records an {error_type}"))
def _(document, error_type):
    assert document["error"]["type"] == error_type
