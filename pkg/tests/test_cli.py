"""Golden-file tests for every subcommand.

Set EVALPRES_UPDATE_GOLDEN=1 to rewrite the expected files after an
intended change of output.
"""
import contextlib
import io
import json
import os
from pathlib import Path

import pytest

from evalpres.cli import main

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "space_describe_unit": ["space", "describe", "--space", "unit_interval"],
    "space_describe_segments": ["space", "describe", "--space", "segments", "--points", "6"],
    "space_describe_cantor": ["space", "describe", "--space", "cantor_variant", "--depth", "4"],
    "space_diagram_unit": ["space", "diagram", "--space", "unit_interval", "--count", "8"],
    "space_diagram_cantor_empty": ["space", "diagram", "--space", "cantor_standard", "--count", "0"],
    "algebra_induce_segments": ["algebra", "induce", "--space", "segments"],
    "algebra_norm_segments": ["algebra", "norm", "--space", "segments", "--poly", "1/1*x1", "--prec", "6"],
    "algebra_norm_manifest": ["algebra", "norm", "--manifest", "inputs/unit_manifest.json",
                              "--index", "41", "--prec", "6"],
    "algebra_norm_manifest_too_fine": ["algebra", "norm", "--manifest", "inputs/unit_manifest.json",
                                       "--index", "41", "--prec", "7"],
    "algebra_norm_no_unit": ["algebra", "norm", "--manifest", "inputs/no_unit.json",
                             "--index", "5", "--prec", "2"],
    "algebra_diagram_unit": ["algebra", "diagram", "--space", "unit_interval", "--count", "6"],
    "algebra_diagram_no_unit": ["algebra", "diagram", "--manifest", "inputs/no_unit.json", "--count", "3"],
    "eval_half": ["eval", "--space", "unit_interval", "--poly", "1/1*x1*x1 - 1/1*x0",
                  "--point", "inputs/half.json", "--prec", "8"],
    "eval_third_file": ["eval", "--space", "unit_interval", "--poly", "1/1*x1 + 1/2*x2",
                        "--point", "inputs/third.json", "--prec", "10"],
    "eval_segments": ["eval", "--space", "segments", "--poly", "1/1*x1*x1", "--at", "3/4", "--prec", "6"],
    "eval_outside_space": ["eval", "--space", "unit_interval", "--poly", "1/1*x1", "--at", "3/2"],
    "eval_bad_poly": ["eval", "--space", "unit_interval", "--poly", "x1", "--at", "1/2"],
    "banach_stone_reflect": ["banach-stone", "--psi", "reflect", "--at", "1/4", "--prec", "5"],
    "banach_stone_endpoint": ["banach-stone", "--psi", "reflect", "--at", "0", "--prec", "5"],
    "compose_reflect": ["compose", "--psi", "reflect", "--poly", "1/1*x1", "--prec", "3"],
    "translate_swap": ["translate", "--swap", "0:2,1:3", "--poly", "1/1*x1*x1", "--prec", "2"],
    "translate_no_unit": ["translate", "--manifest", "inputs/no_unit.json", "--poly", "1/1*x1"],
    "cantor_homeo_variant": ["cantor-homeo", "--space", "cantor_variant", "--depth", "2"],
    "cantor_homeo_standard": ["cantor-homeo", "--space", "cantor_standard", "--depth", "1",
                              "--budget", "300"],
    "accept_unit_name": ["accept", "--only", "9"],
}


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return f"exit: {code}\n--- stdout\n{out.getvalue()}--- stderr\n{err.getvalue()}"


@pytest.mark.parametrize("case", sorted(CASES))
def test_golden(case, monkeypatch):
    monkeypatch.chdir(GOLDEN)
    got = run_cli(CASES[case])
    path = GOLDEN / f"{case}.txt"
    if os.environ.get("EVALPRES_UPDATE_GOLDEN"):
        path.write_text(got)
    assert got == path.read_text()


def test_outputs_are_byte_identical(monkeypatch):
    monkeypatch.chdir(GOLDEN)
    for case in ("space_diagram_unit", "algebra_diagram_unit", "compose_reflect"):
        assert run_cli(CASES[case]) == run_cli(CASES[case])


def test_spec_eval_line(monkeypatch):
    monkeypatch.chdir(GOLDEN)
    assert run_cli(CASES["eval_half"]).splitlines()[2] == "-3/4 ± 2^-8"


def test_missing_unit_is_refused(monkeypatch):
    monkeypatch.chdir(GOLDEN)
    text = run_cli(CASES["algebra_norm_no_unit"])
    head, err = text.split("--- stderr\n")
    assert head == "exit: 2\n--- stdout\n"
    assert json.loads(err)["error"] == "missing-unit-name"


def test_cantor_emit_file(tmp_path):
    target = tmp_path / "levels.jsonl"
    run_cli(["cantor-homeo", "--space", "cantor_variant", "--depth", "1", "--emit", str(target)])
    rows = [json.loads(line) for line in target.read_text().splitlines()]
    assert [r["level"] for r in rows] == [0, 1]
