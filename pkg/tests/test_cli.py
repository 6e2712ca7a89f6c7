"""Manifest loading, the op registry, report rendering, and exit codes."""

import json
from fractions import Fraction

import pytest

from formality_lab import conventions
from formality_lab.cli import main
from formality_lab.manifest import (
    ManifestError,
    as_fraction,
    parse_manifest,
)
from formality_lab.poly import Poly
from formality_lab.report import canonical
from formality_lab.suites import OPS, expand_suite


# -- exact numbers in manifests ---------------------------------------------------

def test_as_fraction_accepts_exact_forms():
    assert as_fraction(3, "x") == Fraction(3)
    assert as_fraction("-2/7", "x") == Fraction(-2, 7)
    assert as_fraction(" 5 ", "x") == Fraction(5)


def test_as_fraction_rejects_inexact_and_junk():
    for bad in (0.5, True, "1.5.2", "a/b", None, [1]):
        with pytest.raises(ManifestError):
            as_fraction(bad, "x")


def test_canonical_renders_fractions_and_tuples():
    tree = canonical({"a": Fraction(1, 3), "b": (1, 2), 3: None})
    assert tree == {"a": "1/3", "b": [1, 2], "3": None}
    with pytest.raises(TypeError):
        canonical(0.25)


# -- manifest parsing --------------------------------------------------------------

def test_parse_error_carries_position():
    with pytest.raises(ManifestError) as err:
        parse_manifest("model:\n  vars: [1\n", source="m.yaml")
    assert err.value.source == "m.yaml"
    assert err.value.line is not None


def test_unknown_op_and_unknown_argument_are_named():
    with pytest.raises(ManifestError, match="unknown op 'frobnicate'"):
        parse_manifest("jobs:\n  - op: frobnicate\n", known_ops=OPS)
    mf = parse_manifest(
        "jobs:\n  - op: betti\n    name: j\n    bogus: 1\n", known_ops=OPS
    )
    with pytest.raises(ManifestError, match="'bogus'"):
        from formality_lab.suites import check_job_args

        check_job_args(mf.jobs[0], mf)


def test_duplicate_job_names_rejected():
    text = "jobs:\n  - {op: betti, name: same}\n  - {op: betti, name: same}\n"
    with pytest.raises(ManifestError, match="duplicate"):
        parse_manifest(text, known_ops=OPS)


def test_model_caps_validated():
    with pytest.raises(ManifestError, match="unknown cap"):
        parse_manifest("model: {depth: 3}\n")
    with pytest.raises(ManifestError, match="u-window"):
        parse_manifest("model: {u-window: [4, -4]}\n")
    mf = parse_manifest("model: {vars: 3, u-window: [-2, 2]}\n")
    assert mf.model["vars"] == 3
    assert mf.model["u-window"] == (-2, 2)
    assert mf.model["degree-cap"] == 4  # defaults fill in


def test_multivector_object_built_exactly():
    text = (
        "objects:\n"
        "  pi:\n"
        "    kind: multivector\n"
        "    vars: 2\n"
        "    degree: 2\n"
        "    terms:\n"
        '      "0,1": {"1,0": "3/2"}\n'
    )
    mf = parse_manifest(text)
    kind, pi = mf.objects["pi"]
    assert kind == "multivector"
    assert pi.c == {(0, 1): Poly.monomial(2, (1, 0), Fraction(3, 2))}


def test_star_product_must_be_antisymmetric():
    text = (
        "objects:\n"
        "  s:\n"
        "    kind: star-product\n"
        "    matrix: [[0, 1], [1, 0]]\n"
    )
    with pytest.raises(ManifestError, match="antisymmetric"):
        parse_manifest(text)


def test_trace_object_validates_jet_keys():
    text = (
        "objects:\n"
        "  t:\n"
        "    kind: trace\n"
        "    vars: 2\n"
        '    coeffs: {"0,0,0": 1}\n'
    )
    with pytest.raises(ManifestError, match="needs 2 entries"):
        parse_manifest(text)


def test_suite_expansion_covers_the_battery():
    jobs = expand_suite({}, None, "core")
    names = [name for name, _, _ in jobs]
    assert names[0] == "core/identities"
    assert "core/probe" in names and "core/gerstenhaber" in names
    assert len(names) == 14
    ops = {op for _, op, _ in jobs}
    assert ops <= set(OPS)
    with pytest.raises(ManifestError, match="unknown suite"):
        expand_suite({"suite": "everything"}, None, "core")


# -- CLI runs ----------------------------------------------------------------------

FAST = (
    "jobs:\n"
    "  - {op: betti, name: a, algebra: dual-numbers, top: 2,"
    " expect: [2, 1, 1]}\n"
    "  - {op: exp-contract, name: b, max-n: 2}\n"
    '  - {op: betti, name: c, algebra: matrix-2x2, top: 1, kind: cohomology}\n'
)


def _write(tmp_path, text, name="m.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_exit_zero_and_report_shape(tmp_path, capsys):
    rc = main(["run", _write(tmp_path, FAST), "--format", "structured"])
    out = capsys.readouterr().out
    assert rc == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["ledger-hash"] == conventions.ledger_hash()
    assert [j["name"] for j in doc["jobs"]] == ["a", "b", "c"]
    assert [j["status"] for j in doc["jobs"]] == ["pass", "pass", "info"]
    assert doc["jobs"][2]["data"]["betti"] == [1, 0]
    assert out.endswith("}\n")


def test_structured_output_is_byte_identical(tmp_path, capsys):
    path = _write(tmp_path, FAST)
    main(["run", path, "--format", "structured"])
    first = capsys.readouterr().out
    main(["run", path, "--format", "structured"])
    second = capsys.readouterr().out
    assert first == second


def test_parallel_assembly_matches_serial(tmp_path, capsys):
    path = _write(tmp_path, FAST)
    main(["run", path, "--format", "structured"])
    serial = capsys.readouterr().out
    main(["run", path, "--format", "structured", "--jobs", "3"])
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_out_writes_file_instead_of_stdout(tmp_path, capsys):
    path = _write(tmp_path, FAST)
    dest = tmp_path / "report.json"
    rc = main(["run", path, "--format", "structured", "--out", str(dest)])
    assert rc == 0
    assert capsys.readouterr().out == ""
    assert json.loads(dest.read_text())["counts"]["pass"] == 2


def test_failing_expectation_exits_one_with_witness(tmp_path, capsys):
    text = (
        "jobs:\n"
        "  - {op: betti, name: bad, algebra: dual-numbers, top: 1,"
        " expect: [9, 9]}\n"
    )
    rc = main(["run", _write(tmp_path, text)])
    out = capsys.readouterr().out
    assert rc == 1
    assert "\u2717" in out
    assert "computed [2, 1], expected [9, 9]" in out


def test_unresolved_reference_exits_two(tmp_path, capsys):
    text = "jobs:\n  - {op: mc-star, name: j, star: ghost}\n"
    rc = main(["run", _write(tmp_path, text)])
    err = capsys.readouterr().err
    assert rc == 2
    assert "ghost" in err


def test_parse_error_exits_two_with_position(tmp_path, capsys):
    path = _write(tmp_path, "jobs: [\n")
    rc = main(["run", path])
    err = capsys.readouterr().err
    assert rc == 2
    assert "m.yaml:" in err


def test_missing_file_and_usage_errors_exit_two(tmp_path, capsys):
    rc = main(["run", str(tmp_path / "nope.yaml")])
    assert rc == 2
    assert main(["run"]) == 2
    assert main(["explode"]) == 2
    capsys.readouterr()


def test_empty_job_list_passes(tmp_path, capsys):
    rc = main(["run", _write(tmp_path, "jobs: []\n"), "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert doc["jobs"] == [] and doc["counts"]["fail"] == 0


def test_job_runtime_error_becomes_failing_outcome(tmp_path, capsys):
    # a quadratic-coefficient bivector is rejected by the probe's cap
    # analysis; the job must fail with the reason, not crash the run
    text = (
        "objects:\n"
        "  q:\n"
        "    kind: multivector\n"
        "    vars: 2\n"
        "    degree: 2\n"
        '    terms: {"0,1": {"2,0": 1}}\n'
        "jobs:\n"
        "  - {op: degeneration-probe, name: j, multivector: q,"
        " nt-values: [2]}\n"
    )
    rc = main(["run", _write(tmp_path, text)])
    out = capsys.readouterr().out
    assert rc == 1
    assert "refused" in out and "cap" in out


def test_text_report_carries_ledger_hash(tmp_path, capsys):
    main(["run", _write(tmp_path, "jobs: []\n")])
    out = capsys.readouterr().out
    assert conventions.ledger_hash() in out


def test_ledger_text_is_stable_against_its_hash():
    import hashlib

    text = conventions.ledger_text()
    assert conventions.ledger_hash() == hashlib.sha256(
        text.encode("utf-8")
    ).hexdigest()
    assert text.startswith("convention ledger, version 1")
