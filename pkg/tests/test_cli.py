"""Setup-file grammar, the analyze pipeline, report documents, corpus runner."""

import json
from pathlib import Path

import pytest

from fibrephi.cli import (
    EXIT_CORPUS_MISMATCH,
    EXIT_OK,
    AnalyzeOptions,
    compare_expectations,
    load_setup,
    main,
    required_max_power,
    run_analyze,
    run_corpus,
    run_stratify,
    run_verify_power,
)
from fibrephi.errors import SetupError


def write(tmp_path: Path, text: str, name="case.setup") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


MINIMAL = """\
vars_target: y
vars_source: x
source_ideal: y*x - 1
"""


# ---------------------------------------------------------------------------
# grammar
# ---------------------------------------------------------------------------


def test_load_quadric_cone_fixture(fixture_dir):
    loaded = load_setup(fixture_dir / "quadric_cone.setup")
    assert loaded.setup.dims() == {"N": 3, "n": 3, "k": 1, "r": 1, "m": 3}
    assert loaded.expect["phi_exact"] == "2"


def test_load_family_fixture(fixture_dir):
    loaded = load_setup(fixture_dir / "cyclic_forms_n2_l2.setup")
    assert loaded.setup.dims() == {"N": 2, "n": 2, "k": 3, "r": 2, "m": 3}


def test_defaults_and_comments(tmp_path):
    loaded = load_setup(write(tmp_path, MINIMAL + "# trailing comment\n"))
    assert loaded.setup.target_equals_ambient
    assert loaded.setup.ambient_target_ideal.is_zero_ideal
    assert not loaded.setup.assert_target_locally_irreducible


def test_zero_source_generator_rejected(tmp_path):
    path = write(tmp_path, MINIMAL.replace("y*x - 1", "0"))
    with pytest.raises(SetupError):
        load_setup(path)


def test_unknown_key_rejected(tmp_path):
    path = write(tmp_path, MINIMAL + "colour: blue\n")
    with pytest.raises(SetupError) as err:
        load_setup(path)
    assert "colour" in str(err.value)


def test_duplicate_key_rejected(tmp_path):
    path = write(tmp_path, MINIMAL + "vars_target: z\n")
    with pytest.raises(SetupError):
        load_setup(path)


def test_missing_required_key(tmp_path):
    path = write(tmp_path, "vars_target: y\nvars_source: x\n")
    with pytest.raises(SetupError):
        load_setup(path)


def test_inconsistent_target_declarations(tmp_path):
    text = MINIMAL + "target_equals_ambient: true\ntarget_ideal: y\n"
    with pytest.raises(SetupError):
        load_setup(write(tmp_path, text))
    text = "vars_target: y\nvars_source: x\nsource_ideal: x\ntarget_equals_ambient: false\n"
    with pytest.raises(SetupError):
        load_setup(write(tmp_path, text, name="other.setup"))


def test_parse_error_carries_location(tmp_path):
    path = write(tmp_path, MINIMAL.replace("y*x - 1", "y*x - "))
    with pytest.raises(SetupError) as err:
        load_setup(path)
    assert "source_ideal" in str(err.value)


def test_expect_block_does_not_influence_computation(tmp_path):
    plain = load_setup(write(tmp_path, MINIMAL))
    with_expect = load_setup(
        write(tmp_path, MINIMAL + "expect:\n  phi_exact: 7\n", name="exp.setup")
    )
    assert plain.setup.dims() == with_expect.setup.dims()
    report = run_analyze(with_expect)
    assert report.document["phi_exact"] != 7


# ---------------------------------------------------------------------------
# analyze pipeline
# ---------------------------------------------------------------------------


def test_analyze_quadric_cone(fixture_dir):
    loaded = load_setup(fixture_dir / "quadric_cone.setup")
    report = run_analyze(loaded, AnalyzeOptions(max_power=3))
    doc = report.document
    assert doc["phi_upper"] == 2 and doc["phi_lower"] == 2 and doc["phi_exact"] == 2
    assert doc["exactness_tag"] == "bounds-meet"
    assert doc["fibred_powers"] == [
        {"i": 1, "verdict": False},
        {"i": 2, "verdict": False},
        {"i": 3, "verdict": True},
    ]
    assert doc["multiplicity_bound"] == 2
    assert doc["oracle"]["mismatches"] == 0
    assert report.exit_code == EXIT_OK


def test_analyze_family_instance(fixture_dir):
    loaded = load_setup(fixture_dir / "cyclic_forms_n3_l2.setup")
    report = run_analyze(loaded)
    doc = report.document
    assert doc["phi_exact"] == 1 and doc["exactness_tag"] == "smooth-target"
    assert doc["vertical"]["verdict"] is False


def test_analyze_vertical_fixture(fixture_dir):
    loaded = load_setup(fixture_dir / "line_times_fibre.setup")
    report = run_analyze(loaded)
    doc = report.document
    assert doc["phi_exact"] == 0
    assert doc["vertical"]["verdict"] is True
    assert doc["vertical"]["witness"] == "x"


def test_analyze_infinity_serialization(fixture_dir):
    loaded = load_setup(fixture_dir / "graph_line.setup")
    doc = run_analyze(loaded).document
    assert doc["phi_upper"] == "infinity"
    assert doc["phi_exact"] == "infinity"


def test_analyze_is_byte_deterministic(fixture_dir):
    loaded = load_setup(fixture_dir / "quadric_cone.setup")
    options = AnalyzeOptions(max_power=2, seed=11)
    first = run_analyze(loaded, options).to_json()
    second = run_analyze(loaded, options).to_json()
    assert first == second


def test_timings_are_opt_in(fixture_dir):
    loaded = load_setup(fixture_dir / "hyperbola.setup")
    assert "timings" not in run_analyze(loaded).document
    assert "timings" in run_analyze(loaded, AnalyzeOptions(include_timings=True)).document


def test_stratify_document(fixture_dir):
    loaded = load_setup(fixture_dir / "blowup_chart.setup")
    doc = run_stratify(loaded).document
    assert {(s["j"], s["image_dim"]) for s in doc["strata"]} == {(0, 2), (1, 0)}


def test_verify_power_document(fixture_dir):
    loaded = load_setup(fixture_dir / "quadric_cone.setup")
    doc = run_verify_power(loaded, 3).document
    assert doc["vertical"]["verdict"] is True
    assert doc["power"] == 3
    assert run_verify_power(loaded, 2).document["vertical"]["verdict"] is False


def test_missing_attestation_yields_inconclusive_exit(tmp_path):
    # without the irreducibility attestation the vertical test cannot run
    loaded = load_setup(write(tmp_path, MINIMAL))
    report = run_analyze(loaded)
    assert report.document["vertical"]["verdict"] is None
    assert report.exit_code == 2
    assert any("skipped" in w for w in report.document["warnings"])


def test_non_pure_source_withholds_bounds(tmp_path):
    # a plane union a line: pieces of dimensions 2 and 1
    text = (
        "vars_target: y\n"
        "vars_source: x1 x2\n"
        "source_ideal: x1*y, x1*x2\n"
        "assert_target_locally_irreducible: true\n"
    )
    report = run_analyze(load_setup(write(tmp_path, text)))
    doc = report.document
    assert doc["purity"]["pure"] is False
    assert doc["purity"]["piece_dims"] == [2, 1]
    assert doc["phi_upper"] is None and doc["phi_lower"] is None
    assert any("non-pure" in w for w in doc["warnings"])


# ---------------------------------------------------------------------------
# expectations and corpus
# ---------------------------------------------------------------------------


def test_required_max_power():
    assert required_max_power({}) == 0
    assert required_max_power({"fibred_powers": "1:false, 3:true"}) == 3


def test_compare_expectations_reports_drift():
    document = {"phi_upper": 2, "strata": [{"j": 0, "image_dim": 3}]}
    assert compare_expectations(document, {"phi_upper": "2"}) == []
    problems = compare_expectations(document, {"phi_upper": "infinity", "strata": "0:1"})
    assert len(problems) == 2


def test_corpus_on_shipped_fixtures(fixture_dir):
    reports, exit_code = run_corpus(fixture_dir)
    assert exit_code == EXIT_OK
    assert len(reports) == 12
    assert all(not r.mismatches for r in reports)


def test_corpus_flags_mismatch(tmp_path, fixture_dir):
    good = (fixture_dir / "hyperbola.setup").read_text(encoding="utf-8")
    bad = good.replace("phi_upper: infinity", "phi_upper: 1")
    write(tmp_path, bad, name="wrong.setup")
    reports, exit_code = run_corpus(tmp_path)
    assert exit_code == EXIT_CORPUS_MISMATCH
    assert reports[0].mismatches


def test_corpus_requires_fixtures(tmp_path):
    with pytest.raises(SetupError):
        run_corpus(tmp_path)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def test_main_analyze_roundtrip(fixture_dir, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["analyze", str(fixture_dir / "blowup_chart.setup"), "--json", str(out)])
    assert code == EXIT_OK
    printed = capsys.readouterr().out
    assert "phi_exact = 1" in printed
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["phi_exact"] == 1


def test_main_corpus(fixture_dir, capsys):
    assert main(["corpus", str(fixture_dir)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "quadric_cone.setup" in printed and "MISMATCH" not in printed


def test_main_reports_errors(tmp_path, capsys):
    missing = tmp_path / "nope.setup"
    assert main(["analyze", str(missing)]) == 1
    assert "error:" in capsys.readouterr().err


def test_main_verify_power(fixture_dir, capsys):
    code = main(["verify-power", str(fixture_dir / "graph_line.setup"), "--i", "2"])
    assert code == EXIT_OK
    assert "vertical = False" in capsys.readouterr().out
