"""Batch interface: setup files, the analysis pipeline, JSON reports, corpus runs.

Setup files are line-oriented UTF-8 with ``#`` comments::

    vars_target: y1 y2 y3 y4
    vars_source: x
    ambient_target_ideal: y1*y4 - y2*y3
    target_equals_ambient: true
    source_ideal: y1*x^2 + y4*x + y2 - y3
    assert_target_locally_irreducible: true
    assert_target_pure_dimensional: true
    expect:
      phi_exact: 2

The optional ``expect`` block (indented lines) never influences computation;
the corpus runner compares reports against it and fails on drift.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from random import Random

from . import __version__
from .errors import (
    DEFAULT_LIMITS,
    FibrephiError,
    InternalInconsistencyError,
    Limits,
    SetupError,
)
from .geometry import (
    ProjectionSetup,
    Stratification,
    VerticalResult,
    fibre_at_point,
    fibred_power,
    has_vertical_component,
    make_setup,
    pure_dimension_check,
    sample_cell_points,
    stratify_by_fibre_dimension,
)
from .invariant import (
    ExtendedNat,
    assemble_report,
    certify_multiplicity_query,
    exactness_rules,
    multiplicity_bound,
    no_vertical_certificate,
    phi_by_fibred_powers,
    phi_lower,
    phi_upper,
    summarize_power_verdicts,
)
from .parser import parse_polynomial, parse_polynomial_list
from .poly import PolynomialRing

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_CORPUS_MISMATCH = 3

_KNOWN_KEYS = {
    "vars_target",
    "vars_source",
    "ambient_target_ideal",
    "target_equals_ambient",
    "target_ideal",
    "source_ideal",
    "assert_target_locally_irreducible",
    "assert_target_pure_dimensional",
}

_EXPECT_KEYS = {
    "phi_upper",
    "phi_lower",
    "phi_exact",
    "exactness_tag",
    "strata",
    "pure",
    "pure_dim",
    "lambda",
    "vertical",
    "fibred_powers",
    "multiplicity_bound",
}


@dataclass
class SetupFile:
    """A parsed setup file: the setup plus any expected-results block."""

    path: Path
    setup: ProjectionSetup
    expect: dict[str, str] = field(default_factory=dict)


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _parse_bool(value: str, where: str) -> bool:
    v = value.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise SetupError(f"{where}: expected true/false, got {value!r}")


def load_setup(path: str | Path, limits: Limits = DEFAULT_LIMITS) -> SetupFile:
    """Parse and validate a setup file; derived dimensions are recomputed."""
    path = Path(path)
    if not path.exists():
        raise SetupError(f"no such file: {path}")
    keys: dict[str, tuple[int, str]] = {}
    expect: dict[str, str] = {}
    in_expect = False
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        where = f"{path}:{lineno}"
        indented = line[0].isspace()
        body = line.strip()
        if in_expect and indented:
            key, _, value = body.partition(":")
            key = key.strip()
            if key not in _EXPECT_KEYS:
                raise SetupError(f"{where}: unknown expect key {key!r}")
            expect[key] = value.strip()
            continue
        in_expect = False
        key, sep, value = body.partition(":")
        key = key.strip()
        if not sep:
            raise SetupError(f"{where}: expected 'key: value'")
        if key == "expect":
            in_expect = True
            continue
        if key not in _KNOWN_KEYS:
            raise SetupError(f"{where}: unknown key {key!r}")
        if key in keys:
            raise SetupError(f"{where}: duplicate key {key!r}")
        keys[key] = (lineno, value.strip())

    def need(key: str) -> str:
        if key not in keys:
            raise SetupError(f"{path}: missing required key {key!r}")
        return keys[key][1]

    def split_names(text: str) -> list[str]:
        return [n for n in text.replace(",", " ").split() if n]

    target_names = split_names(need("vars_target"))
    source_names = split_names(need("vars_source"))
    try:
        ring = PolynomialRing(target_names, source_names)
    except FibrephiError as exc:
        raise SetupError(f"{path}: {exc}") from exc

    def poly_list(key: str, text: str):
        if text.strip() == "0":
            return []
        try:
            return parse_polynomial_list(text, ring)
        except FibrephiError as exc:
            raise SetupError(f"{path} ({key}): {exc}") from exc

    ambient = poly_list("ambient_target_ideal", keys.get("ambient_target_ideal", (0, "0"))[1])
    equals = _parse_bool(keys.get("target_equals_ambient", (0, "true"))[1], str(path))
    target = None
    if "target_ideal" in keys:
        if equals:
            raise SetupError(f"{path}: target_ideal given although target_equals_ambient is true")
        target = poly_list("target_ideal", keys["target_ideal"][1])
    elif not equals:
        raise SetupError(f"{path}: target_ideal required when target_equals_ambient is false")
    source_text = need("source_ideal")
    sources = []
    for chunk in source_text.split(","):
        try:
            p = parse_polynomial(chunk, ring)
        except FibrephiError as exc:
            raise SetupError(f"{path} (source_ideal): {exc}") from exc
        if p.is_zero:
            raise SetupError(f"{path}: zero generator in source_ideal")
        sources.append(p)
    loc_irr = _parse_bool(keys.get("assert_target_locally_irreducible", (0, "false"))[1], str(path))
    pure_dim = _parse_bool(keys.get("assert_target_pure_dimensional", (0, "false"))[1], str(path))

    setup = make_setup(
        ring,
        ambient_target_generators=ambient,
        source_generators=sources,
        target_generators=target,
        target_equals_ambient=equals,
        assert_target_locally_irreducible=loc_irr,
        assert_target_pure_dimensional=pure_dim,
        limits=limits,
    )
    return SetupFile(path=path, setup=setup, expect=expect)


# ---------------------------------------------------------------------------
# report documents
# ---------------------------------------------------------------------------


@dataclass
class ReportDocument:
    """Machine-readable result of one command run."""

    document: dict
    inconclusive: bool = False
    mismatches: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.document, indent=2) + "\n"

    @property
    def exit_code(self) -> int:
        if self.mismatches:
            return EXIT_CORPUS_MISMATCH
        return EXIT_INCONCLUSIVE if self.inconclusive else EXIT_OK


@dataclass
class AnalyzeOptions:
    max_power: int = 0
    seed: int = 0
    include_timings: bool = False
    oracle_points_per_cell: int = 5
    limits: Limits = DEFAULT_LIMITS


def _ext(value: ExtendedNat | None):
    return None if value is None else value.json_value()


def _verdict_json(verdict: bool | None):
    return verdict  # JSON true/false/null


def _ideal_json(ideal) -> list[str]:
    return [str(g) for g in ideal.generators]


def _strata_json(strat: Stratification) -> list[dict]:
    out = []
    for s in strat.strata:
        out.append(
            {
                "j": s.fibre_dim,
                "image_dim": s.image_dim,
                "image_ideal": _ideal_json(s.image_ideal),
                "cells": [
                    {
                        "closure": _ideal_json(c.closure),
                        "inequations": [str(h) for h in c.inequations],
                    }
                    for c in s.cells
                ],
            }
        )
    return out


def _vertical_json(v: VerticalResult) -> dict:
    return {
        "verdict": _verdict_json(v.verdict),
        "witness": None if v.witness is None else str(v.witness),
        "detail": v.detail,
    }


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _run_oracle(
    setup: ProjectionSetup,
    strat: Stratification,
    seed: int,
    per_cell: int,
    limits: Limits,
) -> dict:
    """Sample rational points on every cell and compare fibre dimensions."""
    rng = Random(seed)
    cells = points = skipped = mismatches = 0
    for stratum in strat.strata:
        for cell in stratum.cells:
            cells += 1
            found = sample_cell_points(cell, rng, want=per_cell, limits=limits)
            if not found:
                skipped += 1
                continue
            for pt in found:
                points += 1
                _, dim = fibre_at_point(setup, pt, limits)
                if dim != cell.fibre_dim:
                    mismatches += 1
    if mismatches:
        raise InternalInconsistencyError(
            f"fibre oracle disagrees with the stratification on {mismatches} points"
        )
    return {"cells": cells, "points": points, "skipped": skipped, "mismatches": mismatches}


def run_analyze(setup_file: SetupFile, options: AnalyzeOptions | None = None) -> ReportDocument:
    """The full pipeline: stratify, verticality, bounds, exactness, powers."""
    options = options or AnalyzeOptions()
    limits = options.limits
    setup = setup_file.setup
    timings: dict[str, float] = {}
    warnings: list[str] = []
    notes: list[str] = []

    def timed(name, fn):
        start = time.perf_counter()
        result = fn()
        timings[name] = round(time.perf_counter() - start, 3)
        return result

    strat = timed("stratify", lambda: stratify_by_fibre_dimension(setup, limits))
    purity = timed("purity", lambda: pure_dimension_check(setup.total_ideal, limits))
    attested = setup.assert_target_locally_irreducible
    if attested:
        vertical = timed(
            "vertical", lambda: has_vertical_component(setup.total_ideal, setup, limits=limits)
        )
        if vertical.verdict is None:
            warnings.append("vertical-component test inconclusive at the configured depth")
    else:
        vertical = VerticalResult(None, None, "target irreducibility not attested")
        warnings.append(
            "vertical-component test skipped: assert_target_locally_irreducible is false"
        )
    if purity.pure is None:
        warnings.append("purity of the source is unconfirmed (splitting cap)")

    upper = lower = None
    if purity.pure is True:
        upper = phi_upper(strat, setup.m, setup.n, purity)
        lower = phi_lower(strat, setup.N, setup.k, setup.r, no_vertical_certificate(vertical))
        notes.append(
            "the lower bound uses the presentation as given; fewer generators or a "
            "smaller ambient target would strengthen it"
        )
    else:
        warnings.append("bounds unavailable: non-pure source")

    exact = tag = None
    if upper is not None:
        exact, tag = exactness_rules(setup, strat, upper, lower, vertical, purity)

    power_verdicts: list[tuple[int, bool | None]] = []
    power_summary = None
    if options.max_power >= 1 and not attested:
        warnings.append(
            "fibred-power verification skipped: requires the locally-irreducible attestation"
        )
    elif options.max_power >= 1:
        power_verdicts = timed(
            "fibred_powers", lambda: phi_by_fibred_powers(setup, options.max_power, limits=limits)
        )
        power_exact, power_summary = summarize_power_verdicts(power_verdicts)
        if power_exact is not None:
            if exact is not None and exact != power_exact:
                raise InternalInconsistencyError(
                    f"fibred powers give phi = {power_exact} but rules gave {exact}"
                )
            if exact is None:
                if upper is not None and upper < power_exact:
                    raise InternalInconsistencyError("power-determined value above upper bound")
                exact, tag = power_exact, "fibred-power-determined"

    report = assemble_report(
        setup, strat, purity, vertical, upper, lower, exact, tag,
        power_verdicts, warnings, notes,
    )

    mquery = certify_multiplicity_query(setup, strat, purity, limits)
    mbound = multiplicity_bound(mquery) if mquery is not None else None

    oracle = timed(
        "oracle",
        lambda: _run_oracle(setup, strat, options.seed, options.oracle_points_per_cell, limits),
    )

    document = {
        "tool": "fibrephi",
        "version": __version__,
        "command": "analyze",
        "input": str(setup_file.path),
        "input_digest": _digest(setup_file.path),
        "seed": options.seed,
        "dims": setup.dims(),
        "attestations": dict(report.attestations),
        "purity": {
            "pure": purity.pure,
            "dim": purity.dim,
            "piece_dims": list(purity.piece_dims),
        },
        "strata": _strata_json(strat),
        "fibre_dimensions": list(strat.fibre_dimensions),
        "lambda": strat.min_fibre_dim,
        "vertical": _vertical_json(report.vertical),
        "phi_upper": _ext(report.phi_upper),
        "phi_lower": _ext(report.phi_lower),
        "phi_exact": _ext(report.phi_exact),
        "exactness_tag": report.exactness_tag,
        "fibred_powers": [
            {"i": i, "verdict": _verdict_json(v)} for i, v in report.fibred_power_verdicts
        ],
        "fibred_power_summary": power_summary,
        "multiplicity_bound": mbound,
        "oracle": oracle,
        "warnings": list(report.warnings),
        "notes": list(report.notes),
    }
    if options.include_timings:
        document["timings"] = timings
    inconclusive = (
        purity.pure is None
        or vertical.verdict is None
        or any(v is None for _, v in power_verdicts)
    )
    return ReportDocument(document, inconclusive=inconclusive)


def run_stratify(setup_file: SetupFile, limits: Limits = DEFAULT_LIMITS) -> ReportDocument:
    setup = setup_file.setup
    strat = stratify_by_fibre_dimension(setup, limits)
    document = {
        "tool": "fibrephi",
        "version": __version__,
        "command": "stratify",
        "input": str(setup_file.path),
        "input_digest": _digest(setup_file.path),
        "dims": setup.dims(),
        "strata": _strata_json(strat),
        "fibre_dimensions": list(strat.fibre_dimensions),
        "lambda": strat.min_fibre_dim,
    }
    return ReportDocument(document)


def run_verify_power(
    setup_file: SetupFile, i: int, limits: Limits = DEFAULT_LIMITS
) -> ReportDocument:
    setup = setup_file.setup
    power = fibred_power(setup, i)
    result = has_vertical_component(power.ideal, setup, limits=limits)
    document = {
        "tool": "fibrephi",
        "version": __version__,
        "command": "verify-power",
        "input": str(setup_file.path),
        "input_digest": _digest(setup_file.path),
        "power": i,
        "variables": list(power.ring.variables),
        "generators": [str(g) for g in power.ideal.generators],
        "vertical": _vertical_json(result),
    }
    return ReportDocument(document, inconclusive=result.verdict is None)


# ---------------------------------------------------------------------------
# expectation comparison and the corpus runner
# ---------------------------------------------------------------------------


def _parse_expected_phi(text: str):
    t = text.strip().lower()
    if t in ("infinity", "inf"):
        return "infinity"
    if t in ("none", "n/a", "not-applicable", "null"):
        return None
    return int(t)


def _parse_expected_verdict(text: str):
    t = text.strip().lower()
    if t in ("inconclusive", "none", "null"):
        return None
    return _parse_bool(t, "expect")


def compare_expectations(document: dict, expect: dict[str, str]) -> list[str]:
    """Differences between a report document and a fixture's expect block."""
    problems: list[str] = []

    def check(label, actual, wanted):
        if actual != wanted:
            problems.append(f"{label}: expected {wanted!r}, got {actual!r}")

    for key in ("phi_upper", "phi_lower", "phi_exact"):
        if key in expect:
            check(key, document.get(key), _parse_expected_phi(expect[key]))
    if "exactness_tag" in expect:
        check("exactness_tag", document.get("exactness_tag"), expect["exactness_tag"].strip())
    if "strata" in expect:
        wanted = set()
        for chunk in expect["strata"].split(","):
            j, _, dim = chunk.partition(":")
            wanted.add((int(j), int(dim)))
        actual = {(s["j"], s["image_dim"]) for s in document.get("strata", [])}
        check("strata", actual, wanted)
    if "pure" in expect:
        check("pure", document.get("purity", {}).get("pure"), _parse_expected_verdict(expect["pure"]))
    if "pure_dim" in expect:
        check("pure_dim", document.get("purity", {}).get("dim"), int(expect["pure_dim"]))
    if "lambda" in expect:
        check("lambda", document.get("lambda"), int(expect["lambda"]))
    if "vertical" in expect:
        check(
            "vertical",
            document.get("vertical", {}).get("verdict"),
            _parse_expected_verdict(expect["vertical"]),
        )
    if "fibred_powers" in expect:
        wanted_powers = []
        for chunk in expect["fibred_powers"].split(","):
            i, _, verdict = chunk.partition(":")
            wanted_powers.append({"i": int(i), "verdict": _parse_expected_verdict(verdict)})
        check("fibred_powers", document.get("fibred_powers"), wanted_powers)
    if "multiplicity_bound" in expect:
        check("multiplicity_bound", document.get("multiplicity_bound"), int(expect["multiplicity_bound"]))
    return problems


def required_max_power(expect: dict[str, str]) -> int:
    if "fibred_powers" not in expect:
        return 0
    return max(int(chunk.partition(":")[0]) for chunk in expect["fibred_powers"].split(","))


def run_corpus(directory: str | Path, options: AnalyzeOptions | None = None) -> tuple[list[ReportDocument], int]:
    """Analyze every ``*.setup`` fixture under ``directory`` and compare expectations.

    Returns the per-file reports (sorted by path) and the overall exit code:
    3 on any expectation mismatch, otherwise the worst per-file code.
    """
    options = options or AnalyzeOptions()
    directory = Path(directory)
    paths = sorted(directory.glob("*.setup"))
    if not paths:
        raise SetupError(f"no *.setup fixtures under {directory}")
    reports: list[ReportDocument] = []
    exit_code = EXIT_OK
    for path in paths:
        setup_file = load_setup(path, options.limits)
        per_file = AnalyzeOptions(
            max_power=max(options.max_power, required_max_power(setup_file.expect)),
            seed=options.seed,
            include_timings=options.include_timings,
            oracle_points_per_cell=options.oracle_points_per_cell,
            limits=options.limits,
        )
        report = run_analyze(setup_file, per_file)
        report.mismatches = compare_expectations(report.document, setup_file.expect)
        reports.append(report)
        exit_code = max(exit_code, report.exit_code)
    return reports, exit_code


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _print_analysis_summary(doc: dict, stream=None):
    stream = stream or sys.stdout
    dims = doc["dims"]
    print(f"input: {doc['input']}", file=stream)
    print(
        f"dims: N={dims['N']} n={dims['n']} k={dims['k']} r={dims['r']} m={dims['m']}",
        file=stream,
    )
    purity = doc["purity"]
    print(
        f"pure-dimensional: {purity['pure']} (dim {purity['dim']}, pieces {purity['piece_dims']})",
        file=stream,
    )
    for s in doc["strata"]:
        ideal = ", ".join(s["image_ideal"]) or "0"
        print(f"stratum j={s['j']}: image dim {s['image_dim']}, image ideal ({ideal})", file=stream)
    vertical = doc["vertical"]
    line = f"vertical component: {vertical['verdict']}"
    if vertical["witness"]:
        line += f" (witness {vertical['witness']})"
    print(line, file=stream)
    print(
        f"phi_upper = {doc['phi_upper']}  phi_lower = {doc['phi_lower']}  "
        f"phi_exact = {doc['phi_exact']} [{doc['exactness_tag']}]",
        file=stream,
    )
    if doc["fibred_powers"]:
        verdicts = ", ".join(f"{e['i']}:{e['verdict']}" for e in doc["fibred_powers"])
        print(f"fibred powers: {verdicts} => {doc['fibred_power_summary']}", file=stream)
    if doc["multiplicity_bound"] is not None:
        print(f"generic fibre cardinality bound: {doc['multiplicity_bound']}", file=stream)
    for w in doc["warnings"]:
        print(f"warning: {w}", file=stream)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibrephi",
        description="Exact bounds for the fibre-approximation invariant of a polynomial projection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="full pipeline on one setup file")
    analyze.add_argument("file")
    analyze.add_argument("--max-power", type=int, default=0, metavar="I")
    analyze.add_argument("--seed", type=int, default=0, metavar="S")
    analyze.add_argument("--json", dest="json_out", metavar="OUT")
    analyze.add_argument("--timings", action="store_true")

    stratify = sub.add_parser("stratify", help="fibre-dimension stratification only")
    stratify.add_argument("file")
    stratify.add_argument("--json", dest="json_out", metavar="OUT")

    verify = sub.add_parser("verify-power", help="vertical-component verdict on one fibred power")
    verify.add_argument("file")
    verify.add_argument("--i", type=int, required=True)
    verify.add_argument("--json", dest="json_out", metavar="OUT")

    corpus = sub.add_parser("corpus", help="run every *.setup fixture in a directory")
    corpus.add_argument("directory")
    corpus.add_argument("--seed", type=int, default=0, metavar="S")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            setup_file = load_setup(args.file)
            options = AnalyzeOptions(
                max_power=args.max_power, seed=args.seed, include_timings=args.timings
            )
            report = run_analyze(setup_file, options)
            _print_analysis_summary(report.document)
            if args.json_out:
                Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
            return report.exit_code
        if args.command == "stratify":
            report = run_stratify(load_setup(args.file))
            for s in report.document["strata"]:
                ideal = ", ".join(s["image_ideal"]) or "0"
                print(f"stratum j={s['j']}: image dim {s['image_dim']}, image ideal ({ideal})")
            if args.json_out:
                Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
            return report.exit_code
        if args.command == "verify-power":
            report = run_verify_power(load_setup(args.file), args.i)
            vertical = report.document["vertical"]
            print(f"power {args.i}: vertical = {vertical['verdict']}")
            if vertical["witness"]:
                print(f"witness: {vertical['witness']}")
            if args.json_out:
                Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
            return report.exit_code
        if args.command == "corpus":
            reports, exit_code = run_corpus(args.directory, AnalyzeOptions(seed=args.seed))
            width = max(len(r.document["input"]) for r in reports)
            for r in reports:
                status = "ok" if not r.mismatches else "MISMATCH"
                if r.inconclusive and not r.mismatches:
                    status = "inconclusive"
                print(f"{r.document['input']:<{width}}  {status}")
                for m in r.mismatches:
                    print(f"    {m}")
            return exit_code
        raise AssertionError("unreachable")
    except FibrephiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
