"""Command-line entry point.

Exit codes: 0 success, 1 findings present, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from symboleo_kit import harness, report
from symboleo_kit.linter import check_power_consequents, lint
from symboleo_kit.parser import parse
from symboleo_kit.promptgen import (
    CASE_COUNT,
    InvalidAssets,
    MissingScenarioAsset,
    PromptAssets,
    PromptConfig,
    write_prompts,
)
from symboleo_kit.scoring import (
    DEFAULT_MARGIN,
    AnnotationError,
    Finding,
    bundled_annotations,
    by_case,
    compare,
    frequency,
    load_annotations,
    merge,
    score,
    ScoreReport,
)
from symboleo_kit.table1 import corrected_cells
from symboleo_kit.taxonomy import SECTIONS, Diagnostic, normalize

EXIT_OK, EXIT_FINDINGS, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _out(args: argparse.Namespace, text: str) -> None:
    if text and not args.quiet:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _with_file(diags: list[Diagnostic], path: str) -> list[Diagnostic]:
    return [Diagnostic(d.taxonomy, d.section, d.message, d.span, d.origin, file=path) for d in diags]


def _parse_file(path: str, fragment: bool):
    result = parse(_read(path), fragment=fragment)
    return result, list(result.diagnostics)


# -- commands ------------------------------------------------------------------------


def cmd_parse(args: argparse.Namespace) -> int:
    result, diags = _parse_file(args.path, args.fragment)
    if result.spec is not None:
        # Power consequents are constrained by the grammar itself, not by typing.
        diags += check_power_consequents(result.spec)
    diags = _with_file(normalize(diags), args.path)
    _out(args, report.render_diagnostics(diags, args.format))
    return EXIT_FINDINGS if diags or result.spec is None else EXIT_OK


def cmd_lint(args: argparse.Namespace) -> int:
    result, diags = _parse_file(args.path, args.fragment)
    if result.spec is not None:
        diags += lint(result.spec)
    diags = _with_file(normalize(diags), args.path)
    _out(args, report.render_diagnostics(diags, args.format))
    return EXIT_FINDINGS if diags or result.spec is None else EXIT_OK


def _load_annotation_arg(path: str | None) -> list:
    if path is None:
        return bundled_annotations()
    try:
        return load_annotations(_read(path))
    except AnnotationError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_score(args: argparse.Namespace) -> int:
    annotations = _load_annotation_arg(args.annotations)
    grouped = by_case(annotations)
    if args.case:
        key = _case_key(args.case)
        grouped = {key: grouped.get(key, [])}
    auto: list[Diagnostic] = []
    if args.lint:
        result, auto = _parse_file(args.lint, args.fragment)
        if result.spec is not None:
            auto += lint(result.spec)
        auto = normalize(auto)
    if not grouped:
        grouped = {args.case and _case_key(args.case) or None: []}
    if auto and len(grouped) > 1:
        raise UsageError("--lint needs a single case; select one with --case")
    reports = [score(merge(auto, manual), case) for case, manual in grouped.items()]
    table = report.table_from_scores(reports)
    if args.compare is None:
        _out(args, report.render(table, args.format))
        return EXIT_OK
    if len(reports) != 1:
        raise UsageError("--compare needs a single case; select one with --case")
    other = report.read_table(_read(args.compare))
    if len(other.rows) != 1:
        raise UsageError(f"{args.compare} must hold exactly one report row, found {len(other.rows)}")
    b = other.rows[0]
    verdict = compare(reports[0], ScoreReport(str(b.case), b.cells, b.total), args.margin)
    a_total, b_total = reports[0].total, b.total
    if args.format == "csv":
        text = f"verdict,a_total,b_total,margin\n{verdict.value},{a_total},{b_total},{args.margin}\n"
    elif args.format == "json-lines":
        text = json.dumps({"kind": "compare", "verdict": verdict.value, "a_total": a_total,
                           "b_total": b_total, "margin": args.margin}) + "\n"
    else:
        text = (report.render(table, "text") + f"{verdict.value}: totals {a_total} and {b_total} "
                f"differ by {abs(a_total - b_total)} (margin {args.margin})\n")
    _out(args, text)
    return EXIT_OK


def _assets(args: argparse.Namespace) -> PromptAssets:
    try:
        return PromptAssets.load(args.assets, grammar=args.grammar)
    except InvalidAssets as exc:
        raise UsageError(str(exc)) from exc


def cmd_prompts(args: argparse.Namespace) -> int:
    try:
        written = write_prompts(args.outdir, _assets(args))
    except MissingScenarioAsset as exc:
        raise UsageError(f"MissingScenarioAsset({exc.letter}): {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot write prompts: {exc}") from exc
    _out(args, f"wrote {len(written)} prompts to {args.outdir}\n" if args.format == "text" else "")
    return EXIT_OK


def _case_key(case: str | int) -> str:
    text = str(case)
    return text if text.startswith("case-") else f"case-{int(text):02d}"


def _selected_cases(spec: str) -> list[int]:
    if spec == "all":
        return list(range(1, CASE_COUNT + 1))
    try:
        cases = [int(c) for c in spec.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"--cases takes 'all' or comma-separated ids, got {spec!r}") from None
    bad = [c for c in cases if not 1 <= c <= CASE_COUNT]
    if bad or not cases:
        raise UsageError(f"case ids must be in 1..{CASE_COUNT}")
    return cases


def _endpoint(args: argparse.Namespace) -> harness.EndpointConfig:
    preset = dict(harness.ENDPOINT_PRESETS.get(args.endpoint, {"model_name": args.endpoint}))
    overrides = {
        "model_name": args.model, "base_url": args.base_url, "api_key_ref": args.api_key_env,
        "timeout_seconds": args.timeout, "max_prompt_chars": args.max_prompt_chars,
    }
    preset.update({k: v for k, v in overrides.items() if v is not None})
    store = args.fixtures or (harness.bundled_fixtures() if args.mode == "replay" else Path("fixtures"))
    try:
        return harness.EndpointConfig(mode=args.mode, fixture_store=store, name=args.endpoint, **preset)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_run(args: argparse.Namespace) -> int:
    cases = _selected_cases(args.cases)
    endpoint = _endpoint(args)
    if endpoint.mode != "replay" and not os.environ.get(endpoint.api_key_ref or ""):
        sys.stderr.write(f"AuthFailure: environment variable {endpoint.api_key_ref} is not set\n")
        return EXIT_ERROR
    if args.annotations:
        annotations = by_case(_load_annotation_arg(args.annotations))
    elif endpoint.identity == "gpt-4o" and not args.no_annotations:
        annotations = by_case(bundled_annotations())
    else:
        annotations = None
    configs = [PromptConfig.for_case(c) for c in cases]
    records = harness.run_pipeline(configs, endpoint, assets=_assets(args), annotations=annotations,
                                   parallelism=args.parallelism)
    root = harness.persist(records, args.runs_dir)
    lines = []
    for r in records:
        summary = {
            "case": r.case_id,
            "parse_ok": r.parse_ok,
            "diagnostics": len(r.diagnostics),
            "score": r.score.total if r.score else None,
            "error": r.errors[0]["kind"] if r.errors else None,
        }
        if args.format == "json-lines":
            lines.append(json.dumps(summary))
        elif args.format == "csv":
            lines.append(",".join("" if v is None else str(v).lower() if isinstance(v, bool) else str(v)
                                  for v in summary.values()))
        else:
            parse_state = {True: "ok", False: "diagnostics", None: "n/a"}[r.parse_ok]
            lines.append(f"case-{r.case_id:02d}  parse={parse_state}  diagnostics={summary['diagnostics']}"
                         f"  score={summary['score'] if summary['score'] is not None else '-'}"
                         + (f"  error={summary['error']}" if summary["error"] else ""))
    header = "case,parse_ok,diagnostics,score,error\n" if args.format == "csv" else ""
    footer = f"records in {root}\n" if args.format == "text" else ""
    _out(args, header + "\n".join(lines) + "\n" + footer)
    return EXIT_ERROR if any(r.transport_failed for r in records) else EXIT_OK


def _rows_from_runs(path: Path) -> tuple[list[ScoreReport], list[Finding]]:
    reports, findings = [], []
    for rec_path in sorted(path.glob("**/record.json")):
        rec = harness.load_record(rec_path)
        for line in rec["parse"]["diagnostics"] if rec.get("parse") else []:
            d = Diagnostic.from_record(line)
            findings.append(Finding(d.taxonomy, d.section))
        for line in rec["lint_diagnostics"]:
            d = Diagnostic.from_record(line)
            findings.append(Finding(d.taxonomy, d.section))
        if rec.get("score"):
            cells = {s: rec["score"][s.code] for s in SECTIONS}
            reports.append(ScoreReport(f"case-{rec['case_id']:02d}", cells, rec["score"]["total"]))
    return reports, findings


def cmd_report(args: argparse.Namespace) -> int:
    freq = None
    if args.table1:
        table = report.ReportTable([
            report.ReportRow(PromptConfig.for_case(case).scenario_label, case, cells)
            for case, cells in sorted(corrected_cells().items())
        ])
    else:
        reports: list[ScoreReport] = []
        findings: list = []
        for src in args.inputs or [None]:
            if src is not None and Path(src).is_dir():
                r, f = _rows_from_runs(Path(src))
                reports += r
                findings += f
                continue
            annotations = _load_annotation_arg(src)
            findings += annotations
            reports += [score(a, case) for case, a in by_case(annotations).items()]
        if not reports:
            raise UsageError("no scored cases in the input")
        table = report.table_from_scores(reports)
        freq = frequency(findings) if findings else None
    text = report.render(table, args.format)
    if freq is not None and not args.no_frequency:
        text += ("\n" if args.format != "json-lines" else "") + report.render_frequency(freq, args.format)
    _out(args, text)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def globals_(default_format, default_quiet) -> argparse.ArgumentParser:
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--format", choices=report.FORMATS, default=default_format, help="output format")
        g.add_argument("--quiet", action="store_true", default=default_quiet, help="suppress normal output")
        return g

    # Global flags work before or after the subcommand; the subcommand copy must
    # not reset a value given before it.
    common = globals_(argparse.SUPPRESS, argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="symboleo-kit", description="Parse, lint and score Symboleo specifications.",
                                parents=[globals_("text", False)])
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("parse", cmd_parse, "report syntax and grammar diagnostics"),
                            ("lint", cmd_lint, "parse and run every semantic check")):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("path")
        c.add_argument("--fragment", action="store_true", help="input is a partial specification")
        c.set_defaults(fn=fn)

    c = sub.add_parser("score", parents=[common], help="weighted scores from annotations (and optional lint input)")
    c.add_argument("annotations", nargs="?", help="annotation file (default: the bundled corpus)")
    c.add_argument("--case", help="score only this case, e.g. 2 or case-02")
    c.add_argument("--lint", metavar="SPEC", help="merge lint diagnostics of this specification")
    c.add_argument("--fragment", action="store_true", help="the --lint input is a partial specification")
    c.add_argument("--compare", metavar="REPORT", help="CSV or JSON-lines report to compare against")
    c.add_argument("--margin", type=int, default=DEFAULT_MARGIN)
    c.set_defaults(fn=cmd_score)

    c = sub.add_parser("prompts", parents=[common], help="write the 38 prompt files")
    c.add_argument("outdir")
    c.add_argument("--assets", help="assets directory (default: bundled)")
    c.add_argument("--grammar", help="grammar file to use instead of the bundled one")
    c.set_defaults(fn=cmd_prompts)

    c = sub.add_parser("run", parents=[common], help="run the generation pipeline")
    c.add_argument("--cases", default="2,33", help="'all' or comma-separated case ids")
    c.add_argument("--mode", choices=harness.MODES, default="replay")
    c.add_argument("--endpoint", default="gpt-4o", help=f"preset ({', '.join(harness.ENDPOINT_PRESETS)}) or a name")
    c.add_argument("--model")
    c.add_argument("--base-url")
    c.add_argument("--api-key-env", help="environment variable holding the API key")
    c.add_argument("--timeout", type=float)
    c.add_argument("--max-prompt-chars", type=int)
    c.add_argument("--fixtures", type=Path, help="fixture store (default: bundled for replay)")
    c.add_argument("--runs-dir", type=Path, default=Path("runs"))
    c.add_argument("--parallelism", type=int, default=1)
    c.add_argument("--annotations", help="annotation file used to score the cases")
    c.add_argument("--no-annotations", action="store_true", help="do not score with the bundled corpus")
    c.add_argument("--assets", help="assets directory (default: bundled)")
    c.add_argument("--grammar", help="grammar file to use instead of the bundled one")
    c.set_defaults(fn=cmd_run)

    c = sub.add_parser("report", parents=[common], help="weighted results table and error frequencies")
    c.add_argument("inputs", nargs="*", help="annotation files or run directories (default: bundled corpus)")
    c.add_argument("--table1", action="store_true", help="report the published per-section totals")
    c.add_argument("--no-frequency", action="store_true")
    c.set_defaults(fn=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"symboleo-kit: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
