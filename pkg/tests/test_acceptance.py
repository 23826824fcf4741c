"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that conftest prints at the end of the
session. Run this file directly to get just those lines.
"""

import contextlib
import io
import json
import socket
import sys
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings

sys.path.insert(0, str(Path(__file__).parent))

from ast_strategies import specs  # noqa: E402
from conftest import FIXTURES, SCENARIO_SPECS, fixture_text  # noqa: E402
from symboleo_kit import cli, format_spec, lint, parse  # noqa: E402
from symboleo_kit.harness import ENDPOINT_PRESETS, EndpointConfig, bundled_fixtures, run_pipeline  # noqa: E402
from symboleo_kit.linter import check_power_consequents  # noqa: E402
from symboleo_kit.promptgen import BASE_STATEMENT, PromptAssets, PromptConfig, paper_matrix  # noqa: E402
from symboleo_kit.scoring import Verdict, bundled_annotations, by_case, compare, frequency, score  # noqa: E402
from symboleo_kit.table1 import printed_rows, printed_section_totals  # noqa: E402
from symboleo_kit.taxonomy import (  # noqa: E402
    DATA_TYPE,
    GRAMMAR,
    SECTIONS,
    TAXONOMY,
    Diagnostic,
    Section,
    Tier,
    lookup,
)

# Pinned limits.
PARSE_SECONDS = 1.0
SCORE_SECONDS = 1.0
REPLAY_SECONDS = 5.0
ROUND_TRIP_EXAMPLES = 200
MARGIN = 8
TOP_BAND_TARGET, TOP_BAND_TOLERANCE = 49.0, 1.0

RESULTS: dict[int, tuple[bool, str]] = {}

FRAGMENTS = ("power_incorrect", "power_corrected", "declarations_incorrect", "declarations_corrected")


def record(number: int, ok: bool, detail: str) -> None:
    RESULTS[number] = (ok, detail)
    assert ok, f"criterion {number}: {detail}"


def summary_lines() -> list[str]:
    return [f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


def _quiet_main(argv: list[str]) -> int:
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return cli.main(argv)


def test_criterion_01_parser_fixtures():
    sources = [(fixture_text("overview_listing.symboleo"), False)]
    sources += [(fixture_text(f"{name}.symboleo"), True) for name in FRAGMENTS]
    sources += [(p.read_text(encoding="utf-8"), False) for p in SCENARIO_SPECS.values()]
    start = time.perf_counter()
    results = [parse(text, fragment=frag) for text, frag in sources]
    elapsed = time.perf_counter() - start
    all_parse = all(r.spec is not None for r in results)
    corrected_clean = all(
        parse(fixture_text(f"{n}.symboleo"), fragment=True).diagnostics == []
        for n in ("power_corrected", "declarations_corrected")
    )
    scenarios_clean = all(r.diagnostics == [] for r in results[-3:])
    ok = all_parse and corrected_clean and scenarios_clean and elapsed < PARSE_SECONDS
    record(1, ok, f"{len(sources)} sources parsed, corrected snippets clean={corrected_clean}, "
                  f"scenarios clean={scenarios_clean}, {elapsed:.3f}s < {PARSE_SECONDS}s")


def test_criterion_02_round_trip():
    seen = []

    @settings(max_examples=ROUND_TRIP_EXAMPLES, deadline=None, derandomize=True,
              suppress_health_check=[HealthCheck.too_slow])
    @given(specs)
    def generated(spec):
        seen.append(spec)
        assert parse(format_spec(spec)).spec == spec

    generated()
    fixtures = [(p.read_text(encoding="utf-8"), False) for p in SCENARIO_SPECS.values()]
    fixtures += [(fixture_text("power_corrected.symboleo"), True), (fixture_text("power_incorrect.symboleo"), True),
                 (fixture_text("declarations_corrected.symboleo"), True),
                 (fixture_text("overview_listing.symboleo"), False)]
    fixture_ok = 0
    for text, frag in fixtures:
        spec = parse(text, fragment=frag).spec
        fixture_ok += parse(format_spec(spec), fragment=frag).spec == spec
    ok = len(seen) >= ROUND_TRIP_EXAMPLES and fixture_ok == len(fixtures)
    record(2, ok, f"{len(seen)} generated ASTs and {fixture_ok}/{len(fixtures)} fixtures round-trip exactly")


def test_criterion_03_lint_oracle():
    bad = parse(fixture_text("power_incorrect.symboleo"), fragment=True).spec
    good = parse(fixture_text("power_corrected.symboleo"), fragment=True).spec
    bad_diags = lint(bad)
    (power,) = bad.powers
    power_ok = (
        len(bad_diags) == 1
        and bad_diags[0].taxonomy is GRAMMAR
        and bad_diags[0].weight == 3
        and bad_diags[0].span == power.consequent.span
        and [d for d in lint(good) if d.taxonomy is GRAMMAR] == []
        and check_power_consequents(good) == []
    )
    env_bad = lint(parse(fixture_text("declarations_incorrect.symboleo"), fragment=True).spec)
    env_good = lint(parse(fixture_text("declarations_corrected.symboleo"), fragment=True).spec)
    env_ok = len(env_bad) == 4 and all(d.taxonomy is DATA_TYPE for d in env_bad) and env_good == []
    record(3, power_ok and env_ok,
           f"power pair 1/0 on consequent span: {power_ok}; Env declarations pair {len(env_bad)}/{len(env_good)}")


def test_criterion_04_scorer_oracle():
    start = time.perf_counter()
    grouped = by_case(bundled_annotations())
    reports = {int(k.split("-")[1]): score(v, k) for k, v in grouped.items()}
    elapsed = time.perf_counter() - start
    expected_totals = {r.case: r.total for r in printed_rows()}
    mismatched = [c for c, t in expected_totals.items() if reports[c].total != t]
    printed = printed_section_totals()
    got = {s: sum(r.per_section[s] for r in reports.values()) for s in SECTIONS}
    grand = {"Dom": 534, "Dec": 539, "Pre": 92, "Pos": 15, "Sig": 98, "OP": 510, "Cos": 103}
    grand_ok = all(got[Section.parse(code)] == v for code, v in grand.items()) and got == printed
    ok = len(reports) == 38 and not mismatched and grand_ok and elapsed < SCORE_SECONDS
    record(4, ok, f"38 row totals mismatched={mismatched}, section totals match={grand_ok}, "
                  f"{elapsed:.3f}s < {SCORE_SECONDS}s")


def test_criterion_05_equivalence():
    grouped = by_case(bundled_annotations())

    def total(case):
        return score(grouped[f"case-{case:02d}"])

    pairs = {(5, 9): Verdict.EQUIVALENT, (8, 10): Verdict.EQUIVALENT, (23, 27): Verdict.EQUIVALENT,
             (1, 2): Verdict.DIFFERENT}
    got = {p: compare(total(p[0]), total(p[1]), MARGIN) for p in pairs}
    record(5, got == pairs, ", ".join(f"{a}~{b}: {v.value}" for (a, b), v in got.items()) + f" (margin {MARGIN})")


def test_criterion_06_matrix():
    matrix = paper_matrix()
    unique = len({c.flags() for c in matrix})
    no_grammar = [c for c in matrix if not c.include_grammar]
    blocks = {}
    for c in matrix:
        if c.include_grammar:
            blocks.setdefault((c.include_theory, c.include_emotional), []).append(c)
    cells_ok = sorted(len(v) for v in blocks.values()) == [9, 9, 9, 9] and len(blocks) == 4
    two = PromptConfig.for_case(2).flags() == (False, False, False, ("A", "B", "C"))
    thirty_three = PromptConfig.for_case(33).flags() == (True, True, True, ("A", "B", "C"))
    ok = len(matrix) == 38 and unique == 38 and len(no_grammar) == 2 and cells_ok and two and thirty_three
    record(6, ok, f"{len(matrix)} configs, {unique} unique, {len(no_grammar)} without grammar, "
                  f"9x4 partition={cells_ok}, cases 2/33 match={two and thirty_three}")


def test_criterion_07_prompt_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    codes = (_quiet_main(["prompts", str(a)]), _quiet_main(["prompts", str(b)]))
    names = sorted(p.name for p in a.iterdir())
    identical = names == sorted(p.name for p in b.iterdir()) and all(
        (a / n).read_bytes() == (b / n).read_bytes() for n in names)
    query = PromptAssets.load().final_query
    framed = all((a / n).read_text(encoding="utf-8").startswith(BASE_STATEMENT)
                 and (a / n).read_text(encoding="utf-8").endswith(query) for n in names)
    ok = codes == (0, 0) and len(names) == 38 and identical and framed
    record(7, ok, f"{len(names)} prompts, byte-identical across runs={identical}, base statement and query framing={framed}")


def test_criterion_08_frequency():
    report = frequency(bundled_annotations())
    ((_, (count, share)),) = report.bands.items()
    ok = abs(share - TOP_BAND_TARGET) <= TOP_BAND_TOLERANCE
    record(8, ok, f"top band {count}/{report.total} = {share:.2f}% (target {TOP_BAND_TARGET}% +/- {TOP_BAND_TOLERANCE})")


def _strip_timestamps(path: Path) -> dict:
    data = json.loads(path.read_text(encoding="utf-8"))
    data.pop("timestamps")
    return data


def test_criterion_09_replay_pipeline(tmp_path, monkeypatch):
    def refuse(*args, **kwargs):
        raise AssertionError("network access during replay")

    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket, "create_connection", refuse)
    roots, times, codes = [], [], []
    for name in ("first", "second"):
        runs = tmp_path / name
        start = time.perf_counter()
        codes.append(_quiet_main(["run", "--cases", "2,33", "--mode", "replay", "--runs-dir", str(runs)]))
        times.append(time.perf_counter() - start)
        roots.extend(runs.iterdir())
    records = [[_strip_timestamps(root / case / "record.json") for case in ("case-02", "case-33")] for root in roots]
    populated = all(r["parse"] is not None and r["extracted_source"] and r["lint_diagnostics"] is not None
                    and not r["errors"] for r in records[0])
    identical = len(records) == 2 and records[0] == records[1]
    ok = codes == [0, 0] and populated and identical and max(times) < REPLAY_SECONDS
    record(9, ok, f"exit codes {codes}, parse+lint populated={populated}, records identical modulo timestamps="
                  f"{identical}, slowest run {max(times):.3f}s < {REPLAY_SECONDS}s")


def _every_diagnostic() -> list[Diagnostic]:
    out = []
    for path in sorted(FIXTURES.glob("*.symboleo")):
        result = parse(path.read_text(encoding="utf-8"), fragment=path.stem in FRAGMENTS)
        out += result.diagnostics + (lint(result.spec) if result.spec else [])
    assets = PromptAssets.load()
    for preset in ENDPOINT_PRESETS:
        cfg = EndpointConfig(**ENDPOINT_PRESETS[preset], name=preset, mode="replay", fixture_store=bundled_fixtures())
        for rec in run_pipeline([PromptConfig.for_case(2), PromptConfig.for_case(33)], cfg, assets=assets):
            out += rec.diagnostics
    return out


def test_criterion_10_taxonomy_registry():
    tiers = [sum(e.tier is t for e in TAXONOMY) for t in (Tier.HIGH, Tier.MEDIUM, Tier.LOW)]
    weights = sorted({e.weight for e in TAXONOMY}, reverse=True)
    diags = _every_diagnostic()
    registered = all(lookup(d.taxonomy.id) is d.taxonomy for d in diags)
    ok = len(TAXONOMY) == 16 and tiers == [7, 7, 2] and weights == [4, 3, 2] and registered and diags
    record(10, bool(ok), f"{len(TAXONOMY)} entries, tier sizes {tiers}, weights {weights}, "
                         f"{len(diags)} sampled diagnostics all registered={registered}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
