import pytest

from symboleo_kit.ast import SourceSpan
from symboleo_kit.report import (
    FORMATS,
    ReportRow,
    ReportTable,
    read_diagnostics,
    read_table,
    render,
    render_diagnostics,
    render_frequency,
    table_from_scores,
)
from symboleo_kit.scoring import bundled_annotations, by_case, frequency, score
from symboleo_kit.table1 import corrected_cells, printed_rows
from symboleo_kit.taxonomy import GRAMMAR, SECTIONS, SYNTAX, Diagnostic, Origin, Section


@pytest.fixture(scope="module")
def table():
    grouped = by_case(bundled_annotations())
    return table_from_scores(score(v, k) for k, v in grouped.items())


def test_rows_follow_table_order(table):
    assert [r.case for r in table.rows] == list(range(1, 39))
    assert [r.scenario for r in table.rows] == [r.scenario for r in printed_rows()]
    titles = [t for t, _ in table.groups()]
    assert len(titles) == 5 and titles[0] == "Without grammar"


def test_section_totals(table):
    totals = table.section_totals()
    assert (totals[Section.DOMAIN], totals[Section.DECLARATIONS], totals[Section.OBLIGATIONS_POWERS]) == (534, 539, 510)


@pytest.mark.parametrize("fmt", ["csv", "json-lines"])
def test_structured_table_round_trip(table, fmt):
    back = read_table(render(table, fmt))
    assert back.rows == table.rows


def test_text_rendering(table):
    text = render(table, "text")
    lines = text.splitlines()
    assert lines[0].split() == ["scenario", "case", "Cont", "Dom", "Dec", "Pre", "Pos", "Sig", "OP", "Cos", "Tot"]
    assert "[Grammar, theory, emotional prompt]" in lines
    assert lines[-1].split()[:4] == ["Total", str(table.section_totals()[Section.CONTRACT]), "534", "539"]


def test_single_row():
    row = ReportRow("ABC", 2, corrected_cells()[2])
    table = ReportTable([row])
    assert row.total == 64
    for fmt in FORMATS:
        out = render(table, fmt)
        assert "64" in out
    assert len(read_table(render(table, "csv")).rows) == 1


def test_frequency_rendering():
    report = frequency(bundled_annotations())
    text = render_frequency(report)
    assert "band: grammar adherence, environment variables, syntax: 297 of 610 (48.69%)" in text
    csv_out = render_frequency(report, "csv").splitlines()
    assert csv_out[0] == "taxonomy_id,name,weight,count,share_percent"
    counts = [int(line.split(",")[-2]) for line in csv_out[1:] if not line.startswith("band")]
    assert counts == sorted(counts, reverse=True)
    assert sum(counts) == 610
    assert render_frequency(report, "json-lines").count('"kind": "band"') == 1


DIAGS = [
    Diagnostic(GRAMMAR, Section.DOMAIN, "unknown type 'X', with comma", SourceSpan(1, 2, 1, 5), file="a.symboleo"),
    Diagnostic(SYNTAX, Section.OBLIGATIONS_POWERS, 'say "hi"', SourceSpan(3, 1, 4, 2), Origin.AUTO),
    Diagnostic(SYNTAX, Section.CONTRACT, "no span"),
]


@pytest.mark.parametrize("fmt", ["csv", "json-lines"])
def test_diagnostics_round_trip(fmt):
    back = read_diagnostics(render_diagnostics(DIAGS, fmt))
    assert back == DIAGS
    assert [d.file for d in back] == [d.file for d in DIAGS]


def test_diagnostics_text():
    lines = render_diagnostics(DIAGS).splitlines()
    assert lines[0] == "a.symboleo:1:2-1:5: [Dom] Inconsistency with the Grammar (w3): unknown type 'X', with comma"
    assert lines[2] == "[Cont] Incorrect Syntax (w2): no span"


def test_empty_diagnostics():
    assert read_diagnostics(render_diagnostics([], "csv")) == []
    assert render_diagnostics([], "json-lines") == ""
    assert read_diagnostics("") == []


def test_every_section_column_present():
    assert all(s.code in render(ReportTable([]), "csv") for s in SECTIONS)
