from symboleo_kit.scoring import bundled_annotations, by_case, score
from symboleo_kit.table1 import ERRATA, corrected_cells, printed_rows, printed_section_totals
from symboleo_kit.taxonomy import SECTIONS, Section


def test_printed_table_shape():
    rows = printed_rows()
    assert [r.case for r in rows] == list(range(1, 39))
    assert rows[0].scenario == "No." and rows[1].scenario == "ABC"
    totals = printed_section_totals()
    assert totals[Section.DOMAIN] == 534


def test_corrected_rows_sum_to_printed_totals():
    cells = corrected_cells()
    for row in printed_rows():
        assert sum(cells[row.case].values()) == row.total, row.case
    for s in SECTIONS:
        assert sum(cells[c][s] for c in cells) == printed_section_totals()[s], s.code


def test_errata_only_touch_listed_cells():
    cells = corrected_cells()
    touched = {(case, section) for case, section, *_ in ERRATA}
    for row in printed_rows():
        for s in SECTIONS:
            if (row.case, s) not in touched:
                assert cells[row.case][s] == row.cells[s]


def test_bundled_corpus_reproduces_corrected_cells():
    grouped = by_case(bundled_annotations())
    cells = corrected_cells()
    for case, expected in cells.items():
        report = score(grouped[f"case-{case:02d}"])
        assert dict(report.per_section) == expected, case
