"""Published weighted totals for the 38 GPT-4o generations, used as a scoring oracle."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from symboleo_kit.taxonomy import SECTIONS, Section


@dataclass(frozen=True)
class TableRow:
    scenario: str
    case: int
    cells: dict[Section, int]
    total: int


# (case, section, printed, reconstructed, reason)
ERRATA = (
    (17, Section.DOMAIN, 10, 14,
     "row sums to 32 against a printed total of 36, and the Dom column sums to 530 "
     "against a printed 534; a Dom cell of 14 satisfies both"),
    (1, Section.CONTRACT, 1, 2, "1 is not a sum of weights 2/3/4; moved one point from Dom"),
    (1, Section.DOMAIN, 67, 66, "balances the Cont adjustment of case 1"),
    (3, Section.CONTRACT, 1, 0, "1 is not a sum of weights 2/3/4; moved one point to Dom"),
    (3, Section.DOMAIN, 27, 28, "balances the Cont adjustment of case 3"),
)


def _read() -> tuple[list[TableRow], dict[Section, int]]:
    text = resources.files("symboleo_kit").joinpath("data/table1.csv").read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows, totals = [], {}
    for rec in csv.DictReader(lines):
        cells = {s: int(rec[s.code]) for s in SECTIONS}
        if rec["scenario"] == "Total":
            totals = cells
            continue
        rows.append(TableRow(rec["scenario"], int(rec["case"]), cells, int(rec["Tot"])))
    return rows, totals


def printed_rows() -> list[TableRow]:
    return _read()[0]


def printed_section_totals() -> dict[Section, int]:
    return _read()[1]


def corrected_cells() -> dict[int, dict[Section, int]]:
    cells = {r.case: dict(r.cells) for r in printed_rows()}
    for case, section, printed, fixed, _ in ERRATA:
        assert cells[case][section] == printed
        cells[case][section] = fixed
    return cells
