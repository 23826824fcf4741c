"""Results-table shaped score reports and error-frequency listings.

One model, three renderings: aligned text for people, CSV and JSON lines for
diffing and re-reading.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable

from symboleo_kit.ast import SourceSpan
from symboleo_kit.promptgen import PromptConfig
from symboleo_kit.scoring import FrequencyReport, ScoreReport
from symboleo_kit.taxonomy import SECTIONS, Diagnostic, Origin, Section, lookup

# (title, first case, last case) in results-table order.
GROUPS = (
    ("Without grammar", 1, 2),
    ("Grammar, no theory, no emotional prompt", 3, 11),
    ("Grammar, no theory, emotional prompt", 12, 20),
    ("Grammar, theory, no emotional prompt", 21, 29),
    ("Grammar, theory, emotional prompt", 30, 38),
)
FORMATS = ("text", "csv", "json-lines")
HEADER = ["scenario", "case"] + [s.code for s in SECTIONS] + ["Tot"]


def group_of(case: int | None) -> str:
    for title, lo, hi in GROUPS:
        if case is not None and lo <= case <= hi:
            return title
    return "Other"


def case_number(case_id: str | int | None) -> int | None:
    if case_id is None or isinstance(case_id, int):
        return case_id
    digits = "".join(ch for ch in str(case_id) if ch.isdigit())
    return int(digits) if digits else None


@dataclass(frozen=True)
class ReportRow:
    scenario: str
    case: int | None
    cells: dict[Section, int]

    @property
    def total(self) -> int:
        return sum(self.cells.values())

    @classmethod
    def from_score(cls, report: ScoreReport, scenario: str | None = None) -> ReportRow:
        case = case_number(report.case_id)
        if scenario is None:
            scenario = PromptConfig.for_case(case).scenario_label if case and 1 <= case <= 38 else ""
        return cls(scenario, case, dict(report.per_section))


@dataclass
class ReportTable:
    rows: list[ReportRow] = field(default_factory=list)

    def sorted(self) -> ReportTable:
        return ReportTable(sorted(self.rows, key=lambda r: (r.case is None, r.case or 0, r.scenario)))

    def section_totals(self) -> dict[Section, int]:
        return {s: sum(r.cells[s] for r in self.rows) for s in SECTIONS}

    def groups(self) -> list[tuple[str, list[ReportRow]]]:
        out: list[tuple[str, list[ReportRow]]] = []
        for row in self.rows:
            title = group_of(row.case)
            if not out or out[-1][0] != title:
                out.append((title, []))
            out[-1][1].append(row)
        return out


def _row_values(row: ReportRow) -> list[str]:
    return [row.scenario, "" if row.case is None else str(row.case)] + [str(row.cells[s]) for s in SECTIONS] + [
        str(row.total)
    ]


def render_text(table: ReportTable) -> str:
    body: list[list[str] | str] = []
    for title, rows in table.groups():
        body.append(title)
        body.extend(_row_values(r) for r in rows)
    totals = table.section_totals()
    total_row = ["Total", ""] + [str(totals[s]) for s in SECTIONS] + [""]
    widths = [len(h) for h in HEADER]
    for line in body + [total_row]:
        if isinstance(line, list):
            widths = [max(w, len(v)) for w, v in zip(widths, line)]

    def fmt(values: list[str]) -> str:
        cols = [values[0].ljust(widths[0])] + [v.rjust(w) for v, w in zip(values[1:], widths[1:])]
        return "  ".join(cols).rstrip()

    out = [fmt(HEADER), fmt(["-" * w for w in widths])]
    for line in body:
        out.append(f"[{line}]" if isinstance(line, str) else fmt(line))
    out.append(fmt(["-" * w for w in widths]))
    out.append(fmt(total_row))
    return "\n".join(out) + "\n"


def render_csv(table: ReportTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group"] + HEADER)
    for r in table.rows:
        w.writerow([group_of(r.case)] + _row_values(r))
    totals = table.section_totals()
    w.writerow(["", "Total", ""] + [totals[s] for s in SECTIONS] + [""])
    return buf.getvalue()


def render_json_lines(table: ReportTable) -> str:
    lines = []
    for r in table.rows:
        lines.append(json.dumps({
            "kind": "row", "group": group_of(r.case), "scenario": r.scenario, "case": r.case,
            **{s.code: r.cells[s] for s in SECTIONS}, "total": r.total,
        }))
    totals = table.section_totals()
    lines.append(json.dumps({"kind": "total", **{s.code: totals[s] for s in SECTIONS}}))
    return "\n".join(lines) + "\n"


def render(table: ReportTable, fmt: str = "text") -> str:
    return {"text": render_text, "csv": render_csv, "json-lines": render_json_lines}[fmt](table)


def read_table(text: str) -> ReportTable:
    """Read back CSV or JSON-lines output of :func:`render`; the totals row is recomputed."""
    stripped = text.lstrip()
    rows = []
    if stripped.startswith("{"):
        for line in stripped.splitlines():
            if not line.strip():
                break
            rec = json.loads(line)
            if rec.get("kind") == "row":
                rows.append(ReportRow(rec["scenario"], rec["case"], {s: int(rec[s.code]) for s in SECTIONS}))
        return ReportTable(rows)
    block = stripped.split("\n\n", 1)[0]
    for rec in csv.DictReader(io.StringIO(block)):
        if rec["scenario"] == "Total" and not rec["case"]:
            continue
        case = int(rec["case"]) if rec["case"] else None
        rows.append(ReportRow(rec["scenario"], case, {s: int(rec[s.code]) for s in SECTIONS}))
    return ReportTable(rows)


# -- frequency listing ------------------------------------------------------------


def frequency_rows(report: FrequencyReport) -> list[tuple[int, str, int, float]]:
    return [(e.id, e.name, c, report.shares[e.id]) for e, c in report.counts]


def render_frequency(report: FrequencyReport, fmt: str = "text") -> str:
    rows = frequency_rows(report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["taxonomy_id", "name", "weight", "count", "share_percent"])
        for tid, name, count, share in rows:
            w.writerow([tid, name, lookup(tid).weight, count, f"{share:.2f}"])
        for name, (count, share) in report.bands.items():
            w.writerow(["band", name, "", count, f"{share:.2f}"])
        return buf.getvalue()
    if fmt == "json-lines":
        lines = [json.dumps({"kind": "frequency", "taxonomy_id": tid, "name": name, "count": count,
                             "share_percent": round(share, 2)}) for tid, name, count, share in rows]
        lines += [json.dumps({"kind": "band", "name": name, "count": count, "share_percent": round(share, 2)})
                  for name, (count, share) in report.bands.items()]
        return "\n".join(lines) + "\n"
    width = max((len(name) for _, name, _, _ in rows), default=4)
    out = [f"{'id':>2}  {'type'.ljust(width)}  {'count':>5}  {'share':>7}"]
    for tid, name, count, share in rows:
        out.append(f"{tid:>2}  {name.ljust(width)}  {count:>5}  {share:>6.2f}%")
    out.append(f"    {'all types'.ljust(width)}  {report.total:>5}  {100.0 if report.total else 0.0:>6.2f}%")
    for name, (count, share) in report.bands.items():
        out.append(f"band: {name}: {count} of {report.total} ({share:.2f}%)")
    return "\n".join(out) + "\n"


def table_from_scores(reports: Iterable[ScoreReport]) -> ReportTable:
    return ReportTable([ReportRow.from_score(r) for r in reports]).sorted()


# -- diagnostics --------------------------------------------------------------------

DIAGNOSTIC_FIELDS = ("file", "span", "section", "taxonomy_id", "name", "weight", "origin", "message")


def _diag_values(d: Diagnostic) -> list[str]:
    return [d.file or "", str(d.span) if d.span else "", d.section.code, str(d.taxonomy.id),
            d.taxonomy.name, str(d.weight), d.origin.value, d.message]


def render_diagnostics(diagnostics: Iterable[Diagnostic], fmt: str = "text") -> str:
    diagnostics = list(diagnostics)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(DIAGNOSTIC_FIELDS)
        w.writerows(_diag_values(d) for d in diagnostics)
        return buf.getvalue()
    if fmt == "json-lines":
        return "".join(json.dumps(dict(zip(DIAGNOSTIC_FIELDS, _diag_values(d)))) + "\n" for d in diagnostics)
    return "".join(f"{d.file}:{d}\n" if d.file else f"{d}\n" for d in diagnostics)


def read_diagnostics(text: str) -> list[Diagnostic]:
    """Inverse of :func:`render_diagnostics` for the CSV and JSON-lines formats."""
    stripped = text.lstrip()
    if not stripped:
        return []
    if stripped.startswith("{"):
        recs = [json.loads(line) for line in stripped.splitlines() if line.strip()]
    else:
        recs = list(csv.DictReader(io.StringIO(stripped)))
    return [
        Diagnostic(
            taxonomy=lookup(int(r["taxonomy_id"])),
            section=Section.parse(r["section"]),
            message=r["message"],
            span=SourceSpan.parse(r["span"]) if r["span"] else None,
            origin=Origin(r["origin"]),
            file=r["file"] or None,
        )
        for r in recs
    ]
