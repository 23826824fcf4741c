"""Weighted scoring of findings per structural section.

Findings come from two places: automated diagnostics (one finding each) and
manual annotation records that carry a count. A manual record absorbs any
automated diagnostic with the same error type and section, so nothing is
counted twice.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

from symboleo_kit.taxonomy import (
    SECTIONS,
    TAXONOMY,
    Diagnostic,
    Origin,
    Section,
    TaxonomyEntry,
    UnknownTaxonomy,
    lookup,
)

DEFAULT_MARGIN = 8
TOP_BAND = ("grammar adherence, environment variables, syntax", (9, 10, 15))


class AnnotationError(ValueError):
    def __init__(self, line_no: int, message: str) -> None:
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class UnknownTaxonomyId(AnnotationError):
    pass


class UnknownSection(AnnotationError):
    pass


class NonPositiveCount(AnnotationError):
    pass


@dataclass(frozen=True)
class Annotation:
    case_id: str
    section: Section
    taxonomy: TaxonomyEntry
    count: int
    note: str = ""
    origin: Origin = Origin.MANUAL

    @property
    def weight(self) -> int:
        return self.taxonomy.weight

    def record(self) -> str:
        return f"{self.case_id} | {self.section.code} | {self.taxonomy.id} | {self.count} | {self.note}"


def load_annotations(text: str) -> list[Annotation]:
    """Parse ``caseId | sectionBucket | taxonomyId | count | note`` records."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|", 4)]
        if len(parts) < 4:
            raise AnnotationError(no, f"expected at least 4 '|'-separated fields, got {len(parts)}")
        case_id, section, tid, count = parts[:4]
        note = parts[4] if len(parts) == 5 else ""
        try:
            entry = lookup(tid)
        except (UnknownTaxonomy, ValueError):
            raise UnknownTaxonomyId(no, f"unknown taxonomy id {tid!r}") from None
        try:
            bucket = Section.parse(section)
        except ValueError:
            raise UnknownSection(no, f"unknown section bucket {section!r}") from None
        try:
            n = int(count)
        except ValueError:
            raise NonPositiveCount(no, f"count {count!r} is not an integer") from None
        if n < 1:
            raise NonPositiveCount(no, f"count must be positive, got {n}")
        out.append(Annotation(case_id, bucket, entry, n, note))
    return out


def bundled_annotations(name: str = "gpt-4o") -> list[Annotation]:
    """The reconstructed annotation corpus shipped with the package."""
    path = resources.files("symboleo_kit").joinpath(f"data/annotations/{name}.txt")
    return load_annotations(path.read_text(encoding="utf-8"))


def by_case(annotations: Iterable[Annotation]) -> dict[str, list[Annotation]]:
    grouped: dict[str, list[Annotation]] = {}
    for a in annotations:
        grouped.setdefault(a.case_id, []).append(a)
    return grouped


@dataclass(frozen=True)
class Finding:
    taxonomy: TaxonomyEntry
    section: Section
    count: int = 1
    origin: Origin = Origin.AUTO
    corroborated: bool = False
    note: str = ""

    @property
    def weight(self) -> int:
        return self.taxonomy.weight

    @property
    def weighted(self) -> int:
        return self.weight * self.count


def merge(auto: Iterable[Diagnostic], manual: Iterable[Annotation]) -> list[Finding]:
    manual = list(manual)
    keys = {(a.taxonomy.id, a.section) for a in manual}
    corroborated: set[tuple[int, Section]] = set()
    findings = []
    for d in auto:
        key = (d.taxonomy.id, d.section)
        if key in keys:
            corroborated.add(key)
        else:
            findings.append(Finding(d.taxonomy, d.section, 1, Origin.AUTO, note=d.message))
    manual_findings = [
        Finding(a.taxonomy, a.section, a.count, Origin.MANUAL, (a.taxonomy.id, a.section) in corroborated, a.note)
        for a in manual
    ]
    return manual_findings + findings


@dataclass(frozen=True)
class ScoreReport:
    case_id: str | None
    per_section: Mapping[Section, int]
    total: int

    def row(self) -> list[int]:
        return [self.per_section[s] for s in SECTIONS] + [self.total]


def score(findings: Iterable[Finding | Annotation], case_id: str | None = None) -> ScoreReport:
    per_section = {s: 0 for s in SECTIONS}
    for f in findings:
        per_section[f.section] += f.taxonomy.weight * f.count
    return ScoreReport(case_id, per_section, sum(per_section.values()))


class Verdict(enum.Enum):
    EQUIVALENT = "Equivalent"
    DIFFERENT = "Different"


def compare(a: ScoreReport, b: ScoreReport, margin: int = DEFAULT_MARGIN) -> Verdict:
    """Two reports are equivalent when their totals differ by at most ``margin``.

    Symmetric and reflexive, but not transitive.
    """
    if margin < 0:
        raise ValueError("margin must be non-negative")
    return Verdict.EQUIVALENT if abs(a.total - b.total) <= margin else Verdict.DIFFERENT


@dataclass(frozen=True)
class FrequencyReport:
    counts: list[tuple[TaxonomyEntry, int]]  # descending by count
    shares: dict[int, float]  # taxonomy id -> percent
    bands: dict[str, tuple[int, float]] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)


def frequency(
    findings: Iterable[Finding | Annotation],
    bands: Mapping[str, Iterable[int]] | None = None,
) -> FrequencyReport:
    """Count findings per error type (not weighted) and their percentage shares."""
    counter: Counter[int] = Counter()
    for f in findings:
        counter[f.taxonomy.id] += f.count
    total = sum(counter.values())
    counts = sorted(((e, counter[e.id]) for e in TAXONOMY if counter[e.id]), key=lambda ec: (-ec[1], ec[0].id))
    shares = {e.id: (100.0 * c / total) for e, c in counts}
    band_report = {}
    for name, ids in (dict([TOP_BAND]) if bands is None else bands).items():
        n = sum(counter[i] for i in ids)
        band_report[name] = (n, 100.0 * n / total if total else 0.0)
    return FrequencyReport(counts, shares, band_report)
