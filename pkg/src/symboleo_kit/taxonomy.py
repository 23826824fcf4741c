"""Weighted error taxonomy, structural section buckets and the Diagnostic record."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from symboleo_kit.ast import SourceSpan


class Tier(enum.Enum):
    HIGH = 4
    MEDIUM = 3
    LOW = 2

    @property
    def weight(self) -> int:
        return self.value


@dataclass(frozen=True, slots=True)
class TaxonomyEntry:
    id: int
    name: str
    tier: Tier

    @property
    def weight(self) -> int:
        return self.tier.weight


_ENTRIES = (
    (1, "Incorrect Elements Identification", Tier.HIGH),
    (2, "Missing Elements Identification", Tier.HIGH),
    (3, "Including Information from Outside the Query", Tier.HIGH),
    (4, "Missing Conditions in the Contract", Tier.HIGH),
    (5, "Missing Calculations", Tier.HIGH),
    (6, "Missing All Attributes", Tier.HIGH),
    (7, "Misunderstanding of Structure Roles", Tier.HIGH),
    (8, "Incorrect Data Type Identification", Tier.MEDIUM),
    (9, "Inconsistency with the Grammar", Tier.MEDIUM),
    (10, "Misidentified Environment Variables", Tier.MEDIUM),
    (11, "Providing Wrong Logic", Tier.MEDIUM),
    (12, "Incorrect Calculations", Tier.MEDIUM),
    (13, "Including Unnecessary Information", Tier.MEDIUM),
    (14, "Missing Attributes", Tier.MEDIUM),
    (15, "Incorrect Syntax", Tier.LOW),
    (16, "Missing Parameters", Tier.LOW),
)

TAXONOMY: tuple[TaxonomyEntry, ...] = tuple(TaxonomyEntry(i, n, t) for i, n, t in _ENTRIES)
_BY_ID = {e.id: e for e in TAXONOMY}
_BY_NAME = {e.name.lower(): e for e in TAXONOMY}

INCORRECT_ELEMENTS = _BY_ID[1]
MISSING_ELEMENTS = _BY_ID[2]
OUTSIDE_QUERY = _BY_ID[3]
MISSING_CONDITIONS = _BY_ID[4]
MISSING_CALCULATIONS = _BY_ID[5]
MISSING_ALL_ATTRIBUTES = _BY_ID[6]
STRUCTURE_ROLES = _BY_ID[7]
DATA_TYPE = _BY_ID[8]
GRAMMAR = _BY_ID[9]
ENV_VARIABLES = _BY_ID[10]
WRONG_LOGIC = _BY_ID[11]
INCORRECT_CALCULATIONS = _BY_ID[12]
UNNECESSARY_INFO = _BY_ID[13]
MISSING_ATTRIBUTES = _BY_ID[14]
SYNTAX = _BY_ID[15]
MISSING_PARAMETERS = _BY_ID[16]


class UnknownTaxonomy(KeyError):
    pass


def lookup(key: int | str) -> TaxonomyEntry:
    """Resolve a taxonomy entry by numeric id or by (case-insensitive) name."""
    if isinstance(key, int):
        entry = _BY_ID.get(key)
    else:
        text = key.strip()
        entry = _BY_ID.get(int(text)) if text.isdigit() else _BY_NAME.get(text.lower())
    if entry is None:
        raise UnknownTaxonomy(key)
    return entry


class Section(enum.Enum):
    """The eight structural buckets weighted errors are totalled over."""

    CONTRACT = ("Cont", "Contract structure")
    DOMAIN = ("Dom", "Domain")
    DECLARATIONS = ("Dec", "Declarations")
    PRECONDITION = ("Pre", "Precondition")
    POSTCONDITION = ("Pos", "Postcondition")
    SIGNATURE = ("Sig", "Signature")
    OBLIGATIONS_POWERS = ("OP", "Obligations&Powers")
    CONSTRAINTS = ("Cos", "Constraints")

    @property
    def code(self) -> str:
        return self.value[0]

    @property
    def label(self) -> str:
        return self.value[1]

    @classmethod
    def parse(cls, text: str) -> Section:
        key = text.strip().lower()
        for s in cls:
            if key in (s.code.lower(), s.label.lower(), s.name.lower()):
                return s
        raise ValueError(f"unknown section bucket {text!r}")


SECTIONS: tuple[Section, ...] = tuple(Section)


class Origin(enum.Enum):
    AUTO = "auto"
    MANUAL = "manual"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    taxonomy: TaxonomyEntry
    section: Section
    message: str
    span: SourceSpan | None = None
    origin: Origin = Origin.AUTO
    file: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if _BY_ID.get(getattr(self.taxonomy, "id", None)) is not self.taxonomy:
            raise UnknownTaxonomy(self.taxonomy)

    @property
    def weight(self) -> int:
        return self.taxonomy.weight

    def sort_key(self) -> tuple:
        span = self.span
        pos = (span.start_line, span.start_col, span.end_line, span.end_col) if span else (1 << 30,) * 4
        return (pos, self.taxonomy.id, self.section.code, self.message)

    def record(self) -> str:
        """Line-oriented structured record: file|span|section|id|name|weight|origin|message."""
        span = str(self.span) if self.span else "-"
        return "|".join(
            [
                self.file or "-",
                span,
                self.section.code,
                str(self.taxonomy.id),
                self.taxonomy.name,
                str(self.weight),
                self.origin.value,
                self.message.replace("|", "/").replace("\n", " "),
            ]
        )

    @classmethod
    def from_record(cls, line: str) -> Diagnostic:
        file, span, section, tid, _name, _weight, origin, message = line.rstrip("\n").split("|", 7)
        return cls(
            taxonomy=lookup(int(tid)),
            section=Section.parse(section),
            message=message,
            span=None if span == "-" else SourceSpan.parse(span),
            origin=Origin(origin),
            file=None if file == "-" else file,
        )

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}[{self.section.code}] {self.taxonomy.name} (w{self.weight}): {self.message}"


def normalize(diagnostics) -> list[Diagnostic]:
    """Collapse diagnostics reported against the same span and order the rest.

    A span is one finding, so when several types land on it the heaviest wins
    (ties go to the lower id). Span-less diagnostics collapse on
    (taxonomy, section, message).
    """
    best: dict[tuple, Diagnostic] = {}
    for d in diagnostics:
        key = ("span", d.span) if d.span is not None else ("msg", d.taxonomy.id, d.section, d.message)
        cur = best.get(key)
        if cur is None or (d.weight, -d.taxonomy.id) > (cur.weight, -cur.taxonomy.id):
            best[key] = d
    return sorted(best.values(), key=Diagnostic.sort_key)
