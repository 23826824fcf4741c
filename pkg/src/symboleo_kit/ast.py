"""Immutable data model of a Symboleo specification.

Every node carries an optional ``span`` that is excluded from equality, so two
trees compare equal when they are structurally identical regardless of where
they came from.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, Union


@dataclass(frozen=True, slots=True, order=True)
class SourceSpan:
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"span start after end: {self}")

    def __str__(self) -> str:
        return f"{self.start_line}:{self.start_col}-{self.end_line}:{self.end_col}"

    @classmethod
    def parse(cls, text: str) -> SourceSpan:
        m = re.fullmatch(r"(\d+):(\d+)-(\d+):(\d+)", text.strip())
        if not m:
            raise ValueError(f"bad span {text!r}")
        return cls(*map(int, m.groups()))

    def cover(self, other: SourceSpan | None) -> SourceSpan:
        if other is None:
            return self
        start = min((self.start_line, self.start_col), (other.start_line, other.start_col))
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return SourceSpan(*start, *end)


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


BASE_TYPES = frozenset({"Number", "String", "Date", "Boolean"})


# -- value expressions -------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Path:
    """Dotted identifier path; ``obligations.x`` and ``powers.x`` name norms."""

    segments: tuple[str, ...]
    span: SourceSpan | None = _span()

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("empty path")

    @property
    def head(self) -> str:
        return self.segments[0]

    def __str__(self) -> str:
        return ".".join(self.segments)


@dataclass(frozen=True, slots=True)
class NumberLit:
    text: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class StringLit:
    value: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class DateLit:
    """ISO-8601 date or date-time, kept as validated text."""

    text: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class BoolLit:
    value: bool
    span: SourceSpan | None = _span()


ARITH_OPS = ("+", "-", "*", "/", "%")


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str
    left: ValueExpr
    right: ValueExpr
    span: SourceSpan | None = _span()


ValueExpr = Union[Path, NumberLit, StringLit, DateLit, BoolLit, BinOp]
VALUE_TYPES = (Path, NumberLit, StringLit, DateLit, BoolLit, BinOp)


# -- situations ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PredicateCall:
    name: str
    args: tuple[Expr, ...]
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class And:
    children: tuple[SituationExpr, ...]
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class Or:
    children: tuple[SituationExpr, ...]
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class Not:
    child: SituationExpr
    span: SourceSpan | None = _span()


COMPARISON_OPS = ("==", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True, slots=True)
class Comparison:
    op: str
    left: ValueExpr
    right: ValueExpr
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class LiteralTrue:
    span: SourceSpan | None = _span()


SituationExpr = Union[PredicateCall, And, Or, Not, Comparison, LiteralTrue]
SITUATION_TYPES = (PredicateCall, And, Or, Not, Comparison, LiteralTrue)
Expr = Union[ValueExpr, SituationExpr]


def walk(expr: Expr) -> Iterator[Expr]:
    """Pre-order traversal of an expression tree."""
    yield expr
    if isinstance(expr, BinOp):
        yield from walk(expr.left)
        yield from walk(expr.right)
    elif isinstance(expr, Comparison):
        yield from walk(expr.left)
        yield from walk(expr.right)
    elif isinstance(expr, PredicateCall):
        for a in expr.args:
            yield from walk(a)
    elif isinstance(expr, (And, Or)):
        for c in expr.children:
            yield from walk(c)
    elif isinstance(expr, Not):
        yield from walk(expr.child)


# -- declarations ---------------------------------------------------------------


class ConceptKind(enum.Enum):
    ROLE = "Role"
    ASSET = "Asset"
    EVENT = "Event"
    ENUMERATION = "Enumeration"


@dataclass(frozen=True, slots=True)
class Attribute:
    name: str
    type_name: str
    is_env: bool = False
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class DomainConcept:
    name: str
    kind: ConceptKind
    attributes: tuple[Attribute, ...] = ()
    enum_literals: tuple[str, ...] = ()
    parent: str | None = None
    span: SourceSpan | None = _span()

    def __post_init__(self) -> None:
        if self.kind is ConceptKind.ENUMERATION:
            if self.attributes or not self.enum_literals:
                raise ValueError(f"enumeration {self.name} needs literals and no attributes")
        elif self.enum_literals:
            raise ValueError(f"{self.name} is not an enumeration but has literals")


@dataclass(frozen=True, slots=True)
class DomainModel:
    name: str
    concepts: tuple[DomainConcept, ...] = ()
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class Parameter:
    name: str
    type_name: str
    # Signatures take no initializers; kept so the linter can flag them.
    initializer: ValueExpr | None = None
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class Initializer:
    attribute: str
    value: ValueExpr
    span: SourceSpan | None = _span()


@dataclass(frozen=True, slots=True)
class Declaration:
    name: str
    type_name: str
    initializers: tuple[Initializer, ...] = ()
    span: SourceSpan | None = _span()


class NormKind(enum.Enum):
    OBLIGATION = "Obligation"
    POWER = "Power"


@dataclass(frozen=True, slots=True)
class Norm:
    """Obligation or power. Parties are positional: (debtor, creditor) for
    obligations, (creditor, debtor) for powers."""

    name: str
    kind: NormKind
    first_party: Path
    second_party: Path
    antecedent: SituationExpr
    consequent: SituationExpr
    trigger: SituationExpr | None = None
    span: SourceSpan | None = _span()

    @property
    def debtor(self) -> Path:
        return self.first_party if self.kind is NormKind.OBLIGATION else self.second_party

    @property
    def creditor(self) -> Path:
        return self.second_party if self.kind is NormKind.OBLIGATION else self.first_party

    def expressions(self) -> Iterator[SituationExpr]:
        if self.trigger is not None:
            yield self.trigger
        yield self.antecedent
        yield self.consequent


@dataclass(frozen=True, slots=True)
class ContractSpec:
    """Root of a specification.

    ``fragment`` marks a partial source (e.g. a lone ``Powers`` block); such
    specs may lack a domain and a contract name.
    """

    domain: DomainModel | None
    name: str | None
    signature: tuple[Parameter, ...] = ()
    declarations: tuple[Declaration, ...] = ()
    preconditions: tuple[SituationExpr, ...] = ()
    postconditions: tuple[SituationExpr, ...] = ()
    obligations: tuple[Norm, ...] = ()
    surviving_obligations: tuple[Norm, ...] = ()
    powers: tuple[Norm, ...] = ()
    constraints: tuple[SituationExpr, ...] = ()
    fragment: bool = False
    span: SourceSpan | None = _span()

    def __post_init__(self) -> None:
        if not self.fragment and not self.name:
            raise ValueError("a complete specification needs a contract name")
        for n in self.obligations + self.surviving_obligations:
            if n.kind is not NormKind.OBLIGATION:
                raise ValueError(f"{n.name} listed as obligation but is a power")
        for n in self.powers:
            if n.kind is not NormKind.POWER:
                raise ValueError(f"{n.name} listed as power but is an obligation")

    @property
    def norms(self) -> tuple[Norm, ...]:
        return self.obligations + self.surviving_obligations + self.powers
