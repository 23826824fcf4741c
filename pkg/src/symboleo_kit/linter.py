"""Semantic checks over a parsed specification.

Only the error types that can be decided from the specification alone are
detected here; the ones that need the natural-language contract for
comparison come in through manual annotations (see ``scoring``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from symboleo_kit import ast
from symboleo_kit.ast import BASE_TYPES, ConceptKind, NormKind
from symboleo_kit.taxonomy import (
    DATA_TYPE,
    ENV_VARIABLES,
    GRAMMAR,
    STRUCTURE_ROLES,
    SYNTAX,
    Diagnostic,
    Section,
    TaxonomyEntry,
    normalize,
)

PREDICATE_ARITY = {
    "Happens": 1,
    "HappensAfter": 2,
    "WhappensBefore": 2,
    "ShappensBefore": 2,
    "HappensWithin": 2,
    "Violated": 1,
    "Fulfilled": 1,
    "Triggered": 1,
    "Suspended": 1,
    "Resumed": 1,
    "Terminated": 1,
    "IsEqual": 2,
}
POWER_FUNCTIONS = frozenset({"Triggered", "Suspended", "Resumed", "Terminated"})
NORM_HEADS = {"obligations": NormKind.OBLIGATION, "powers": NormKind.POWER}
_NORM_TYPE_NAMES = frozenset({"Obligation", "Power", "O", "P"})


def _diag(taxonomy: TaxonomyEntry, section: Section, message: str, node=None) -> Diagnostic:
    return Diagnostic(taxonomy, section, message, getattr(node, "span", None))


@dataclass
class SymbolTable:
    concepts: dict[str, ast.DomainConcept] = field(default_factory=dict)
    declarations: dict[str, ast.Declaration] = field(default_factory=dict)
    parameters: dict[str, ast.Parameter] = field(default_factory=dict)
    norms: dict[str, ast.Norm] = field(default_factory=dict)
    enum_literals: dict[str, str] = field(default_factory=dict)
    contract_name: str | None = None
    base_types: frozenset[str] = BASE_TYPES

    def resolves_type(self, name: str) -> bool:
        return name in self.base_types or name in self.concepts

    def ancestry(self, name: str) -> list[str]:
        """``name`` followed by its known parents, nearest first."""
        chain = []
        while name in self.concepts and name not in chain:
            chain.append(name)
            name = self.concepts[name].parent or ""
        return chain

    def attributes_of(self, concept: str) -> dict[str, ast.Attribute]:
        attrs: dict[str, ast.Attribute] = {}
        for name in reversed(self.ancestry(concept)):
            attrs.update({a.name: a for a in self.concepts[name].attributes})
        return attrs

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sub == sup or sup in self.ancestry(sub)

    def compatible(self, a: str | None, b: str | None) -> bool:
        if a is None or b is None:
            return True
        if a in self.concepts and b in self.concepts:
            # Distinct roles (or events, assets) may be compared with each other.
            return self.concepts[a].kind is self.concepts[b].kind
        return a == b

    def type_of_variable(self, name: str) -> str | None:
        # Declarations shadow parameters.
        if name in self.declarations:
            return self.declarations[name].type_name
        if name in self.parameters:
            return self.parameters[name].type_name
        return None

    def infer(self, e: ast.Expr) -> str | None:
        if isinstance(e, ast.NumberLit):
            return "Number"
        if isinstance(e, ast.StringLit):
            return "String"
        if isinstance(e, ast.DateLit):
            return "Date"
        if isinstance(e, ast.BoolLit):
            return "Boolean"
        if isinstance(e, ast.BinOp):
            left, right = self.infer(e.left), self.infer(e.right)
            if left == right == "Number":
                return "Number"
            if e.op in "+-" and {left, right} == {"Date", "Number"}:
                return "Date"
            if e.op == "-" and left == right == "Date":
                return "Number"
            return None
        if isinstance(e, ast.Path):
            segs = e.segments
            t = self.type_of_variable(segs[0])
            if t is None:
                if len(segs) == 1 and segs[0] in self.enum_literals:
                    return self.enum_literals[segs[0]]
                c = self.concepts.get(segs[0])
                if c is not None and c.kind is ConceptKind.ENUMERATION and len(segs) == 2:
                    return c.name if segs[1] in c.enum_literals else None
                return None
            if not self.resolves_type(t):
                return None
            for attr in segs[1:]:
                a = self.attributes_of(t).get(attr)
                if a is None:
                    return None
                t = a.type_name
            return t
        return None


def build_symbols(spec: ast.ContractSpec) -> tuple[SymbolTable, list[Diagnostic]]:
    table = SymbolTable(contract_name=spec.name)
    diags: list[Diagnostic] = []

    def add(ns: dict, name: str, node, section: Section, what: str) -> None:
        if name in ns:
            diags.append(_diag(GRAMMAR, section, f"duplicate {what} {name!r}", node))
        else:
            ns[name] = node

    if spec.domain is not None:
        for c in spec.domain.concepts:
            add(table.concepts, c.name, c, Section.DOMAIN, "concept")
            seen: dict[str, ast.Attribute] = {}
            for a in c.attributes:
                add(seen, a.name, a, Section.DOMAIN, f"attribute of {c.name}")
            literals: dict[str, str] = {}
            for lit in c.enum_literals:
                add(literals, lit, c, Section.DOMAIN, f"literal of {c.name}")
                table.enum_literals.setdefault(lit, c.name)
    for p in spec.signature:
        add(table.parameters, p.name, p, Section.SIGNATURE, "parameter")
    for d in spec.declarations:
        add(table.declarations, d.name, d, Section.DECLARATIONS, "declaration")
        assigned: dict[str, ast.Initializer] = {}
        for init in d.initializers:
            add(assigned, init.attribute, init, Section.DECLARATIONS, f"assignment in {d.name}")
    for n in spec.norms:
        add(table.norms, n.name, n, Section.OBLIGATIONS_POWERS, "norm")
    return table, diags


def expression_sites(spec: ast.ContractSpec) -> Iterator[tuple[Section, ast.Expr]]:
    """Every top-level expression in the spec, tagged with its section."""
    for p in spec.signature:
        if p.initializer is not None:
            yield Section.SIGNATURE, p.initializer
    for d in spec.declarations:
        for init in d.initializers:
            yield Section.DECLARATIONS, init.value
    for e in spec.preconditions:
        yield Section.PRECONDITION, e
    for e in spec.postconditions:
        yield Section.POSTCONDITION, e
    for n in spec.norms:
        yield Section.OBLIGATIONS_POWERS, n.first_party
        yield Section.OBLIGATIONS_POWERS, n.second_party
        for e in n.expressions():
            yield Section.OBLIGATIONS_POWERS, e
    for e in spec.constraints:
        yield Section.CONSTRAINTS, e


def _is_power_function(e: ast.SituationExpr, spec: ast.ContractSpec) -> bool:
    if isinstance(e, ast.And):
        return all(_is_power_function(c, spec) for c in e.children)
    if not (isinstance(e, ast.PredicateCall) and e.name in POWER_FUNCTIONS and len(e.args) == 1):
        return False
    target = e.args[0]
    if not isinstance(target, ast.Path):
        return False
    segs = target.segments
    if segs[0] in NORM_HEADS:
        return len(segs) == 2
    return segs in (("self",), (spec.name,))


def check_power_consequents(spec: ast.ContractSpec, symbols: SymbolTable | None = None) -> list[Diagnostic]:
    """A power's consequent must trigger, suspend, resume or terminate a norm or the contract."""
    return [
        _diag(GRAMMAR, Section.OBLIGATIONS_POWERS,
              f"consequent of power {n.name} is not a power function "
              "(Triggered/Suspended/Resumed/Terminated of a norm or the contract)", n.consequent)
        for n in spec.powers
        if not _is_power_function(n.consequent, spec)
    ]


def check_env_vars(spec: ast.ContractSpec, symbols: SymbolTable) -> list[Diagnostic]:
    diags = []
    for c in symbols.concepts.values():
        if c.kind is not ConceptKind.EVENT:
            for a in c.attributes:
                if a.is_env:
                    diags.append(_diag(ENV_VARIABLES, Section.DOMAIN,
                                       f"Env attribute {c.name}.{a.name} outside an Event concept", a))

    # Attributes of events read by norms but never marked Env.
    reads: set[str] = set()
    for n in spec.norms:
        for e in n.expressions():
            for node in ast.walk(e):
                if isinstance(node, ast.Path) and len(node.segments) > 1:
                    reads.add(node.head)
    flagged: list[str] = []
    for d in symbols.declarations.values():
        c = symbols.concepts.get(d.type_name)
        if c is None or c.kind is not ConceptKind.EVENT or d.name not in reads:
            continue
        if not any(a.is_env for a in symbols.attributes_of(c.name).values()) and c.name not in flagged:
            flagged.append(c.name)
            diags.append(_diag(ENV_VARIABLES, Section.DOMAIN,
                               f"event {c.name} has attributes read by norms (via {d.name}) "
                               "but declares no Env attribute", c))
    return diags


def check_types(spec: ast.ContractSpec, symbols: SymbolTable) -> list[Diagnostic]:
    diags = []
    open_world = spec.fragment

    def unresolved(name: str, section: Section, node, what: str) -> None:
        if not open_world and not symbols.resolves_type(name):
            diags.append(_diag(GRAMMAR, section, f"unknown type {name!r} for {what}", node))

    if spec.domain is not None:
        for c in spec.domain.concepts:
            if c.parent is not None:
                unresolved(c.parent, Section.DOMAIN, c, f"parent of {c.name}")
            for a in c.attributes:
                unresolved(a.type_name, Section.DOMAIN, a, f"attribute {c.name}.{a.name}")
    for p in spec.signature:
        unresolved(p.type_name, Section.SIGNATURE, p, f"parameter {p.name}")
    for d in spec.declarations:
        if d.type_name in BASE_TYPES:
            diags.append(_diag(DATA_TYPE, Section.DECLARATIONS,
                               f"declaration {d.name} has base type {d.type_name}; "
                               "declarations instantiate domain concepts", d))
            continue
        if d.type_name in _NORM_TYPE_NAMES:
            continue
        unresolved(d.type_name, Section.DECLARATIONS, d, f"declaration {d.name}")
        attrs = symbols.attributes_of(d.type_name)
        for init in d.initializers:
            a = attrs.get(init.attribute)
            if a is None:
                continue
            got = symbols.infer(init.value)
            if not symbols.compatible(got, a.type_name):
                diags.append(_diag(DATA_TYPE, Section.DECLARATIONS,
                                   f"{d.name}.{init.attribute} expects {a.type_name}, got {got}", init))

    for section, root in expression_sites(spec):
        for e in ast.walk(root):
            if isinstance(e, ast.BinOp):
                for operand in (e.left, e.right):
                    t = symbols.infer(operand)
                    if t is None or t == "Number":
                        continue
                    if t == "Date" and e.op in "+-":
                        continue
                    diags.append(_diag(DATA_TYPE, section,
                                       f"arithmetic '{e.op}' on {t} operand {_brief(operand)}", operand))
            elif isinstance(e, ast.Comparison):
                lt, rt = symbols.infer(e.left), symbols.infer(e.right)
                if not symbols.compatible(lt, rt):
                    diags.append(_diag(DATA_TYPE, section, f"comparison of {lt} with {rt}", e))
            elif isinstance(e, ast.PredicateCall) and e.name == "IsEqual" and len(e.args) == 2:
                a, b = e.args
                if isinstance(a, ast.VALUE_TYPES) and isinstance(b, ast.VALUE_TYPES):
                    lt, rt = symbols.infer(a), symbols.infer(b)
                    if not symbols.compatible(lt, rt):
                        diags.append(_diag(DATA_TYPE, section, f"IsEqual of {lt} with {rt}", e))
    return diags


def check_structure(spec: ast.ContractSpec, symbols: SymbolTable) -> list[Diagnostic]:
    diags = []
    for p in spec.signature:
        if p.initializer is not None:
            diags.append(_diag(STRUCTURE_ROLES, Section.SIGNATURE,
                               f"parameter {p.name} carries a value; signatures only declare typed parameters", p))
    for d in spec.declarations:
        if d.type_name in _NORM_TYPE_NAMES:
            diags.append(_diag(STRUCTURE_ROLES, Section.DECLARATIONS,
                               f"declaration {d.name} is a norm; norms belong in Obligations or Powers", d))
            continue
        c = symbols.concepts.get(d.type_name)
        if c is None or c.kind is ConceptKind.ENUMERATION:
            continue
        attrs = symbols.attributes_of(c.name)
        for init in d.initializers:
            if init.attribute not in attrs:
                diags.append(_diag(STRUCTURE_ROLES, Section.DECLARATIONS,
                                   f"{init.attribute} is not an attribute of {c.name}", init))
    if not spec.fragment and not spec.obligations and not spec.powers:
        diags.append(_diag(GRAMMAR, Section.CONTRACT, "contract defines no obligations and no powers", spec))
    return diags


def check_references(spec: ast.ContractSpec, symbols: SymbolTable) -> list[Diagnostic]:
    diags = []
    open_world = spec.fragment
    kinds = {name: n.kind for name, n in symbols.norms.items()}

    def resolves(path: ast.Path) -> bool:
        head = path.head
        if head in NORM_HEADS:
            return len(path.segments) == 2 and kinds.get(path.segments[1]) is NORM_HEADS[head]
        return (
            head in symbols.declarations
            or head in symbols.parameters
            or head in symbols.enum_literals
            or head in symbols.concepts
            or head == "self"
            or head == symbols.contract_name
        )

    for section, root in expression_sites(spec):
        for e in ast.walk(root):
            if isinstance(e, ast.Path) and not open_world and not resolves(e):
                diags.append(_diag(GRAMMAR, section, f"unresolved reference {e}", e))
            elif isinstance(e, ast.PredicateCall):
                arity = PREDICATE_ARITY.get(e.name)
                if arity is not None and arity != len(e.args):
                    diags.append(_diag(SYNTAX, section,
                                       f"{e.name} takes {arity} argument(s), got {len(e.args)}", e))
    return diags


CHECKS = (check_references, check_types, check_structure, check_env_vars, check_power_consequents)


def lint(spec: ast.ContractSpec) -> list[Diagnostic]:
    """Run every check and return the deduplicated, ordered findings."""
    symbols, diags = build_symbols(spec)
    for check in CHECKS:
        diags.extend(check(spec, symbols))
    return normalize(diags)


def _brief(e: ast.Expr) -> str:
    return str(e) if isinstance(e, ast.Path) else type(e).__name__
