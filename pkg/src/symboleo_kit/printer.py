"""Canonical pretty-printer; ``parse(format_spec(s))`` reproduces ``s``."""

from __future__ import annotations

from symboleo_kit import ast
from symboleo_kit.lexer import escape

_INDENT = "  "
_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "%": 2}


def format_value(e: ast.ValueExpr) -> str:
    if isinstance(e, ast.Path):
        return str(e)
    if isinstance(e, ast.NumberLit):
        return e.text
    if isinstance(e, ast.StringLit):
        return escape(e.value)
    if isinstance(e, ast.DateLit):
        return e.text
    if isinstance(e, ast.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, ast.BinOp):
        prec = _PRECEDENCE[e.op]
        left = format_value(e.left)
        if isinstance(e.left, ast.BinOp) and _PRECEDENCE[e.left.op] < prec:
            left = f"({left})"
        right = format_value(e.right)
        # Operators are left-associative: an equal-precedence right operand needs parens.
        if isinstance(e.right, ast.BinOp) and _PRECEDENCE[e.right.op] <= prec:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not a value expression: {e!r}")


def format_expr(e: ast.Expr) -> str:
    if isinstance(e, ast.LiteralTrue):
        return "true"
    if isinstance(e, ast.PredicateCall):
        return f"{e.name}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, ast.Not):
        return f"not({format_expr(e.child)})"
    if isinstance(e, ast.And):
        return " and ".join(_wrap(c, (ast.And, ast.Or)) for c in e.children)
    if isinstance(e, ast.Or):
        return " or ".join(_wrap(c, (ast.Or,)) for c in e.children)
    if isinstance(e, ast.Comparison):
        return f"{format_value(e.left)} {e.op} {format_value(e.right)}"
    return format_value(e)


def _wrap(child: ast.Expr, nested: tuple[type, ...]) -> str:
    text = format_expr(child)
    return f"({text})" if isinstance(child, nested) else text


def _concept(c: ast.DomainConcept) -> str:
    isa = "isAn" if (c.parent or c.kind.value)[0] in "AEIOU" else "isA"
    if c.kind is ast.ConceptKind.ENUMERATION and c.parent is None:
        return f"{c.name} {isa} Enumeration({', '.join(c.enum_literals)});"
    head = f"{c.name} {isa} {c.parent or c.kind.value}"
    if not c.attributes:
        return head + ";"
    attrs = ", ".join(f"{'Env ' if a.is_env else ''}{a.name}: {a.type_name}" for a in c.attributes)
    return f"{head} with {attrs};"


def _param(p: ast.Parameter) -> str:
    text = f"{p.name}: {p.type_name}"
    if p.initializer is not None:
        text += f" := {format_value(p.initializer)}"
    return text


def _declaration(d: ast.Declaration) -> str:
    text = f"{d.name}: {d.type_name}"
    if d.initializers:
        text += " with " + ", ".join(f"{i.attribute} := {format_value(i.value)}" for i in d.initializers)
    return text + ";"


def _norm(n: ast.Norm) -> str:
    trigger = f"{format_expr(n.trigger)} -> " if n.trigger is not None else ""
    args = ", ".join(
        [str(n.first_party), str(n.second_party), format_expr(n.antecedent), format_expr(n.consequent)]
    )
    return f"{n.name}: {trigger}{n.kind.value}({args});"


def format_spec(spec: ast.ContractSpec) -> str:
    """Render ``spec`` as canonical Symboleo source.

    Empty sections are omitted; fragments without a contract name print their
    sections without a signature line.
    """
    lines: list[str] = []
    if spec.domain is not None:
        lines.append(f"Domain {spec.domain.name}")
        lines.extend(_INDENT + _concept(c) for c in spec.domain.concepts)
        lines.append("endDomain")
    if spec.name is not None:
        lines.append(f"Contract {spec.name} ({', '.join(_param(p) for p in spec.signature)})")

    def section(title: str, body: list[str]) -> None:
        if body:
            lines.append(_INDENT + title)
            lines.extend(_INDENT * 2 + b for b in body)

    section("Declarations", [_declaration(d) for d in spec.declarations])
    section("Preconditions", [format_expr(e) + ";" for e in spec.preconditions])
    section("Postconditions", [format_expr(e) + ";" for e in spec.postconditions])
    section("Obligations", [_norm(n) for n in spec.obligations])
    section("SurvivingObligations", [_norm(n) for n in spec.surviving_obligations])
    section("Powers", [_norm(n) for n in spec.powers])
    section("Constraints", [format_expr(e) + ";" for e in spec.constraints])
    return "\n".join(lines) + "\n"
