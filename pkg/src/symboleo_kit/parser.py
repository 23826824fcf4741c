"""Recursive-descent parser for Symboleo specifications.

The accepted language is the subset documented in ``assets/grammar.txt``.
Syntax errors never abort the parse: the offending statement is reported and
skipped up to the next ``;`` or section keyword.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

from symboleo_kit import ast
from symboleo_kit.ast import ConceptKind, NormKind, SourceSpan
from symboleo_kit.lexer import SECTION_KEYWORDS, Token, tokenize, unescape
from symboleo_kit.taxonomy import (
    GRAMMAR,
    STRUCTURE_ROLES,
    SYNTAX,
    Diagnostic,
    Section,
    TaxonomyEntry,
)

MAX_DEPTH = 64

_SECTION_BUCKET = {
    "Domain": Section.DOMAIN,
    "Contract": Section.SIGNATURE,
    "Declarations": Section.DECLARATIONS,
    "Preconditions": Section.PRECONDITION,
    "Postconditions": Section.POSTCONDITION,
    "Obligations": Section.OBLIGATIONS_POWERS,
    "SurvivingObligations": Section.OBLIGATIONS_POWERS,
    "Powers": Section.OBLIGATIONS_POWERS,
    "Constraints": Section.CONSTRAINTS,
}
_ORDER = {k: i for i, k in enumerate(SECTION_KEYWORDS)}
_FOLDED_SECTIONS = {k.lower(): k for k in SECTION_KEYWORDS}
_BASE_KINDS = {k.value: k for k in ConceptKind}
_NORM_KEYWORDS = {
    "Obligation": NormKind.OBLIGATION,
    "O": NormKind.OBLIGATION,
    "Power": NormKind.POWER,
    "P": NormKind.POWER,
}
_CMP_OPS = set(ast.COMPARISON_OPS)


@dataclass
class ParseResult:
    spec: ast.ContractSpec | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.spec is not None and not self.diagnostics


class _Bail(Exception):
    """Abandon the current statement; the diagnostic is already recorded."""


class _Parser:
    def __init__(self, source: str, fragment: bool) -> None:
        self.fragment = fragment
        self.tokens: list[Token] = []
        self.illegal: list[Token] = []
        for t in tokenize(source):
            if t.kind == "comment":
                continue
            (self.illegal if t.kind == "illegal" else self.tokens).append(t)
        self.i = 0
        self.depth = 0
        self.diags: list[Diagnostic] = []
        self.section = Section.CONTRACT
        self.regions: list[tuple[int, Section]] = [(0, Section.CONTRACT)]

        self.domain: ast.DomainModel | None = None
        self.name: str | None = None
        self.name_span: SourceSpan | None = None
        self.signature: list[ast.Parameter] = []
        self.declarations: list[ast.Declaration] = []
        self.preconditions: list = []
        self.postconditions: list = []
        self.obligations: list[ast.Norm] = []
        self.surviving: list[ast.Norm] = []
        self.powers: list[ast.Norm] = []
        self.constraints: list = []

    # -- token helpers --------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    @property
    def prev(self) -> Token:
        return self.tokens[max(self.i - 1, 0)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, kind: str, lexeme: str | None = None) -> bool:
        return self.tok.is_(kind, lexeme)

    def at_punct(self, p: str) -> bool:
        return self.tok.is_("punctuation", p)

    def accept(self, kind: str, lexeme: str) -> bool:
        if self.tok.is_(kind, lexeme):
            self.advance()
            return True
        return False

    def expect(self, kind: str, lexeme: str | None = None, what: str | None = None) -> Token:
        if self.tok.is_(kind, lexeme):
            return self.advance()
        self.fail(f"expected {what or lexeme or kind}, found {self._describe(self.tok)}")

    def terminator(self) -> None:
        """Consume a statement-ending ';'.

        A missing ';' before a line break is reported but treated as present, so
        the next statement is not swallowed by recovery.
        """
        if self.accept("punctuation", ";"):
            return
        if self.i > 0 and self.tok.span.start_line > self.prev.span.end_line:
            end = self.prev.span
            self.report(SourceSpan(end.end_line, end.end_col, end.end_line, end.end_col),
                        f"missing ';' after {self.prev.lexeme!r}")
            return
        self.fail(f"expected ;, found {self._describe(self.tok)}")

    def expect_name(self, what: str) -> Token:
        if self.at("identifier"):
            return self.advance()
        self.fail(f"expected {what}, found {self._describe(self.tok)}")

    @staticmethod
    def _describe(t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.lexeme)

    def span_from(self, start: Token) -> SourceSpan:
        end = self.prev if self.i > 0 else start
        if (end.span.end_line, end.span.end_col) < (start.span.start_line, start.span.start_col):
            end = start
        return SourceSpan(start.span.start_line, start.span.start_col, end.span.end_line, end.span.end_col)

    # -- diagnostics ------------------------------------------------------------

    def report(self, span: SourceSpan | None, message: str, taxonomy: TaxonomyEntry = SYNTAX,
               section: Section | None = None) -> None:
        self.diags.append(Diagnostic(taxonomy, section or self.section, message, span))

    def fail(self, message: str, taxonomy: TaxonomyEntry = SYNTAX, token: Token | None = None):
        self.report((token or self.tok).span, message, taxonomy)
        raise _Bail

    def enter(self, section: Section) -> None:
        self.section = section
        self.regions.append((self.tok.offset, section))

    def at_boundary(self) -> bool:
        t = self.tok
        if t.kind == "eof":
            return True
        if t.kind == "keyword" and (t.lexeme in _ORDER or t.lexeme in ("endDomain", "endContract")):
            return True
        return self._misspelled_section(t) is not None

    def _misspelled_section(self, t: Token) -> str | None:
        # Only ever asked about the current token.
        if t.kind != "identifier":
            return None
        target = _FOLDED_SECTIONS.get(t.lexeme.lower())
        if target is None:
            return None
        nxt = self.peek()
        if nxt.kind == "punctuation" and nxt.lexeme in ":.(":
            return None
        return target

    def _end_marker(self) -> bool:
        t = self.tok
        if t.kind != "identifier" or not t.lexeme.lower().startswith("end"):
            return False
        # endprecondition, endObligations, endcontract... but not a name like endDate.
        rest = t.lexeme[3:].lower()
        section_word = rest in _FOLDED_SECTIONS or rest + "s" in _FOLDED_SECTIONS or rest == "contract"
        return section_word and not self.peek().is_("punctuation", ":")

    def _skip_end_marker(self) -> None:
        t = self.advance()
        self.report(t.span, f"unnecessary end marker {t.lexeme!r}")
        self.accept("punctuation", ";")

    def recover(self, start: int) -> None:
        if self.i == start:
            self.advance()
        while not self.at_boundary():
            if self.advance().is_("punctuation", ";"):
                return

    # -- top level -------------------------------------------------------------

    def parse(self) -> ParseResult:
        last_order = -1
        seen_contract = False
        while not self.at("eof"):
            t = self.tok
            keyword = t.lexeme if t.kind == "keyword" and t.lexeme in _ORDER else None
            if keyword is None and (fixed := self._misspelled_section(t)):
                self.report(t.span, f"keyword {t.lexeme!r} must be written {fixed!r}",
                            section=_SECTION_BUCKET[fixed])
                keyword = fixed
            if keyword is not None:
                order = _ORDER[keyword]
                if order < last_order:
                    self.report(t.span, f"section {keyword} out of order", GRAMMAR, Section.CONTRACT)
                elif keyword not in ("Domain", "Contract") and not seen_contract and not self.fragment:
                    self.report(t.span, f"section {keyword} appears before the contract signature",
                                GRAMMAR, Section.CONTRACT)
                last_order = max(last_order, order)
                if keyword == "Domain":
                    self.parse_domain()
                elif keyword == "Contract":
                    seen_contract = True
                    self.parse_signature()
                else:
                    self.parse_section(keyword)
                continue
            if t.is_("keyword", "endContract"):
                self.advance()
                self.accept("punctuation", ";")
                continue
            self.enter(Section.CONTRACT)
            if self._end_marker():
                self._skip_end_marker()
                continue
            start = self.i
            self.report(t.span, f"unexpected {self._describe(t)} outside any section")
            self.recover(start)
        return self.finish()

    def finish(self) -> ParseResult:
        for t in self.illegal:
            section = Section.CONTRACT
            for offset, s in self.regions:
                if offset <= t.offset:
                    section = s
            self.report(t.span, f"illegal character(s) {t.lexeme!r}", section=section)
        eof_span = self.tokens[-1].span
        if not self.fragment:
            if self.domain is None:
                self.report(eof_span, "missing Domain section", GRAMMAR, Section.CONTRACT)
            if self.name is None:
                self.report(eof_span, "missing Contract signature", GRAMMAR, Section.CONTRACT)
                return ParseResult(None, self.diags)
        spec = ast.ContractSpec(
            domain=self.domain,
            name=self.name,
            signature=tuple(self.signature),
            declarations=tuple(self.declarations),
            preconditions=tuple(self.preconditions),
            postconditions=tuple(self.postconditions),
            obligations=tuple(self.obligations),
            surviving_obligations=tuple(self.surviving),
            powers=tuple(self.powers),
            constraints=tuple(self.constraints),
            fragment=self.fragment,
            span=self.name_span,
        )
        return ParseResult(spec, self.diags)

    # -- domain ------------------------------------------------------------------

    def parse_domain(self) -> None:
        head = self.advance()
        self.enter(Section.DOMAIN)
        if self.domain is not None:
            self.report(head.span, "duplicate Domain section", GRAMMAR)
        try:
            name = self.expect_name("domain name").lexeme
        except _Bail:
            name = "_"
        raw: list[tuple] = []
        while True:
            t = self.tok
            if t.is_("keyword", "endDomain"):
                self.advance()
                if self.at_punct(";"):
                    self.report(self.advance().span, "endDomain takes no ';'")
                break
            if t.kind == "identifier" and t.lexeme.lower() == "enddomain":
                self.report(t.span, f"keyword {t.lexeme!r} must be written 'endDomain'")
                self.advance()
                break
            if self.at_boundary():
                self.report(t.span, "missing endDomain")
                break
            start = self.i
            try:
                raw.append(self.parse_concept())
            except _Bail:
                self.recover(start)
        concepts = self._resolve_concepts(raw)
        if self.domain is None:
            self.domain = ast.DomainModel(name, tuple(concepts), span=self.span_from(head))
        self.enter(Section.CONTRACT)

    def parse_concept(self) -> tuple:
        start = self.tok
        name = self.expect_name("concept name").lexeme
        self.accept("punctuation", ":")
        if not (self.at("keyword", "isA") or self.at("keyword", "isAn")):
            self.fail(f"expected isA or isAn, found {self._describe(self.tok)}")
        self.advance()
        base = self.expect_name("base concept").lexeme
        literals: list[str] = []
        attributes: list[ast.Attribute] = []
        if base == "Enumeration":
            self.expect("punctuation", "(")
            if not self.at_punct(")"):
                literals.append(self.expect_name("enumeration literal").lexeme)
                while self.accept("punctuation", ","):
                    literals.append(self.expect_name("enumeration literal").lexeme)
            self.expect("punctuation", ")")
            if not literals:
                self.fail("an enumeration needs at least one literal", GRAMMAR, token=self.prev)
        elif self.accept("keyword", "with") or self._bare_attribute() or self.at("keyword", "Env"):
            attributes.append(self.parse_attribute())
            while self.accept("punctuation", ","):
                attributes.append(self.parse_attribute())
        self.terminator()
        return name, base, tuple(attributes), tuple(literals), self.span_from(start)

    def _bare_attribute(self) -> bool:
        # `price: Number` rather than the next concept, `Paid: isAn Event`.
        return (
            self.at("identifier")
            and self.peek().is_("punctuation", ":")
            and not (self.peek(2).kind == "keyword" and self.peek(2).lexeme in ("isA", "isAn"))
        )

    def parse_attribute(self) -> ast.Attribute:
        start = self.tok
        env = self.accept("keyword", "Env")
        name = self.expect_name("attribute name").lexeme
        self.expect("punctuation", ":")
        type_name = self.expect_name("attribute type").lexeme
        return ast.Attribute(name, type_name, env, span=self.span_from(start))

    def _resolve_concepts(self, raw: list[tuple]) -> list[ast.DomainConcept]:
        bases = {r[0]: r[1] for r in raw}

        def kind_of(name: str) -> ConceptKind | None:
            seen = set()
            while name not in _BASE_KINDS:
                if name in seen or name not in bases:
                    return None
                seen.add(name)
                name = bases[name]
            return _BASE_KINDS[name]

        concepts = []
        for name, base, attributes, literals, span in raw:
            if base in _BASE_KINDS:
                kind, parent = _BASE_KINDS[base], None
            else:
                parent = base
                # Unknown parents are the linter's business; fall back to Asset.
                kind = kind_of(base) or ConceptKind.ASSET
                if kind is ConceptKind.ENUMERATION:
                    self.report(span, f"{name} cannot specialise enumeration {base}", GRAMMAR)
                    kind = ConceptKind.ASSET
            try:
                concepts.append(ast.DomainConcept(name, kind, attributes, literals, parent, span=span))
            except ValueError as exc:
                self.report(span, str(exc), GRAMMAR)
        return concepts

    # -- contract signature ------------------------------------------------------

    def parse_signature(self) -> None:
        head = self.advance()
        self.enter(Section.SIGNATURE)
        start = self.i
        try:
            name_tok = self.expect_name("contract name")
            if self.name is None:
                self.name, self.name_span = name_tok.lexeme, name_tok.span
            else:
                self.report(head.span, "duplicate Contract signature", GRAMMAR, Section.CONTRACT)
            self.expect("punctuation", "(")
        except _Bail:
            self.recover(start)
            self.enter(Section.CONTRACT)
            return
        if not self.accept("punctuation", ")"):
            while True:
                start = self.i
                try:
                    self.signature.append(self.parse_parameter())
                except _Bail:
                    self._skip_in_parens(start)
                if self.accept("punctuation", ","):
                    continue
                if self.accept("punctuation", ")"):
                    break
                if self.at_boundary():
                    self.report(self.tok.span, "missing ')' after contract parameters")
                    break
                self.report(self.tok.span, f"expected ',' or ')', found {self._describe(self.tok)}")
                self._skip_in_parens(self.i)
                if self.accept("punctuation", ")"):
                    break
        self.enter(Section.CONTRACT)

    def _skip_in_parens(self, start: int) -> None:
        """Skip to the next ',' or ')' at the parameter list's nesting level."""
        if self.i == start and not (self.at_punct(",") or self.at_punct(")")):
            self.advance()
        depth = 0
        while not self.at_boundary():
            t = self.tok
            if depth == 0 and t.kind == "punctuation" and t.lexeme in ",)":
                return
            if t.is_("punctuation", "("):
                depth += 1
            elif t.is_("punctuation", ")"):
                depth -= 1
            self.advance()

    def parse_parameter(self) -> ast.Parameter:
        start = self.tok
        name = self.expect_name("parameter name").lexeme
        self.expect("punctuation", ":")
        type_name = self.expect_name("parameter type").lexeme
        init = None
        if self.accept("operator", ":="):
            init = self.value()
        return ast.Parameter(name, type_name, init, span=self.span_from(start))

    # -- body sections -------------------------------------------------------------

    def parse_section(self, keyword: str) -> None:
        self.advance()
        self.enter(_SECTION_BUCKET[keyword])
        while not self.at_boundary():
            if self._end_marker():
                self._skip_end_marker()
                continue
            start = self.i
            try:
                if keyword == "Declarations":
                    self.parse_declaration()
                elif keyword in ("Obligations", "SurvivingObligations", "Powers"):
                    self.parse_norm_item(keyword)
                else:
                    expr = self.situation()
                    self.terminator()
                    {
                        "Preconditions": self.preconditions,
                        "Postconditions": self.postconditions,
                        "Constraints": self.constraints,
                    }[keyword].append(expr)
            except _Bail:
                self.recover(start)
        self.enter(Section.CONTRACT)

    def _norm_shaped(self) -> bool:
        t = self.tok
        if t.kind == "keyword" and t.lexeme in _NORM_KEYWORDS and self.peek().is_("punctuation", "("):
            return True
        return (t.kind == "identifier" and self.peek().is_("punctuation", "(")) or t.is_("keyword", "not")

    def parse_declaration(self) -> None:
        start = self.tok
        name = self.expect_name("declaration name").lexeme
        self.expect("punctuation", ":")
        if self._norm_shaped():
            norm = self.parse_norm_body(name, start)
            self.report(norm.span, f"norm {name} defined inside Declarations", STRUCTURE_ROLES)
            self._place_norm(norm)
            return
        type_name = self.expect_name("declaration type").lexeme
        inits: list[ast.Initializer] = []
        if self.at("operator", ":="):
            op = self.advance()
            self.value()
            self.report(op.span.cover(self.prev.span),
                        "declarations assign attributes with 'with', not ':='", GRAMMAR)
        elif self.accept("keyword", "with"):
            inits.append(self.parse_initializer())
            while self.accept("punctuation", ","):
                inits.append(self.parse_initializer())
        self.terminator()
        self.declarations.append(ast.Declaration(name, type_name, tuple(inits), span=self.span_from(start)))

    def parse_initializer(self) -> ast.Initializer:
        start = self.tok
        attr = self.expect_name("attribute name").lexeme
        if self.at("operator", "="):
            self.report(self.advance().span, "use ':=' to assign an attribute")
        else:
            self.expect("operator", ":=")
        value = self.value()
        return ast.Initializer(attr, value, span=self.span_from(start))

    def parse_norm_item(self, keyword: str) -> None:
        start = self.tok
        name = self.expect_name("norm name").lexeme
        self.expect("punctuation", ":")
        if self.at("identifier") and self.peek().kind in ("punctuation", "keyword", "operator") and (
            self.peek().lexeme in (";", "with", ":=")
        ):
            self.fail(f"attribute-like definition {name!r} inside {keyword}", STRUCTURE_ROLES, token=start)
        norm = self.parse_norm_body(name, start)
        expected = NormKind.POWER if keyword == "Powers" else NormKind.OBLIGATION
        if norm.kind is not expected:
            self.report(norm.span, f"{norm.kind.value.lower()} {name} placed in {keyword}", STRUCTURE_ROLES)
            self._place_norm(norm)
        elif keyword == "SurvivingObligations":
            self.surviving.append(norm)
        else:
            self._place_norm(norm)

    def _place_norm(self, norm: ast.Norm) -> None:
        (self.obligations if norm.kind is NormKind.OBLIGATION else self.powers).append(norm)

    def parse_norm_body(self, name: str, start: Token) -> ast.Norm:
        trigger = None
        if not (self.tok.kind == "keyword" and self.tok.lexeme in _NORM_KEYWORDS and self.peek().is_("punctuation", "(")):
            trigger = self.situation()
            self.expect("operator", "->", "'->' after trigger")
        t = self.tok
        if not (t.kind == "keyword" and t.lexeme in _NORM_KEYWORDS):
            self.fail(f"expected Obligation/O or Power/P, found {self._describe(t)}")
        kind = _NORM_KEYWORDS[self.advance().lexeme]
        self.expect("punctuation", "(")
        first = self.party()
        self.expect("punctuation", ",")
        second = self.party()
        self.expect("punctuation", ",")
        antecedent = self.situation()
        self.expect("punctuation", ",")
        consequent = self.situation()
        self.expect("punctuation", ")")
        span = self.span_from(start)
        self.terminator()
        return ast.Norm(name, kind, first, second, antecedent, consequent, trigger, span=span)

    def party(self) -> ast.Path:
        e = self.value()
        if not isinstance(e, ast.Path):
            self.fail("a norm party must be a role reference", GRAMMAR, token=self.prev)
        return e

    # -- expressions ------------------------------------------------------------------

    def situation(self) -> ast.SituationExpr:
        return self.as_situation(self.expr())

    def value(self) -> ast.ValueExpr:
        return self.as_value(self.expr())

    def as_situation(self, e) -> ast.SituationExpr:
        if isinstance(e, ast.BoolLit) and e.value:
            return ast.LiteralTrue(span=e.span)
        if isinstance(e, ast.SITUATION_TYPES):
            return e
        self.report(e.span, f"expected a situation, found value {_short(e)}", GRAMMAR)
        raise _Bail

    def as_value(self, e) -> ast.ValueExpr:
        if isinstance(e, ast.VALUE_TYPES):
            return e
        self.report(e.span, "expected a value, found a situation", GRAMMAR)
        raise _Bail

    def expr(self):
        self.depth += 1
        try:
            if self.depth > MAX_DEPTH:
                self.fail(f"expression nested deeper than {MAX_DEPTH}")
            return self.disjunction()
        finally:
            self.depth -= 1

    def disjunction(self):
        start = self.tok
        items = [self.conjunction()]
        while self.accept("keyword", "or"):
            items.append(self.conjunction())
        if len(items) == 1:
            return items[0]
        return ast.Or(tuple(self.as_situation(x) for x in items), span=self.span_from(start))

    def conjunction(self):
        start = self.tok
        items = [self.negation()]
        while self.accept("keyword", "and"):
            items.append(self.negation())
        if len(items) == 1:
            return items[0]
        return ast.And(tuple(self.as_situation(x) for x in items), span=self.span_from(start))

    def negation(self):
        if self.at("keyword", "not"):
            start = self.advance()
            self.depth += 1
            try:
                if self.depth > MAX_DEPTH:
                    self.fail(f"expression nested deeper than {MAX_DEPTH}")
                child = self.negation()
            finally:
                self.depth -= 1
            return ast.Not(self.as_situation(child), span=self.span_from(start))
        return self.comparison()

    def comparison(self):
        start = self.tok
        left = self.arith()
        t = self.tok
        if t.kind == "operator" and t.lexeme == "=":
            self.fail("use '==' for equality")
        if t.kind == "operator" and t.lexeme in _CMP_OPS:
            self.advance()
            right = self.arith()
            return ast.Comparison(t.lexeme, self.as_value(left), self.as_value(right), span=self.span_from(start))
        return left

    def arith(self):
        start = self.tok
        left = self.term()
        while self.tok.kind == "operator" and self.tok.lexeme in "+-":
            op = self.advance().lexeme
            right = self.term()
            left = ast.BinOp(op, self.as_value(left), self.as_value(right), span=self.span_from(start))
        return left

    def term(self):
        start = self.tok
        left = self.factor()
        while self.tok.kind == "operator" and self.tok.lexeme in ("*", "/", "%"):
            op = self.advance().lexeme
            right = self.factor()
            left = ast.BinOp(op, self.as_value(left), self.as_value(right), span=self.span_from(start))
        return left

    def factor(self):
        if self.at("operator", "-"):
            start = self.advance()
            self.depth += 1
            try:
                if self.depth > MAX_DEPTH:
                    self.fail(f"expression nested deeper than {MAX_DEPTH}")
                operand = self.as_value(self.factor())
            finally:
                self.depth -= 1
            span = self.span_from(start)
            if isinstance(operand, ast.NumberLit) and not operand.text.startswith("-"):
                return ast.NumberLit("-" + operand.text, span=span)
            return ast.BinOp("-", ast.NumberLit("0", span=start.span), operand, span=span)
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "number":
            self.advance()
            return ast.NumberLit(t.lexeme, span=t.span)
        if t.kind == "string":
            self.advance()
            return ast.StringLit(unescape(t.lexeme), span=t.span)
        if t.kind == "dateLiteral":
            self.advance()
            try:
                if "T" in t.lexeme:
                    _dt.datetime.fromisoformat(t.lexeme)
                else:
                    _dt.date.fromisoformat(t.lexeme)
            except ValueError:
                self.fail(f"invalid date {t.lexeme!r}", token=t)
            return ast.DateLit(t.lexeme, span=t.span)
        if t.is_("keyword", "true") or t.is_("keyword", "false"):
            self.advance()
            return ast.BoolLit(t.lexeme == "true", span=t.span)
        if t.is_("punctuation", "("):
            self.advance()
            inner = self.expr()
            self.expect("punctuation", ")")
            return inner
        if t.kind == "identifier":
            return self.path_or_call()
        self.fail(f"unexpected {self._describe(t)} in expression")

    def path_or_call(self):
        start = self.advance()
        segments = [start.lexeme]
        while self.at_punct(".") and self.peek().kind in ("identifier", "keyword"):
            self.advance()
            segments.append(self.advance().lexeme)
        if self.at_punct("("):
            if len(segments) > 1:
                self.fail(f"unsupported call {'.'.join(segments)}(...)", GRAMMAR, token=start)
            self.advance()
            args = []
            if not self.at_punct(")"):
                args.append(self.expr())
                while self.accept("punctuation", ","):
                    args.append(self.expr())
            self.expect("punctuation", ")")
            return ast.PredicateCall(start.lexeme, tuple(args), span=self.span_from(start))
        return ast.Path(tuple(segments), span=self.span_from(start))


def _short(e) -> str:
    if isinstance(e, ast.Path):
        return str(e)
    return type(e).__name__


def parse(source: str, *, fragment: bool = False) -> ParseResult:
    """Parse Symboleo source text.

    With ``fragment=True`` any subset of sections is accepted (no Domain or
    Contract header required), which is how isolated snippets are checked.
    """
    return _Parser(source, fragment).parse()
