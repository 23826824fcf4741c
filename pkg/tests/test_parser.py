import pytest

from conftest import SCENARIO_SPECS, fixture_text
from symboleo_kit import ast
from symboleo_kit.parser import MAX_DEPTH, parse
from symboleo_kit.taxonomy import GRAMMAR, STRUCTURE_ROLES, SYNTAX, Origin, Section


def diags_of(result):
    return [(d.taxonomy.id, d.section, d.message) for d in result.diagnostics]


def test_overview_listing_structure():
    r = parse(fixture_text("overview_listing.symboleo"))
    spec = r.spec
    assert spec is not None
    assert spec.domain.name == "MyDomain"
    assert [c.name for c in spec.domain.concepts] == ["Seller", "Deliv"]
    assert spec.domain.concepts[0].attributes == (ast.Attribute("name", "String"),)
    assert spec.domain.concepts[1].attributes == (ast.Attribute("qty", "Number", True),)
    assert spec.name == "MyContract"
    assert [n.name for n in spec.obligations] == ["delivery"]
    assert [n.name for n in spec.powers] == ["suspendDelivery"]
    assert len(spec.constraints) == 1
    assert spec.declarations[0].initializers == (ast.Initializer("buyername", ast.Path(("name",))),)
    # The literal "..." in the signature is the only problem the parser sees.
    assert diags_of(r) == [(SYNTAX.id, Section.SIGNATURE, "expected parameter name, found '.'")]


def test_overview_listing_norm_shapes():
    spec = parse(fixture_text("overview_listing.symboleo")).spec
    delivery = spec.obligations[0]
    assert delivery.kind is ast.NormKind.OBLIGATION
    assert (str(delivery.debtor), str(delivery.creditor)) == ("seller", "buyer")
    assert delivery.antecedent == ast.LiteralTrue()
    assert delivery.consequent == ast.PredicateCall("WhappensBefore", (ast.Path(("deliv",)), ast.Path(("dueDate",))))
    power = spec.powers[0]
    assert (str(power.creditor), str(power.debtor)) == ("s", "b")
    assert power.trigger == ast.PredicateCall(
        "Happens", (ast.PredicateCall("Violated", (ast.Path(("obligations", "payment")),)),)
    )
    assert spec.constraints[0] == ast.Not(ast.PredicateCall("IsEqual", (ast.Path(("s",)), ast.Path(("b",)))))


def test_corrected_power_fragment():
    r = parse(fixture_text("power_corrected.symboleo"), fragment=True)
    assert r.diagnostics == []
    (power,) = r.spec.powers
    assert power.consequent == ast.PredicateCall("Triggered", (ast.Path(("obligations", "oReducePrice")),))
    assert r.spec.fragment and r.spec.name is None


@pytest.mark.parametrize("name", ["power_incorrect.symboleo", "declarations_corrected.symboleo"])
def test_fragments_parse_without_diagnostics(name):
    r = parse(fixture_text(name), fragment=True)
    assert r.spec is not None
    assert r.diagnostics == []


def test_colon_form_concept_and_base_typed_declarations():
    spec = parse(fixture_text("declarations_corrected.symboleo"), fragment=True).spec
    assert spec.domain.concepts == (ast.DomainConcept("Paid", ast.ConceptKind.EVENT, (ast.Attribute("amount", "Number", True),)),)
    assert [(d.name, d.type_name) for d in spec.declarations] == [("deposit", "Paid"), ("remainingPayment", "Paid")]


def test_declaration_with_assignment_is_a_grammar_error():
    r = parse(fixture_text("declarations_incorrect.symboleo"), fragment=True)
    assert [d.name for d in r.spec.declarations] == ["deposit", "remainingPayment", "deliveryDate", "lateDelivery"]
    assert diags_of(r) == [(GRAMMAR.id, Section.DECLARATIONS, "declarations assign attributes with 'with', not ':='")]


@pytest.mark.parametrize("letter", "ABC")
def test_scenarios_parse_cleanly(letter):
    r = parse(SCENARIO_SPECS[letter].read_text(encoding="utf-8"))
    assert r.ok and r.diagnostics == []


def test_spurious_end_marker_is_recoverable():
    src = """Domain d
  Buyer isA Role;
endDomain
Contract C (b: Buyer)
  Preconditions
    true;
  endprecondition
  Obligations
    o1: O(b, b, true, true);
"""
    r = parse(src)
    assert r.spec is not None
    assert diags_of(r) == [(SYNTAX.id, Section.PRECONDITION, "unnecessary end marker 'endprecondition'")]
    assert [n.name for n in r.spec.obligations] == ["o1"]


def test_name_starting_with_end_is_not_a_marker():
    r = parse("Preconditions\n  endDate > 3;\n", fragment=True)
    assert r.diagnostics == []
    assert r.spec.preconditions == (ast.Comparison(">", ast.Path(("endDate",)), ast.NumberLit("3")),)


def test_missing_semicolon_at_line_end_does_not_swallow_next_statement():
    src = "Domain d\n  A isAn Asset with price: Number\n  B isA Role;\nendDomain\n"
    r = parse(src, fragment=True)
    assert [c.name for c in r.spec.domain.concepts] == ["A", "B"]
    assert diags_of(r) == [(SYNTAX.id, Section.DOMAIN, "missing ';' after 'Number'")]


def test_recovery_skips_to_next_statement():
    src = "Preconditions\n  a > > b;\n  c > d;\n"
    r = parse(src, fragment=True)
    assert len(r.spec.preconditions) == 1
    assert [d.taxonomy for d in r.diagnostics] == [SYNTAX]


def test_single_equals_is_a_syntax_error():
    r = parse("Preconditions\n  x = 5;\n", fragment=True)
    assert diags_of(r) == [(SYNTAX.id, Section.PRECONDITION, "use '==' for equality")]


def test_wrong_case_section_keyword():
    r = parse("obligations\n  o1: O(a, b, true, true);\n", fragment=True)
    assert [n.name for n in r.spec.obligations] == ["o1"]
    assert [d.taxonomy for d in r.diagnostics] == [SYNTAX]


def test_power_in_obligations_section_is_a_structure_error():
    r = parse("Obligations\n  p1: P(a, b, true, Terminated(self));\n", fragment=True)
    assert [n.name for n in r.spec.powers] == ["p1"]
    assert [d.taxonomy for d in r.diagnostics] == [STRUCTURE_ROLES]


def test_missing_contract_signature_yields_no_spec():
    r = parse("Domain d\n  A isA Role;\nendDomain\n")
    assert r.spec is None
    assert not r.ok
    assert any(d.taxonomy in (SYNTAX, GRAMMAR) for d in r.diagnostics)


def test_nesting_limit():
    deep = "not(" * (MAX_DEPTH + 5) + "true" + ")" * (MAX_DEPTH + 5)
    r = parse(f"Preconditions\n  {deep};\n", fragment=True)
    assert any("nested deeper" in d.message for d in r.diagnostics)


def test_trigger_and_aliases():
    r = parse("Obligations\n  o: Happens(e) -> Obligation(a, b, true, Happens(f));\n", fragment=True)
    (o,) = r.spec.obligations
    assert o.trigger == ast.PredicateCall("Happens", (ast.Path(("e",)),))


def test_diagnostics_are_auto_and_within_bounds():
    src = "Domain d\n  A isA Role\n  B isA\nendDomain\nContract C (a: A, ..., )\n  Powers\n    p: P(a, a, true, x + );\n"
    r = parse(src)
    lines = src.splitlines()
    for d in r.diagnostics:
        assert d.origin is Origin.AUTO
        assert 1 <= d.span.start_line <= len(lines) + 1
        assert 1 <= d.span.end_line <= len(lines) + 1


def test_parsing_is_deterministic():
    src = fixture_text("overview_listing.symboleo")
    a, b = parse(src), parse(src)
    assert a.spec == b.spec
    assert [d.record() for d in a.diagnostics] == [d.record() for d in b.diagnostics]


def test_illegal_characters_become_syntax_diagnostics():
    r = parse("Preconditions\n  a > 1 # note\n;\n", fragment=True)
    assert any(d.taxonomy is SYNTAX and d.section is Section.PRECONDITION for d in r.diagnostics)
