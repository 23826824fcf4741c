import pytest

from symboleo_kit.ast import SourceSpan
from symboleo_kit.taxonomy import (
    GRAMMAR,
    SECTIONS,
    SYNTAX,
    TAXONOMY,
    Diagnostic,
    Origin,
    Section,
    UnknownTaxonomy,
    lookup,
    normalize,
)


def test_sixteen_types_with_tiered_weights():
    assert [e.id for e in TAXONOMY] == list(range(1, 17))
    assert [e.weight for e in TAXONOMY] == [4] * 7 + [3] * 7 + [2] * 2
    assert len({e.name for e in TAXONOMY}) == 16


def test_lookup_by_id_and_name():
    assert lookup(9) is GRAMMAR
    assert lookup("15") is SYNTAX
    assert lookup("incorrect syntax") is SYNTAX
    for bad in (0, 17, "nonsense"):
        with pytest.raises(UnknownTaxonomy):
            lookup(bad)


def test_eight_sections():
    assert [s.code for s in SECTIONS] == ["Cont", "Dom", "Dec", "Pre", "Pos", "Sig", "OP", "Cos"]
    assert Section.parse("op") is Section.OBLIGATIONS_POWERS
    assert Section.parse("Obligations&Powers") is Section.OBLIGATIONS_POWERS
    with pytest.raises(ValueError):
        Section.parse("Powers")


def test_record_round_trip():
    d = Diagnostic(GRAMMAR, Section.DECLARATIONS, "a | b", SourceSpan(1, 2, 3, 4), Origin.AUTO, "x.symboleo")
    back = Diagnostic.from_record(d.record())
    assert back.file == "x.symboleo"
    assert back == Diagnostic(GRAMMAR, Section.DECLARATIONS, "a / b", SourceSpan(1, 2, 3, 4))
    spanless = Diagnostic(SYNTAX, Section.CONTRACT, "m")
    assert Diagnostic.from_record(spanless.record()) == spanless


def test_normalize_keeps_heaviest_per_span_and_orders():
    span = SourceSpan(2, 1, 2, 5)
    light = Diagnostic(SYNTAX, Section.OBLIGATIONS_POWERS, "light", span)
    heavy = Diagnostic(GRAMMAR, Section.OBLIGATIONS_POWERS, "heavy", span)
    early = Diagnostic(SYNTAX, Section.DOMAIN, "early", SourceSpan(1, 1, 1, 2))
    out = normalize([light, heavy, early, early])
    assert out == [early, heavy]
    assert normalize(reversed([light, heavy, early])) == out


def test_diagnostics_must_use_registry_entries():
    from symboleo_kit.taxonomy import TaxonomyEntry, Tier

    with pytest.raises(UnknownTaxonomy):
        Diagnostic(TaxonomyEntry(9, "Inconsistency with the Grammar", Tier.MEDIUM), Section.DOMAIN, "copy")
    with pytest.raises(UnknownTaxonomy):
        Diagnostic(9, Section.DOMAIN, "bare id")
