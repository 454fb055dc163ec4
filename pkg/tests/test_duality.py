import pytest

from hopfcert.duality import HYPOTHESES, DualityFact, FactStore, Provenance
from hopfcert.pipeline import derive
from hopfcert.report import Refusal

from conftest import corpus


@pytest.fixture(scope="module")
def derived():
    return derive(corpus("manifest.txt"))


def test_pipeline_dimensions(derived):
    store, rep = derived
    assert rep.passed, rep.text()
    got = {a: (f.dimension, f.flavor, f.provenance.kind) for a, f in store.facts.items()}
    assert got == {
        "kZ": (1, "CY", "ComputedCertificate"),
        "H1": (1, "Duality", "ComputedCertificate"),
        "B_E_q2": (3, "TwistedCY", "Cited"),
        "H2": (2, "Duality", "ComposedByExtension"),
        "G_E_q2": (4, "TwistedCY", "ComposedByExtension"),
    }


def test_hypotheses_recorded(derived):
    store, _ = derived
    for name in ("kZ_H2_H1", "kZ_G_B_q2"):
        assert store.ledgers[name].missing() == []


def test_explain_tree(derived):
    store, _ = derived
    text = store.explain("G_E_q2")
    lines = text.splitlines()
    assert lines[0].startswith("G_E_q2: TwistedCY dimension 4")
    assert lines[1].startswith("|-- kZ: CY dimension 1")
    assert lines[2].startswith("`-- B_E_q2: TwistedCY dimension 3 [CITED]")
    assert text == derive(corpus("manifest.txt"))[0].explain("G_E_q2")


def test_f7_manifest_agrees(derived):
    store, _ = derived
    f7, rep = derive(corpus("manifest_f7.txt"))
    assert rep.passed
    assert f7.facts["H2"].dimension == 2
    assert f7.facts["G_E_q3_f7"].dimension == 4


def _fact(name, d, flavor="Duality"):
    return DualityFact(name, d, flavor, Provenance("Cited", "test"), character="c" if flavor == "TwistedCY" else None)


def test_fact_validation():
    with pytest.raises(ValueError):
        DualityFact("X", 1, "Weird", Provenance("Cited", ""))
    with pytest.raises(ValueError):
        DualityFact("X", 1, "TwistedCY", Provenance("Cited", ""))
    with pytest.raises(ValueError):
        DualityFact("X", 4, "Duality", Provenance("ComposedByExtension", ""), parts=(_fact("B", 1), _fact("H", 2)))


def _store_with_sequence():
    s = FactStore()
    s.register_cited_fact("B", 1, "Duality", "a book")
    s.register_cited_fact("H", 2, "Duality", "another book")
    s.add_sequence("seq", "B", "A", "H")
    return s


def test_missing_hypotheses_are_named():
    s = _store_with_sequence()
    s.smoothness_from_facts("seq")
    with pytest.raises(Refusal) as info:
        s.apply_extension_rule("seq")
    msg = str(info.value)
    assert "exact sequence battery" in msg and "bijective antipodes" in msg
    assert "B smooth" not in msg


def test_forward_and_converse():
    s = _store_with_sequence()
    led = s.ledgers["seq"]
    for h in HYPOTHESES:
        led.record(h, "given")
    fact = s.apply_extension_rule("seq")
    assert (fact.dimension, fact.flavor) == (3, "Duality")

    t = FactStore()
    t.register_cited_fact("A", 3, "Duality", "x")
    t.register_cited_fact("B", 1, "Duality", "y")
    t.add_sequence("seq", "B", "A", "H")
    for h in HYPOTHESES:
        t.ledgers["seq"].record(h, "given")
    with pytest.raises(Refusal):
        t.apply_extension_rule("seq", "converse")
    t.ledgers["seq"].record("cd equality", "given")
    assert t.apply_extension_rule("seq", "converse").dimension == 2
    assert t.facts["H"].provenance.kind == "SplitByExtension"


def test_conflicting_facts_refused():
    s = FactStore()
    s.register_cited_fact("X", 2, "Duality", "one")
    s.register_cited_fact("X", 2, "Duality", "same key is fine")
    with pytest.raises(Refusal) as info:
        s.register_cited_fact("X", 3, "Duality", "two")
    assert str(info.value) == "conflicting facts for X: existing [X 2 Duality Cited: one], new [X 3 Duality Cited: two]"


def test_ledger_text_sorted(derived):
    store, _ = derived
    names = [line.split("\t")[0] for line in store.ledger_text().splitlines()]
    assert names == sorted(names)
