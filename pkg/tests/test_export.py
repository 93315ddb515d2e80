import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from condcalc.calculus import DerivationError, LogicId, check_derivation
from condcalc.export import (
    SchemaError, derivation_from_json, derivation_to_json, derivation_to_latex, derivation_to_text,
)
from condcalc.generate import random_provable
from condcalc.prover import Provable, prove
from condcalc.syntax import parse_sequent

LOGICS = list(LogicId)


def proof(text, logic):
    v = prove(parse_sequent(text), logic)
    assert isinstance(v, Provable)
    return v.witness


def test_json_fields():
    doc = derivation_to_json(proof("a => a", "ckid"))
    assert doc["rule"] == "CKIDg" and doc["sequent"] == ["a => a"]
    assert doc["pivot"] == {"split": 0}
    assert doc["children"][0]["rule"] == "Axiom"
    assert doc["children"][0]["children"] == []


def test_marks_survive_round_trip():
    d = proof("~(a => b), ~a, b", "ckmp")
    doc = json.loads(json.dumps(derivation_to_json(d)))
    assert any(n["marked"] for n in doc["children"])
    back = derivation_from_json(doc)
    assert check_derivation(back, "ckmp", restricted=True)
    assert derivation_to_json(back) == doc


@pytest.mark.parametrize("logic", LOGICS)
@given(seed=st.integers(0, 10**5))
def test_round_trip(logic, seed):
    _, d = random_provable(seed, logic, 14)
    doc = json.loads(json.dumps(derivation_to_json(d)))
    back = derivation_from_json(doc)
    assert check_derivation(back, logic)
    assert back.conclusion == d.conclusion
    assert derivation_to_json(back) == doc


def test_wrong_rule_reported_by_checker():
    doc = derivation_to_json(proof("a => a", "ckid"))
    doc["rule"] = "CKg"
    doc["children"][0]["sequent"] = ["a"]
    with pytest.raises(DerivationError):
        check_derivation(derivation_from_json(doc), "ckid")


def test_principal_not_in_sequent():
    doc = derivation_to_json(proof("a, ~a", "ck"))
    doc["principal"] = ["b", "~b"]
    with pytest.raises(DerivationError):
        check_derivation(derivation_from_json(doc), "ck")


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("children"),
    lambda d: d.update(rule="Nope"),
    lambda d: d.update(sequent="a"),
    lambda d: d.update(sequent=["a &"]),
    lambda d: d.update(marked=[5]),
    lambda d: d.update(pivot=3),
    lambda d: d["children"][0].update(principal_marked=[0]),
])
def test_schema_errors(mutate):
    doc = derivation_to_json(proof("a => a", "ckid"))
    mutate(doc)
    with pytest.raises(SchemaError):
        derivation_from_json(doc)


def test_not_an_object():
    with pytest.raises(SchemaError):
        derivation_from_json([1, 2])


def _balanced(tex):
    return tex.count(r"\begin{prooftree}") == tex.count(r"\end{prooftree}") and \
        tex.count("{") == tex.count("}")


@pytest.mark.parametrize("text,logic", [("a => a", "ckid"), ("~((a => b) & a & ~b)", "ckmp"),
                                        ("~(~(a => b) & ~(a => ~b))", "ckcem"),
                                        ("[]a -> a", "t")])
def test_latex_well_formed(text, logic):
    tex = derivation_to_latex(proof(text, logic))
    assert _balanced(tex) and r"\RightLabel" in tex


def test_latex_splits_wide_rules():
    _, d = random_provable(3, "ckcemid", 40)
    tex = derivation_to_latex(d)
    assert _balanced(tex)
    assert "InfC" in tex


def test_text_lists_every_node():
    d = proof("~((a => b) & a & ~b)", "ckmp")
    text = derivation_to_text(d)
    assert text.splitlines()[0].endswith("[NegAnd]")
    assert len(text.splitlines()) >= d.count()
