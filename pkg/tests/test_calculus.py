from collections import Counter
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from condcalc.calculus import (
    CK_FAMILY, LOGIC_RULES, MP_FAMILY, Derivation, DerivationError, LogicId, MarkedSequent,
    RuleId, RuleInstance, SignatureError, applicable_modal, applicable_prop, axiom_instance,
    check_derivation, extends, is_axiom, premises, propositional_descendants, weaken,
)
from condcalc.generate import random_provable
from condcalc.syntax import TOP, And, Bot, Box, Cond, Neg, Sequent, Var

from conftest import cond_formulas

a, b, c = Var("a"), Var("b"), Var("c")
ALL = list(LogicId)
COND_LOGICS = [lg for lg in LogicId if not lg.is_modal]


def ms(*occ):
    return MarkedSequent((o, False) if not isinstance(o, tuple) else o for o in occ)


def leaf(s: MarkedSequent) -> Derivation:
    inst = axiom_instance(s)
    assert inst is not None
    return Derivation(s, inst)


def ckid_a_imp_a() -> Derivation:
    inst = RuleInstance.build(RuleId.CKIDg, [(Cond(a, a), False)], (), 0)
    return Derivation(inst.conclusion, inst, (leaf(inst.premises[0]),))


class TestLogics:
    def test_rule_sets(self):
        R = RuleId
        assert LOGIC_RULES[LogicId.CK] == {R.CKg}
        assert LOGIC_RULES[LogicId.CKMPID] == {R.CKIDg, R.MPg}
        assert LOGIC_RULES[LogicId.CKMPCEM] == {R.CKCEMg, R.MPg, R.MPCEMg}
        assert LOGIC_RULES[LogicId.CKMPCEMID] == {R.CKCEMIDg, R.MPg, R.MPCEMg}
        assert LOGIC_RULES[LogicId.T] == {R.K, R.T}
        assert LOGIC_RULES[LogicId.K4] == {R.K4}
        assert len(LOGIC_RULES) == 11

    def test_parse(self):
        assert LogicId.parse("CKMP") is LogicId.CKMP
        with pytest.raises(ValueError):
            LogicId.parse("s5")

    def test_extension_order(self):
        assert all(extends(LogicId.CK, lg) for lg in COND_LOGICS)
        assert extends(LogicId.CKMP, LogicId.CKMPCEMID)
        assert not extends(LogicId.CKID, LogicId.CKMP)
        assert extends(LogicId.K, LogicId.T) and extends(LogicId.K, LogicId.K4)
        assert not extends(LogicId.T, LogicId.K4)
        assert not extends(LogicId.K, LogicId.CK)


class TestAxioms:
    def test_examples(self):
        assert is_axiom(Sequent.of(And(a, b), Neg(And(a, b)), c))
        assert is_axiom(Sequent.of(TOP))
        assert not is_axiom(Sequent.of(a, b))

    def test_marks_do_not_matter(self):
        f = Cond(a, b)
        assert is_axiom(MarkedSequent([(f, False), (Neg(f), True)]))

    @given(st.lists(cond_formulas, max_size=5))
    def test_instance_iff_axiom(self, fs):
        s = MarkedSequent.unmarked(fs)
        assert (axiom_instance(s) is not None) == is_axiom(s)


class TestPropositional:
    def test_negneg(self):
        (inst,) = applicable_prop(ms(Neg(Neg(a))))
        assert inst.rule is RuleId.NegNeg and inst.premises == (ms(a),)

    def test_andsplit(self):
        (inst,) = applicable_prop(ms(And(a, b), c))
        assert inst.rule is RuleId.AndSplit
        assert inst.premises == (ms(a, c), ms(b, c))

    def test_negand(self):
        (inst,) = applicable_prop(ms(Neg(And(a, b))))
        assert inst.premises == (ms(Neg(a), Neg(b)),)

    def test_nothing_applies(self):
        assert applicable_prop(ms(a, Neg(b))) == []

    def test_marks_persist(self):
        lit = (Neg(Cond(a, b)), True)
        (inst,) = applicable_prop(MarkedSequent([lit, (Neg(Neg(c)), False)]))
        assert lit in inst.premises[0].items

    def test_one_instance_per_occurrence_kind(self):
        insts = applicable_prop(ms(And(a, b), Neg(Neg(c)), Neg(And(b, c))))
        assert sorted(i.rule.value for i in insts) == ["AndSplit", "NegAnd", "NegNeg"]


class TestModal:
    def test_ck_example(self):
        s = ms(Neg(Cond(a, b)), Cond(a, c))
        insts = list(applicable_modal(s, "ck"))
        want = (ms(Neg(a), a), ms(Neg(a), a), ms(Neg(b), c))
        assert any(i.rule is RuleId.CKg and len(i.principal) == 2 and i.premises == want
                   for i in insts)
        assert all(i.principal[0][0] == Cond(a, c) for i in insts)

    def test_mp_example(self):
        f = Neg(Cond(a, b))
        insts = [i for i in applicable_modal(ms(f), "ckmp") if i.rule is RuleId.MPg]
        assert len(insts) == 1
        marked = (f, True)
        assert insts[0].premises == (MarkedSequent([(a, False), marked]),
                                     MarkedSequent([(Neg(b), False), marked]))

    def test_k_example(self):
        s = ms(Neg(Box(a)), Box(b))
        insts = list(applicable_modal(s, "k"))
        assert any(i.premises == (ms(Neg(a), b),) for i in insts)
        assert any(i.premises == (ms(b),) and i.context == ms(Neg(Box(a))) for i in insts)

    def test_t_and_k4_shapes(self):
        (t,) = [i for i in applicable_modal(ms(Neg(Box(a)), b), "t") if i.rule is RuleId.T]
        assert t.premises == (ms(Neg(a), Neg(Box(a)), b),)
        k4 = [i for i in applicable_modal(ms(Neg(Box(a)), Box(b)), "k4") if len(i.principal) == 2]
        assert k4[0].premises == (ms(Neg(a), Neg(Box(a)), b),)

    def test_marked_principal_skipped(self):
        s = MarkedSequent([(Neg(Cond(a, b)), True), (Cond(a, c), True)])
        assert not any(i.rule in MP_FAMILY for i in applicable_modal(s, "ckmpcem"))
        assert any(i.rule in MP_FAMILY for i in applicable_modal(s, "ckmpcem", restricted=False))

    def test_signature_policed(self):
        with pytest.raises(SignatureError):
            list(applicable_modal(ms(Box(a)), "ck"))
        with pytest.raises(SignatureError):
            list(applicable_modal(ms(Cond(a, b)), "k"))

    @pytest.mark.parametrize("logic", ALL)
    def test_conclusion_is_principal_plus_context(self, logic):
        if logic.is_modal:
            s = ms(Neg(Box(a)), Box(b), Neg(Box(c)), a)
        else:
            s = ms(Neg(Cond(a, b)), Cond(a, c), Cond(b, b), Neg(Cond(c, a)), a)
        for inst in applicable_modal(s, logic):
            assert Counter(inst.principal) + Counter(inst.context.items) == Counter(s.items)
            assert inst.conclusion == s

    def test_ck_premises_cleared_mp_premises_marked(self):
        s = MarkedSequent([(Neg(Cond(a, b)), True), (Cond(c, b), False)])
        for inst in applicable_modal(s, "ckmp", restricted=False):
            if inst.rule in CK_FAMILY:
                assert not any(m for p in inst.premises for _, m in p)
            else:
                assert all((inst.principal[0][0], True) in p.items for p in inst.premises)

    @given(st.lists(st.tuples(cond_formulas, cond_formulas, st.booleans()), max_size=3))
    def test_equivalence_premises(self, lits):
        fs = [Cond(x, y) if pos else Neg(Cond(x, y)) for x, y, pos in lits]
        for logic in ("ckid", "ckcem"):
            for inst in applicable_modal(ms(*fs), logic):
                ants = [f.args[0] if isinstance(f, Cond) else f.args[0].args[0]
                        for f, _ in inst.principal]
                n = len(ants) - 1
                eq = inst.premises[:2 * n]
                want = []
                for ai in ants[1:]:
                    want += [ms(Neg(ants[0]), ai), ms(Neg(ai), ants[0])]
                assert list(eq) == want
                assert len(inst.premises) == 2 * n + 1

    @given(st.integers(0, 3), st.integers(0, 3), st.booleans())
    def test_instance_counts(self, npos, nneg, marked):
        pos = [Cond(Var(x), a) for x in "abc"[:npos]]
        neg = [Neg(Cond(Var(x), b)) for x in "abc"[:nneg]]
        s = MarkedSequent([(f, marked) for f in pos + neg])
        unmarked_pos = 0 if marked else npos
        unmarked_neg = 0 if marked else nneg
        got = Counter(i.rule for i in applicable_modal(s, "ckmpcem"))
        assert got[RuleId.CKCEMg] == sum(comb(npos, k) * k for k in range(1, npos + 1)) * 2 ** nneg
        assert got[RuleId.MPg] == unmarked_neg and got[RuleId.MPCEMg] == unmarked_pos
        got = Counter(i.rule for i in applicable_modal(s, "ckmp"))
        assert got[RuleId.CKg] == npos * 2 ** nneg
        boxes = ms(*[Box(Var(x)) for x in "abc"[:npos]], *[Neg(Box(Var(x))) for x in "abc"[:nneg]])
        got = Counter(i.rule for i in applicable_modal(boxes, "t"))
        assert got[RuleId.K] == npos * 2 ** nneg and got[RuleId.T] == nneg

    def test_order_by_premise_count(self):
        s = ms(Neg(Cond(a, b)), Cond(a, c), Neg(Cond(b, c)))
        counts = [len(i.premises) for i in applicable_modal(s, "ckmp")]
        assert counts == sorted(counts)


class TestPremises:
    def test_ckid_a_imp_a(self):
        inst = RuleInstance.build(RuleId.CKIDg, [(Cond(a, a), False)], (), 0)
        assert premises(inst) == (ms(Neg(a), a),)

    def test_mp_with_context(self):
        f = Neg(Cond(a, b))
        inst = RuleInstance.build(RuleId.MPg, [(f, False)], ms(c))
        assert premises(inst) == (MarkedSequent([(a, False), (f, True), (c, False)]),
                                  MarkedSequent([(Neg(b), False), (f, True), (c, False)]))

    def test_t_with_context(self):
        inst = RuleInstance.build(RuleId.T, [(Neg(Box(a)), False)], ms(b))
        assert premises(inst) == (ms(Neg(a), Neg(Box(a)), b),)

    def test_malformed(self):
        from condcalc.calculus import MalformedInstance
        with pytest.raises(MalformedInstance):
            RuleInstance.build(RuleId.AndSplit, [(a, False)])
        with pytest.raises(MalformedInstance):
            RuleInstance.build(RuleId.CKCEMg, [(Neg(Cond(a, b)), False)], (), 0)

    def test_marking_non_literal_rejected(self):
        with pytest.raises(ValueError):
            MarkedSequent([(a, True)])


class TestCheck:
    def test_ckid_derivation(self):
        d = ckid_a_imp_a()
        assert check_derivation(d, "ckid")
        assert d.count() == 2 and d.height == 2

    def test_wrong_logic(self):
        with pytest.raises(DerivationError) as e:
            check_derivation(ckid_a_imp_a(), "ck")
        assert "CKIDg" in e.value.reason and e.value.path == ()

    def test_arity(self):
        inst = RuleInstance.build(RuleId.AndSplit, [(And(a, Neg(a)), False)], ms(Neg(a)))
        d = Derivation(inst.conclusion, inst, (leaf(inst.premises[0]),))
        with pytest.raises(DerivationError, match="2 children"):
            check_derivation(d, "ck")

    def test_child_mismatch_reports_path(self):
        inst = RuleInstance.build(RuleId.NegNeg, [(Neg(Neg(a)), False)], ms(Neg(a)))
        wrong = leaf(ms(b, Neg(b)))
        with pytest.raises(DerivationError) as e:
            check_derivation(Derivation(inst.conclusion, inst, (wrong,)), "k")
        assert e.value.path == (0,)

    def test_forged_premises(self):
        good = RuleInstance.build(RuleId.NegNeg, [(Neg(Neg(a)), False)], ms(Neg(a)))
        forged = RuleInstance(good.rule, good.principal, good.context, (ms(TOP),))
        d = Derivation(forged.conclusion, forged, (leaf(ms(TOP)),))
        with pytest.raises(DerivationError, match="schema"):
            check_derivation(d, "k")

    def test_signature(self):
        d = leaf(ms(Box(a), Neg(Box(a))))
        assert check_derivation(d, "k")
        with pytest.raises(DerivationError):
            check_derivation(d, "ck")

    def test_restricted_marks(self):
        f = Neg(Cond(a, b))
        inst = RuleInstance.build(RuleId.MPg, [(f, True)], ms(Neg(a), b))
        kids = tuple(leaf(p) for p in inst.premises)
        d = Derivation(inst.conclusion, inst, kids)
        assert check_derivation(d, "ckmp")
        with pytest.raises(DerivationError, match="marked"):
            check_derivation(d, "ckmp", restricted=True)

    def test_cut_only_when_allowed(self):
        inst = RuleInstance.build(RuleId.Cut, [], ms(a, Neg(a)), cut=b)
        d = Derivation(inst.conclusion, inst, tuple(leaf(p) for p in inst.premises))
        assert check_derivation(d, "ck", allow_cut=True)
        with pytest.raises(DerivationError):
            check_derivation(d, "ck")


@pytest.mark.parametrize("logic", ALL)
@given(seed=st.integers(0, 10**6))
def test_weakening_preserves_validity(logic, seed):
    s, d = random_provable(seed, logic, 12)
    extra = [(Var("c"), False), (Neg(Var("a")), False)]
    w = weaken(d, extra)
    assert check_derivation(w, logic)
    assert w.conclusion == d.conclusion + extra


class TestDescendants:
    def test_example(self):
        f = And(Neg(And(a, b)), c)
        assert propositional_descendants(f) == {
            Sequent.of(f), Sequent.of(Neg(And(a, b))), Sequent.of(c), Sequent.of(Neg(a), Neg(b))}

    def test_atom(self):
        assert propositional_descendants(a) == {Sequent.of(a)}

    def test_negneg(self):
        assert propositional_descendants(Neg(Neg(a))) == {Sequent.of(Neg(Neg(a))), Sequent.of(a)}

    def test_stops_at_modal(self):
        f = Neg(Neg(Cond(a, And(b, c))))
        assert propositional_descendants(f) == {Sequent.of(f), Sequent.of(Cond(a, And(b, c)))}
