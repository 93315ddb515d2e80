"""Formula corpora and forward construction of random derivations."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .calculus import (
    LOGIC_RULES, Derivation, LogicId, Occurrence, RuleId, RuleInstance, weaken,
)
from .syntax import TOP, And, Bot, Box, Cond, Formula, Neg, Sequent, Var, disj, substitute

VARS = ("a", "b", "c")


# --------------------------------------------------------------------------
# formulas

def enumerate_formulas(max_size: int, names: Sequence[str] = VARS, modal: type = Cond,
                       with_bot: bool = True) -> Iterator[Formula]:
    """Every formula of size <= ``max_size``, smallest first.

    ``modal`` is ``Cond`` (binary) or ``Box`` (unary).
    """
    by_size: list[list[Formula]] = [[]]
    for n in range(1, max_size + 1):
        layer: list[Formula] = []
        if n == 1:
            layer += [Var(x) for x in names]
            if with_bot:
                layer.append(Bot())
        else:
            layer += [Neg(f) for f in by_size[n - 1]]
            if modal is Box:
                layer += [Box(f) for f in by_size[n - 1]]
            for k in range(1, n - 1):
                for f in by_size[k]:
                    for g in by_size[n - 1 - k]:
                        layer.append(And(f, g))
                        if modal is Cond:
                            layer.append(Cond(f, g))
        by_size.append(layer)
        yield from layer


def canonical_renaming(f: Formula, names: Sequence[str] = VARS) -> Formula:
    """Rename variables in order of first occurrence (left to right)."""
    order: list[str] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if type(g) is Var:
            if g.args[0] not in order:
                order.append(g.args[0])
        else:
            stack.extend(reversed(g.args))
    mapping = {x: Var(names[i]) for i, x in enumerate(order)}
    return substitute(f, mapping)


def random_formula(rng: random.Random, size: int, names: Sequence[str] = VARS,
                   modal: type = Cond) -> Formula:
    """A random formula of exactly ``size`` nodes."""
    if size <= 1:
        return Bot() if rng.random() < 0.08 else Var(rng.choice(names))
    if size == 2:
        op = rng.choice((Neg, modal if modal is Box else Neg))
        return op(random_formula(rng, 1, names, modal))
    kind = rng.random()
    if kind < 0.3:
        return Neg(random_formula(rng, size - 1, names, modal))
    if modal is Box and kind < 0.5:
        return Box(random_formula(rng, size - 1, names, modal))
    k = rng.randint(1, size - 2)
    left = random_formula(rng, k, names, modal)
    right = random_formula(rng, size - 1 - k, names, modal)
    if modal is Cond and kind < 0.65:
        return Cond(left, right)
    return And(left, right)


def modal_op(logic: LogicId) -> type:
    return Box if logic.is_modal else Cond


# --------------------------------------------------------------------------
# forward construction of derivations

class _Gen:
    def __init__(self, rng: random.Random, logic: LogicId):
        self.rng = rng
        self.logic = logic
        self.op = modal_op(logic)
        self.rules = sorted(LOGIC_RULES[logic] | {RuleId.NegNeg, RuleId.NegAnd,
                                                   RuleId.AndSplit}, key=lambda r: r.value)

    def formula(self, size: int | None = None) -> Formula:
        return random_formula(self.rng, size or self.rng.randint(1, 3), VARS, self.op)

    def leaf(self) -> Derivation:
        if self.rng.random() < 0.1:
            inst = RuleInstance.build(RuleId.NegBot, [(TOP, False)])
        else:
            a = self.formula()
            inst = RuleInstance.build(RuleId.Axiom, [(a, False), (Neg(a), False)])
        return Derivation(inst.conclusion, inst)

    def tree(self, budget: int) -> Derivation:
        if budget <= 1:
            return self.leaf()
        for _ in range(8):
            rule = self.rng.choice(self.rules)
            d = getattr(self, "_" + rule.value.lower())(budget - 1)
            if d is not None:
                return d
        return self.leaf()

    # helpers --------------------------------------------------------------

    def pick(self, d: Derivation, test) -> Occurrence | None:
        found = [o for o in d.conclusion.items if test(o[0])]
        return self.rng.choice(found) if found else None

    def apply(self, rule: RuleId, principal, context, kids, split=None) -> Derivation:
        inst = RuleInstance.build(rule, principal, context, split)
        for k, p in zip(kids, inst.premises):
            assert k.conclusion == p, (rule, k.conclusion, p)
        return Derivation(inst.conclusion, inst, tuple(kids))

    def fold(self, d: Derivation) -> tuple[Derivation, Formula | None]:
        """Turn all non-negated formulas of ``d``'s conclusion into one disjunction.

        Returns the new derivation and the disjunction (None if there were no
        positive formulas).
        """
        pos = [o for o in d.conclusion.items if type(o[0]) is not Neg]
        if not pos:
            return d, None
        acc = pos[0][0]
        for o in pos[1:]:
            c = o[0]
            # G, X, C  ->  G, ~~X, C  ->  G, ~~X, ~~C  ->  G, ~(~X & ~C)
            rest = d.conclusion - [(acc, False), (c, False)]
            d = self.apply(RuleId.NegNeg, [(Neg(Neg(acc)), False)], rest + [(c, False)], [d])
            d = self.apply(RuleId.NegNeg, [(Neg(Neg(c)), False)], rest + [(Neg(Neg(acc)), False)], [d])
            acc = Neg(And(Neg(acc), Neg(c)))
            d = self.apply(RuleId.NegAnd, [(acc, False)], rest, [d])
        return d, acc

    def equivalent(self, a0: Formula) -> tuple[Formula, Derivation, Derivation]:
        """An antecedent provably equivalent to ``a0`` with proofs of both directions."""
        kind = self.rng.randrange(4)
        ax = lambda f: self.apply(RuleId.Axiom, [(f, False), (Neg(f), False)], [], [])
        if kind <= 1:
            return a0, ax(a0), ax(a0)
        if kind == 2:
            ai = Neg(Neg(a0))
            # ~a0, ~~a0   and   ~~~a0, a0
            d1 = self.apply(RuleId.NegNeg, [(ai, False)], [(Neg(a0), False)], [ax(a0)])
            d2 = self.apply(RuleId.NegNeg, [(Neg(ai), False)], [(a0, False)],
                            [self.apply(RuleId.Axiom, [(a0, False), (Neg(a0), False)], [], [])])
            return ai, d1, d2
        ai = And(a0, a0)
        d1 = self.apply(RuleId.AndSplit, [(ai, False)], [(Neg(a0), False)], [ax(a0), ax(a0)])
        inner = self.apply(RuleId.Axiom, [(a0, False), (Neg(a0), False)], [(Neg(a0), False)], [])
        d2 = self.apply(RuleId.NegAnd, [(Neg(ai), False)], [(a0, False)], [inner])
        return ai, d1, d2

    def context(self) -> list[Occurrence]:
        return [(self.formula(), False) for _ in range(self.rng.randrange(2))]

    # propositional ------------------------------------------------------------

    def _negneg(self, budget: int) -> Derivation | None:
        d = self.tree(budget)
        o = self.pick(d, lambda f: True)
        if o is None or o[1]:
            return None
        return self.apply(RuleId.NegNeg, [(Neg(Neg(o[0])), False)], d.conclusion - [o], [d])

    def _negand(self, budget: int) -> Derivation | None:
        d = self.tree(budget)
        o = self.pick(d, lambda f: type(f) is Neg)
        if o is None or o[1]:
            return None
        other = Neg(self.formula())
        d = weaken(d, [(other, False)])
        parts = [o[0].args[0], other.args[0]]
        self.rng.shuffle(parts)
        rest = d.conclusion - [o, (other, False)]
        return self.apply(RuleId.NegAnd, [(Neg(And(*parts)), False)], rest, [d])

    def _andsplit(self, budget: int) -> Derivation | None:
        d1 = self.tree(budget // 2)
        d2 = self.tree(budget - budget // 2)
        o1 = self.pick(d1, lambda f: True)
        o2 = self.pick(d2, lambda f: True)
        if o1[1] or o2[1]:
            return None
        r1 = d1.conclusion - [o1]
        r2 = d2.conclusion - [o2]
        d1 = weaken(d1, r2.items)
        d2 = weaken(d2, r1.items)
        return self.apply(RuleId.AndSplit, [(And(o1[0], o2[0]), False)], r1 + r2, [d1, d2])

    # conditional rules ------------------------------------------------------

    def _literal_premise(self, budget: int, cem: bool):
        """A proof of a CK-family main premise, with its positive and negative consequents."""
        d, b0 = self.fold(self.tree(budget))
        pos: list[Formula] = []
        rest = d.conclusion
        if b0 is not None:
            pos.append(b0)
            rest = rest - [(b0, False)]
        negs = [o[0].args[0] for o in rest.items]
        if cem:
            keep = []
            for x in negs:
                if not pos or self.rng.random() < 0.3:
                    pos.append(Neg(x))
                else:
                    keep.append(x)
            negs = keep
        elif not pos:
            pos.append(Bot())
            d = weaken(d, [(Bot(), False)])
        if not cem and len(pos) != 1:
            return None
        return d, pos, negs

    def _conditional(self, rule: RuleId, budget: int) -> Derivation | None:
        with_id = rule in (RuleId.CKIDg, RuleId.CKCEMIDg)
        cem = rule in (RuleId.CKCEMg, RuleId.CKCEMIDg)
        got = self._literal_premise(max(1, budget - 2), cem)
        if got is None:
            return None
        main, pos, negs = got
        a0 = self.formula()
        lits: list[Formula] = [Cond(a0, pos[0])]
        eqs: list[Derivation] = []
        for b in pos[1:]:
            ai, e1, e2 = self.equivalent(a0)
            lits.append(Cond(ai, b))
            eqs += [e1, e2]
        for b in negs:
            ai, e1, e2 = self.equivalent(a0)
            lits.append(Neg(Cond(ai, b)))
            eqs += [e1, e2]
        if with_id:
            main = weaken(main, [(Neg(a0), False)])
        split = len(pos) - 1 if cem else 0
        return self.apply(rule, [(f, False) for f in lits], self.context(), eqs + [main], split)

    def _ckg(self, budget):
        return self._conditional(RuleId.CKg, budget)

    def _ckidg(self, budget):
        return self._conditional(RuleId.CKIDg, budget)

    def _ckcemg(self, budget):
        return self._conditional(RuleId.CKCEMg, budget)

    def _ckcemidg(self, budget):
        return self._conditional(RuleId.CKCEMIDg, budget)

    def _mp(self, rule: RuleId, budget: int) -> Derivation | None:
        d1 = self.tree(budget // 2)
        d2 = self.tree(budget - budget // 2)
        o1 = self.pick(d1, lambda f: True)
        test = (lambda f: type(f) is Neg) if rule is RuleId.MPg else (lambda f: True)
        o2 = self.pick(d2, test)
        if o2 is None or o1[1] or o2[1]:
            return None
        a = o1[0]
        b = o2[0].args[0] if rule is RuleId.MPg else o2[0]
        f = Neg(Cond(a, b)) if rule is RuleId.MPg else Cond(a, b)
        r1 = d1.conclusion - [o1]
        r2 = d2.conclusion - [o2]
        d1 = weaken(d1, r2.items + ((f, True),))
        d2 = weaken(d2, r1.items + ((f, True),))
        return self.apply(rule, [(f, False)], r1 + r2, [d1, d2])

    def _mpg(self, budget):
        return self._mp(RuleId.MPg, budget)

    def _mpcemg(self, budget):
        return self._mp(RuleId.MPCEMg, budget)

    # modal rules ------------------------------------------------------------

    def _box_premise(self, budget: int):
        d = self.tree(budget)
        d, b0 = self.fold(d)
        if b0 is None:
            b0 = Bot()
            d = weaken(d, [(b0, False)])
        negs = [o[0].args[0] for o in (d.conclusion - [(b0, False)]).items]
        return d, b0, negs

    def _k(self, budget):
        d, b0, negs = self._box_premise(budget)
        lits = [(Box(b0), False)] + [(Neg(Box(x)), False) for x in negs]
        return self.apply(RuleId.K, lits, self.context(), [d])

    def _k4(self, budget):
        d, b0, negs = self._box_premise(budget)
        d = weaken(d, [(Neg(Box(x)), False) for x in negs])
        lits = [(Box(b0), False)] + [(Neg(Box(x)), False) for x in negs]
        return self.apply(RuleId.K4, lits, self.context(), [d])

    def _t(self, budget):
        d = self.tree(budget)
        o = self.pick(d, lambda f: type(f) is Neg)
        if o is None:
            o = (Neg(self.formula()), False)
            d = weaken(d, [o])
        a = o[0].args[0]
        d = weaken(d, [(Neg(Box(a)), False)])
        return self.apply(RuleId.T, [(Neg(Box(a)), False)], d.conclusion - [o, (Neg(Box(a)), False)], [d])


def random_provable(seed: int, logic: "LogicId | str", size_budget: int = 20
                    ) -> tuple[Sequent, Derivation]:
    """Build a random derivation of roughly ``size_budget`` rule applications.

    Construction is forward: each step picks a rule and produces proofs of
    suitable premises first, so the result is a derivation by construction.
    The same seed always gives the same derivation.
    """
    logic = LogicId.parse(logic)
    gen = _Gen(random.Random(seed), logic)
    d = gen.tree(size_budget)
    return d.conclusion.erase(), d


def exhaustive_corpus(max_size: int = 9, names: Sequence[str] = VARS, modal: type = Cond
                      ) -> list[Formula]:
    """All formulas up to ``max_size``, one representative per variable renaming.

    Provability and countermodel existence are invariant under renaming
    variables, so representatives suffice for verdict comparisons.
    """
    seen: set[Formula] = set()
    out: list[Formula] = []
    for f in enumerate_formulas(max_size, names, modal):
        g = canonical_renaming(f, names)
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def random_corpus(seed: int, count: int, max_size: int, modal: type = Cond) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, rng.randint(1, max_size), VARS, modal) for _ in range(count)]


def nested_cem(depth: int, width: int) -> Formula:
    """Right-nested disjunctions of ``width`` conditionals with antecedent ``a``.

    Level k is the disjunction over j of ``a => (p_j | H)`` where ``H`` is
    level k-1 and the ``p_j`` are distinct positive formulas over b, c; level
    0 is ``c``.  The formula has conditional depth ``depth`` and no
    complementary pair ever meets, so it is unprovable in CKCEM.
    """
    b, c = Var("b"), Var("c")
    atoms: list[Formula] = [b, c]
    while len(atoms) < width:
        atoms.append(And(atoms[len(atoms) - 2], atoms[len(atoms) - 1]))
    h: Formula = c
    a = Var("a")
    for _ in range(depth):
        lits = [Cond(a, disj(atoms[j], h)) for j in range(width)]
        g = lits[0]
        for lit in lits[1:]:
            g = disj(g, lit)
        h = g
    return h
