"""Rule inventory of the cut-free calculi.

Every logic shares the propositional rules (NegNeg, NegAnd, AndSplit) and
the two axiom forms; on top of that each logic has a fixed set of modal
rules (see ``LOGIC_RULES``).  Rules are read backwards: a ``RuleInstance``
records the principal occurrences, the untouched context and the premises
that would have to be derived.

Occurrences are ``(formula, marked)`` pairs.  Only conditional literals are
ever marked: MPg/MPCEMg mark their principal occurrence in both premises,
the CK-family rules drop all marks, propositional rules keep marks on the
context.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .syntax import (
    And, Bot, Box, Cond, Formula, Neg, Sequent, Var, print_formula, subformulas,
)

Occurrence = tuple[Formula, bool]


class LogicId(enum.Enum):
    K = "k"
    T = "t"
    K4 = "k4"
    CK = "ck"
    CKID = "ckid"
    CKMP = "ckmp"
    CKMPID = "ckmpid"
    CKCEM = "ckcem"
    CKCEMID = "ckcemid"
    CKMPCEM = "ckmpcem"
    CKMPCEMID = "ckmpcemid"

    @classmethod
    def parse(cls, name: "str | LogicId") -> "LogicId":
        if isinstance(name, LogicId):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown logic {name!r}") from None

    @property
    def is_modal(self) -> bool:
        """True for the box logics K, T, K4."""
        return self in (LogicId.K, LogicId.T, LogicId.K4)

    @property
    def has_id(self) -> bool:
        return self.value.endswith("id")

    @property
    def has_mp(self) -> bool:
        return "mp" in self.value

    @property
    def has_cem(self) -> bool:
        return "cem" in self.value

    def __str__(self) -> str:
        return self.name


class RuleId(enum.Enum):
    Axiom = "Axiom"
    NegBot = "NegBot"
    NegNeg = "NegNeg"
    NegAnd = "NegAnd"
    AndSplit = "AndSplit"
    K = "K"
    T = "T"
    K4 = "K4"
    CKg = "CKg"
    CKIDg = "CKIDg"
    MPg = "MPg"
    CKCEMg = "CKCEMg"
    CKCEMIDg = "CKCEMIDg"
    MPCEMg = "MPCEMg"
    # only produced by the cut-enabled search used in admissibility tests
    Cut = "Cut"

    def __str__(self) -> str:
        return self.value


PROP_RULES = frozenset({RuleId.NegNeg, RuleId.NegAnd, RuleId.AndSplit})
LEAF_RULES = frozenset({RuleId.Axiom, RuleId.NegBot})
CK_FAMILY = frozenset({RuleId.CKg, RuleId.CKIDg, RuleId.CKCEMg, RuleId.CKCEMIDg})
MP_FAMILY = frozenset({RuleId.MPg, RuleId.MPCEMg})

LOGIC_RULES: dict[LogicId, frozenset[RuleId]] = {
    LogicId.K: frozenset({RuleId.K}),
    LogicId.T: frozenset({RuleId.K, RuleId.T}),
    LogicId.K4: frozenset({RuleId.K4}),
    LogicId.CK: frozenset({RuleId.CKg}),
    LogicId.CKID: frozenset({RuleId.CKIDg}),
    LogicId.CKMP: frozenset({RuleId.CKg, RuleId.MPg}),
    LogicId.CKMPID: frozenset({RuleId.CKIDg, RuleId.MPg}),
    LogicId.CKCEM: frozenset({RuleId.CKCEMg}),
    LogicId.CKCEMID: frozenset({RuleId.CKCEMIDg}),
    LogicId.CKMPCEM: frozenset({RuleId.CKCEMg, RuleId.MPg, RuleId.MPCEMg}),
    LogicId.CKMPCEMID: frozenset({RuleId.CKCEMIDg, RuleId.MPg, RuleId.MPCEMg}),
}


def extends(weaker: LogicId, stronger: LogicId) -> bool:
    """Whether every theorem of ``weaker`` is a theorem of ``stronger``."""
    if weaker.is_modal != stronger.is_modal:
        return False
    if weaker.is_modal:
        return weaker == stronger or weaker == LogicId.K
    return all(getattr(stronger, a) for a in ("has_id", "has_mp", "has_cem") if getattr(weaker, a))


class SignatureError(ValueError):
    pass


def check_signature(formulas: Iterable[Formula], logic: LogicId) -> None:
    bad = Cond if logic.is_modal else Box
    for f in formulas:
        for g in subformulas(f):
            if isinstance(g, bad):
                raise SignatureError(
                    f"{print_formula(f)} uses {'=>' if bad is Cond else '[]'}, "
                    f"which is outside the signature of {logic}")


# --------------------------------------------------------------------------
# marked sequents

def _okey(o: Occurrence):
    return (o[0].key, o[1])


class MarkedSequent:
    """A multiset of occurrences ``(formula, marked)``."""

    __slots__ = ("items",)

    def __init__(self, occurrences: Iterable[Occurrence] = ()):
        items = tuple(sorted(occurrences, key=_okey))
        for f, m in items:
            if m and not _is_cond_lit(f):
                raise ValueError(f"only conditional literals may be marked: {f}")
        self.items: tuple[Occurrence, ...] = items

    @classmethod
    def unmarked(cls, formulas: Iterable[Formula]) -> "MarkedSequent":
        return cls((f, False) for f in formulas)

    @classmethod
    def from_sequent(cls, s: Sequent) -> "MarkedSequent":
        return cls.unmarked(s.items)

    def erase(self) -> Sequent:
        return Sequent(f for f, _ in self.items)

    def formulas(self) -> list[Formula]:
        return [f for f, _ in self.items]

    def __add__(self, other: "MarkedSequent | Iterable[Occurrence]") -> "MarkedSequent":
        extra = other.items if isinstance(other, MarkedSequent) else tuple(other)
        return MarkedSequent(self.items + extra)

    def __sub__(self, other: "MarkedSequent | Iterable[Occurrence]") -> "MarkedSequent":
        rest = Counter(self.items)
        rest.subtract(other.items if isinstance(other, MarkedSequent) else other)
        if any(v < 0 for v in rest.values()):
            raise ValueError("not a sub-multiset")
        return MarkedSequent(rest.elements())

    def __iter__(self) -> Iterator[Occurrence]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MarkedSequent) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        return f"MarkedSequent({str(self)!r})"

    def __str__(self) -> str:
        return ", ".join(print_formula(f) + ("*" if m else "") for f, m in self.items)


def _is_cond_lit(f: Formula) -> bool:
    return isinstance(f, Cond) or (isinstance(f, Neg) and isinstance(f.args[0], Cond))


def _as_marked(s: "MarkedSequent | Sequent") -> MarkedSequent:
    return MarkedSequent.from_sequent(s) if isinstance(s, Sequent) else s


# --------------------------------------------------------------------------
# premise schemas, shared with the prover

def equivalence_premises(a0: Formula, others: Sequence[Formula]) -> list[tuple[Formula, ...]]:
    """The sequents ``~A0, Ai`` and ``~Ai, A0`` for every ``Ai`` in ``others``."""
    out = []
    for ai in others:
        out.append((Neg(a0), ai))
        out.append((Neg(ai), a0))
    return out


def ck_premises(pivot: Formula, negatives: Sequence[Formula], with_id: bool
                ) -> list[tuple[Formula, ...]]:
    """Premises of CKg/CKIDg: ``pivot`` is ``A0 => B0``, ``negatives`` are ``~(Ai => Bi)``."""
    a0, b0 = pivot.args
    conds = [n.args[0] for n in negatives]
    main = tuple(Neg(c.args[1]) for c in conds) + (b0,)
    if with_id:
        main = (Neg(a0),) + main
    return equivalence_premises(a0, [c.args[0] for c in conds]) + [main]


def cem_premises(positives: Sequence[Formula], negatives: Sequence[Formula], with_id: bool
                 ) -> list[tuple[Formula, ...]]:
    """Premises of CKCEMg/CKCEMIDg; ``positives[0]`` is the pivot ``A0 => B0``."""
    a0 = positives[0].args[0]
    conds = list(positives[1:]) + [n.args[0] for n in negatives]
    main = tuple(p.args[1] for p in positives) + tuple(Neg(n.args[0].args[1]) for n in negatives)
    if with_id:
        main = (Neg(a0),) + main
    return equivalence_premises(a0, [c.args[0] for c in conds]) + [main]


def k_premise(pivot: Formula, negatives: Sequence[Formula]) -> tuple[Formula, ...]:
    return tuple(Neg(n.args[0].args[0]) for n in negatives) + (pivot.args[0],)


def k4_premise(pivot: Formula, negatives: Sequence[Formula]) -> tuple[Formula, ...]:
    out: list[Formula] = []
    for n in negatives:
        out += [Neg(n.args[0].args[0]), n]
    return tuple(out) + (pivot.args[0],)


# --------------------------------------------------------------------------
# rule instances

class MalformedInstance(ValueError):
    pass


@dataclass(frozen=True)
class RuleInstance:
    """One backward rule application.

    ``principal`` is ordered: for CK-family rules the positive literals come
    first (the pivot ``A0 => B0`` at index 0), followed by the negative ones;
    ``split`` is the index ``j`` of the last positive literal.  For K/K4 the
    positive box pivot comes first.
    """

    rule: RuleId
    principal: tuple[Occurrence, ...]
    context: MarkedSequent
    premises: tuple[MarkedSequent, ...]
    split: int | None = None
    cut: Formula | None = None

    @property
    def conclusion(self) -> MarkedSequent:
        return self.context + self.principal

    @classmethod
    def build(cls, rule: RuleId, principal: Sequence[Occurrence],
              context: "MarkedSequent | Iterable[Occurrence]" = (),
              split: int | None = None, cut: Formula | None = None) -> "RuleInstance":
        """Compute premises for ``rule`` applied to ``principal`` in ``context``.

        Raises ``MalformedInstance`` if the principal occurrences do not have
        the shape the rule needs.
        """
        principal = tuple(principal)
        ctx = context if isinstance(context, MarkedSequent) else MarkedSequent(context)
        fs = [f for f, _ in principal]
        if rule is RuleId.Cut:
            _need(not principal and cut is not None, "Cut has no principal, only a cut formula")
            prem = [ctx + [(cut, False)], ctx + [(Neg(cut), False)]]
        else:
            prem = _premises(rule, fs, principal, ctx, split)
            cut = None
        if rule not in CK_FAMILY:
            split = None
        return cls(rule, principal, ctx, tuple(prem), split, cut)

    def __str__(self) -> str:
        return f"{self.rule}[{', '.join(print_formula(f) for f, _ in self.principal)}]"


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise MalformedInstance(msg)


def _unmarked(fs: Iterable[Formula]) -> MarkedSequent:
    return MarkedSequent((f, False) for f in fs)


def _is_neg_of(f: Formula, kind: type) -> bool:
    return isinstance(f, Neg) and isinstance(f.args[0], kind)


def _premises(rule: RuleId, fs: list[Formula], principal: tuple[Occurrence, ...],
              ctx: MarkedSequent, split: int | None) -> list[MarkedSequent]:
    n = len(fs)
    if rule is RuleId.Axiom:
        _need(n == 2 and fs[1] == Neg(fs[0]), "Axiom needs principal A, ~A")
        return []
    if rule is RuleId.NegBot:
        _need(n == 1 and fs[0] == Neg(Bot()), "NegBot needs principal ~false")
        return []
    if rule is RuleId.NegNeg:
        _need(n == 1 and _is_neg_of(fs[0], Neg), "NegNeg needs principal ~~A")
        return [ctx + [(fs[0].args[0].args[0], False)]]
    if rule is RuleId.NegAnd:
        _need(n == 1 and _is_neg_of(fs[0], And), "NegAnd needs principal ~(A & B)")
        a, b = fs[0].args[0].args
        return [ctx + [(Neg(a), False), (Neg(b), False)]]
    if rule is RuleId.AndSplit:
        _need(n == 1 and isinstance(fs[0], And), "AndSplit needs principal A & B")
        a, b = fs[0].args
        return [ctx + [(a, False)], ctx + [(b, False)]]
    if rule in (RuleId.K, RuleId.K4):
        _need(n >= 1 and isinstance(fs[0], Box), f"{rule} needs a box pivot")
        _need(all(_is_neg_of(f, Box) for f in fs[1:]), f"{rule} needs negated boxes")
        prem = k_premise if rule is RuleId.K else k4_premise
        return [_unmarked(prem(fs[0], fs[1:]))]
    if rule is RuleId.T:
        _need(n == 1 and _is_neg_of(fs[0], Box), "T needs principal ~[]A")
        return [ctx + principal + [(Neg(fs[0].args[0].args[0]), False)]]
    if rule in (RuleId.CKg, RuleId.CKIDg):
        _need(split in (None, 0), f"{rule} has exactly one positive literal")
        _need(n >= 1 and isinstance(fs[0], Cond), f"{rule} needs a conditional pivot")
        _need(all(_is_neg_of(f, Cond) for f in fs[1:]), f"{rule} needs negated conditionals")
        return [_unmarked(p) for p in ck_premises(fs[0], fs[1:], rule is RuleId.CKIDg)]
    if rule in (RuleId.CKCEMg, RuleId.CKCEMIDg):
        _need(split is not None and 0 <= split < n, f"{rule} needs a split index")
        pos, neg = fs[:split + 1], fs[split + 1:]
        _need(all(isinstance(f, Cond) for f in pos), f"{rule}: literals up to the split are positive")
        _need(all(_is_neg_of(f, Cond) for f in neg), f"{rule}: literals after the split are negative")
        return [_unmarked(p) for p in cem_premises(pos, neg, rule is RuleId.CKCEMIDg)]
    if rule in (RuleId.MPg, RuleId.MPCEMg):
        _need(n == 1, f"{rule} has one principal formula")
        f = fs[0]
        if rule is RuleId.MPg:
            _need(_is_neg_of(f, Cond), "MPg needs principal ~(A => B)")
            a, b = f.args[0].args
            second = Neg(b)
        else:
            _need(isinstance(f, Cond), "MPCEMg needs principal A => B")
            a, b = f.args
            second = b
        mk = [(f, True)]
        return [ctx + mk + [(a, False)], ctx + mk + [(second, False)]]
    raise MalformedInstance(f"unknown rule {rule}")


# --------------------------------------------------------------------------
# axioms and enumeration

def is_axiom(s: "Sequent | MarkedSequent | Iterable[Formula]") -> bool:
    if isinstance(s, MarkedSequent):
        fs = set(s.formulas())
    else:
        fs = set(s)
    top = Neg(Bot())
    for f in fs:
        if f is top:
            return True
        if isinstance(f, Neg) and f.args[0] in fs:
            return True
    return False


def axiom_instance(s: MarkedSequent) -> RuleInstance | None:
    """A leaf instance closing ``s``, preferring the smallest principal."""
    for i, (f, m) in enumerate(s.items):
        if f == Neg(Bot()):
            return RuleInstance.build(RuleId.NegBot, [(f, m)], _drop(s, [i]))
    for i, (f, m) in enumerate(s.items):
        for j, (g, mg) in enumerate(s.items):
            if i != j and g == Neg(f):
                return RuleInstance.build(RuleId.Axiom, [(f, m), (g, mg)], _drop(s, [i, j]))
    return None


def _drop(s: MarkedSequent, idx: Iterable[int]) -> MarkedSequent:
    gone = set(idx)
    return MarkedSequent(o for i, o in enumerate(s.items) if i not in gone)


def applicable_prop(s: "MarkedSequent | Sequent") -> list[RuleInstance]:
    s = _as_marked(s)
    out = []
    for i, (f, m) in enumerate(s.items):
        if isinstance(f, And):
            rule = RuleId.AndSplit
        elif isinstance(f, Neg) and isinstance(f.args[0], Neg):
            rule = RuleId.NegNeg
        elif isinstance(f, Neg) and isinstance(f.args[0], And):
            rule = RuleId.NegAnd
        else:
            continue
        out.append(RuleInstance.build(rule, [(f, m)], _drop(s, [i])))
    return out


def _subsets(idx: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for k in range(len(idx) + 1):
        yield from combinations(idx, k)


def applicable_modal(s: "MarkedSequent | Sequent", logic: LogicId | str, *,
                     restricted: bool = True) -> Iterator[RuleInstance]:
    """Lazily enumerate the modal rule instances of ``logic`` concluding ``s``.

    Instances come ordered by premise count, then by number of selected
    literals, then lexicographically by occurrence position (``s`` is kept
    in canonical order, so this is the canonical formula order).  With
    ``restricted`` (the default) MPg/MPCEMg skip marked principals.
    """
    logic = LogicId.parse(logic)
    s = _as_marked(s)
    check_signature(s.formulas(), logic)
    cands = modal_candidates(s.items, LOGIC_RULES[logic], restricted)
    return (RuleInstance.build(rule, [s.items[i] for i in chosen], _drop(s, chosen), split)
            for rule, chosen, split in cands)


def modal_candidates(items: Sequence[Occurrence], rules: frozenset[RuleId], restricted: bool,
                     all_boxes: bool = False) -> list[tuple[RuleId, tuple[int, ...], int | None]]:
    """Positions selected by each modal instance over ``items``, in search order.

    With ``all_boxes`` the K/K4 instances always select every negated box
    (the others are weakenings of these and add nothing to proof search).
    """
    pos = [i for i, (f, _) in enumerate(items) if isinstance(f, (Box, Cond))]
    neg = [i for i, (f, _) in enumerate(items) if _is_neg_of(f, (Box, Cond))]

    # (premise count, selected count, positions, rule, split)
    cands: list[tuple[int, int, tuple[int, ...], RuleId, int | None]] = []
    if RuleId.K in rules or RuleId.K4 in rules:
        rule = RuleId.K if RuleId.K in rules else RuleId.K4
        for p in pos:
            for sub in ([tuple(neg)] if all_boxes else _subsets(neg)):
                cands.append((1, 1 + len(sub), (p,) + sub, rule, None))
    if RuleId.T in rules:
        for q in neg:
            cands.append((1, 1, (q,), RuleId.T, None))
    for rule in (RuleId.CKg, RuleId.CKIDg):
        if rule in rules:
            for p in pos:
                for sub in _subsets(neg):
                    cands.append((2 * len(sub) + 1, 1 + len(sub), (p,) + sub, rule, 0))
    for rule in (RuleId.CKCEMg, RuleId.CKCEMIDg):
        if rule in rules:
            for ps in _subsets(pos):
                if not ps:
                    continue
                for ns in _subsets(neg):
                    k = len(ps) + len(ns)
                    for pivot in ps:
                        order = (pivot,) + tuple(x for x in ps if x != pivot) + ns
                        cands.append((2 * (k - 1) + 1, k, order, rule, len(ps) - 1))
    if RuleId.MPg in rules:
        for q in neg:
            if not (restricted and items[q][1]):
                cands.append((2, 1, (q,), RuleId.MPg, None))
    if RuleId.MPCEMg in rules:
        for p in pos:
            if not (restricted and items[p][1]):
                cands.append((2, 1, (p,), RuleId.MPCEMg, None))

    cands.sort(key=lambda c: (c[0], c[1], sorted(c[2]), c[2], c[3].value))
    return [(rule, chosen, split) for _, _, chosen, rule, split in cands]


def premises(inst: RuleInstance) -> tuple[MarkedSequent, ...]:
    return inst.premises


# --------------------------------------------------------------------------
# derivations

@dataclass(frozen=True)
class Derivation:
    conclusion: MarkedSequent
    instance: RuleInstance
    children: tuple["Derivation", ...] = field(default=())

    def nodes(self) -> Iterator["Derivation"]:
        """Distinct nodes, pre-order; shared sub-derivations are visited once."""
        seen: set[int] = set()
        stack = [self]
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            yield d
            stack.extend(reversed(d.children))

    @property
    def height(self) -> int:
        memo: dict[int, int] = {}
        stack = [(self, False)]
        while stack:
            d, done = stack.pop()
            if done:
                memo[id(d)] = 1 + max((memo[id(c)] for c in d.children), default=0)
            elif id(d) not in memo:
                stack.append((d, True))
                stack.extend((c, False) for c in d.children if id(c) not in memo)
        return memo[id(self)]

    def count(self) -> int:
        return sum(1 for _ in self.nodes())


class DerivationError(ValueError):
    """First failing node of a derivation check; ``path`` lists child indices from the root."""

    def __init__(self, path: tuple[int, ...], reason: str):
        where = "root" if not path else "root/" + "/".join(map(str, path))
        super().__init__(f"{where}: {reason}")
        self.path = path
        self.reason = reason


def check_derivation(d: Derivation, logic: LogicId | str, *, restricted: bool = False,
                     allow_cut: bool = False) -> bool:
    """Return True if ``d`` is a correct derivation in ``logic``.

    Raises ``DerivationError`` naming the first bad node otherwise.
    ``restricted`` additionally enforces that MP-family rules never fire
    on a marked principal.
    """
    logic = LogicId.parse(logic)
    allowed = LOGIC_RULES[logic] | PROP_RULES | LEAF_RULES
    if allow_cut:
        allowed = allowed | {RuleId.Cut}
    stack: list[tuple[Derivation, tuple[int, ...]]] = [(d, ())]
    seen: set[int] = set()
    while stack:
        node, path = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        inst = node.instance
        if inst.rule not in allowed:
            raise DerivationError(path, f"rule {inst.rule} is not available in {logic}")
        try:
            check_signature(node.conclusion.formulas(), logic)
        except SignatureError as e:
            raise DerivationError(path, str(e)) from None
        if inst.conclusion != node.conclusion:
            raise DerivationError(path, "conclusion is not principal + context")
        try:
            expected = RuleInstance.build(inst.rule, inst.principal, inst.context, inst.split,
                                          inst.cut)
        except MalformedInstance as e:
            raise DerivationError(path, str(e)) from None
        if expected.premises != inst.premises:
            raise DerivationError(path, f"{inst.rule} premises do not match the rule schema")
        if restricted and inst.rule in MP_FAMILY and inst.principal[0][1]:
            raise DerivationError(path, f"{inst.rule} applied to a marked formula")
        if len(node.children) != len(inst.premises):
            raise DerivationError(
                path, f"{inst.rule} needs {len(inst.premises)} children, got {len(node.children)}")
        for i, (child, prem) in enumerate(zip(node.children, inst.premises)):
            if child.conclusion != prem:
                raise DerivationError(path + (i,), f"conclusion differs from premise {i} of parent")
            stack.append((child, path + (i,)))
    return True


def weaken(d: Derivation, extra: Iterable[Occurrence]) -> Derivation:
    """Add ``extra`` occurrences to the conclusion of ``d``, propagating them upwards."""
    extra = tuple(extra)
    if not extra:
        return d
    inst = d.instance
    ctx = inst.context + extra
    new = RuleInstance.build(inst.rule, inst.principal, ctx, inst.split, inst.cut)
    if inst.rule in CK_FAMILY or inst.rule in (RuleId.K, RuleId.K4):
        children = d.children
    else:
        children = tuple(weaken(c, extra) for c in d.children)
    return Derivation(new.conclusion, new, children)


# --------------------------------------------------------------------------
# propositional descendants

def _inversions(s: Sequent) -> Iterator[Sequent]:
    seen = set()
    for i, f in enumerate(s.items):
        if f in seen:
            continue
        seen.add(f)
        rest = s.items[:i] + s.items[i + 1:]
        if isinstance(f, Neg) and isinstance(f.args[0], Neg):
            yield Sequent(rest + (f.args[0].args[0],))
        elif isinstance(f, Neg) and isinstance(f.args[0], And):
            a, b = f.args[0].args
            yield Sequent(rest + (Neg(a), Neg(b)))
        elif isinstance(f, And):
            yield Sequent(rest + (f.args[0],))
            yield Sequent(rest + (f.args[1],))


def propositional_descendants(f: Formula) -> set[Sequent]:
    start = Sequent.of(f)
    out = {start}
    todo = [start]
    while todo:
        s = todo.pop()
        for t in _inversions(s):
            if t not in out:
                out.add(t)
                todo.append(t)
    return out
