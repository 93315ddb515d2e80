"""Backward proof search over the cut-free calculi.

Search discipline, shared by all strategies:

* axioms are detected eagerly;
* propositional rules are invertible, so they are applied first and without
  backtracking (non-branching ones before AndSplit);
* on a saturated sequent, modal rule instances are tried in the order given
  by ``calculus.modal_candidates`` and all premises of an instance must
  succeed.

The search works on *states*: duplicate-free canonical tuples of
occurrences.  Contraction is admissible, so this loses nothing, and it keeps
the state space finite.  Proofs found on states are replayed against the
actual multiset at the end, which reinstates duplicates as weakening
context.

Strategies differ only on saturated sequents:

``naive``
    every instance of every modal rule.  Where rules keep their principal
    formula (T, K4, MPg, MPCEMg) the search iteratively deepens on modal
    applications and prunes a branch when its state repeats an ancestor.
``marked``
    MPg/MPCEMg never fire on an occurrence they already fired on since the
    last CK-family step; marks are part of the state.
``marked_descendants``
    MPg/MPCEMg on ``~(A => B), G`` only when ``G`` contains no propositional
    descendant of ``A`` or ``~B`` (``A`` or ``B`` for MPCEMg).
``dp``
    CEM logics only: antecedent equivalences are decided stage by stage
    into an ``EquivTable``; a literal sequent is then settled by trying one
    CKCEMg instance per equivalence class.
"""

from __future__ import annotations

import enum
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .calculus import (
    CK_FAMILY, LOGIC_RULES, MP_FAMILY, Derivation, LogicId, MarkedSequent, Occurrence,
    RuleId, RuleInstance, ck_premises, cem_premises, check_signature, k4_premise,
    k_premise, modal_candidates, propositional_descendants,
)
from .syntax import TOP, And, Box, Cond, Formula, Neg, Sequent, subformulas

__all__ = [
    "Strategy", "SearchLimits", "SearchStats", "Provable", "Unprovable", "ResourceExceeded",
    "Verdict", "EquivTable", "Partition", "StrategyError",
    "prove", "prove_marked", "prove_with_cut", "build_equiv_table",
    "partition_by_antecedent", "dp_literal_step", "resolve_strategy", "random_provable",
]


class Strategy(enum.Enum):
    NAIVE = "naive"
    MARKED = "marked"
    MARKED_DESCENDANTS = "marked_descendants"
    DP = "dp"
    AUTO = "auto"

    @classmethod
    def parse(cls, name: "str | Strategy") -> "Strategy":
        if isinstance(name, Strategy):
            return name
        try:
            return cls(name.lower().replace("-", "_"))
        except ValueError:
            raise ValueError(f"unknown strategy {name!r}") from None


class StrategyError(ValueError):
    pass


def resolve_strategy(strategy: "str | Strategy", logic: LogicId) -> Strategy:
    strategy = Strategy.parse(strategy)
    cem_only = logic in (LogicId.CKCEM, LogicId.CKCEMID)
    if strategy is Strategy.AUTO:
        if cem_only:
            return Strategy.DP
        return Strategy.MARKED if logic.has_mp else Strategy.NAIVE
    if strategy is Strategy.DP and not cem_only:
        raise StrategyError(f"dp applies to CKCEM and CKCEMID only, not {logic}")
    if strategy in (Strategy.MARKED, Strategy.MARKED_DESCENDANTS) and not logic.has_mp:
        raise StrategyError(f"{strategy.value} needs a logic with MPg, not {logic}")
    return strategy


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = 10**6
    max_depth: int = 200
    timeout_ms: int | None = None

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_depth <= 0:
            raise ValueError("search limits must be positive")
        if self.timeout_ms is not None and self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    memo_hits: int = 0
    modal_applications: dict[str, int] = field(default_factory=dict)
    elapsed_us: int = 0
    iterations: int = 0

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "max_depth": self.max_depth,
            "memo_hits": self.memo_hits,
            "modal_applications": dict(sorted(self.modal_applications.items())),
            "elapsed_us": self.elapsed_us,
        }


@dataclass(frozen=True)
class Provable:
    witness: Derivation
    stats: SearchStats = field(compare=False)
    status = "provable"


@dataclass(frozen=True)
class Unprovable:
    stats: SearchStats = field(compare=False)
    status = "unprovable"


@dataclass(frozen=True)
class ResourceExceeded:
    reason: str
    stats: SearchStats = field(compare=False)
    status = "resource_exceeded"


Verdict = Provable | Unprovable | ResourceExceeded


# --------------------------------------------------------------------------
# antecedent equivalence

class EquivTable:
    """Provability of ``~A, B`` for pairs of antecedents, filled by stages."""

    def __init__(self) -> None:
        self.entries: dict[tuple[Formula, Formula], bool] = {}
        self.stages: list[int] = []
        self._proofs: dict[tuple[Formula, Formula], _Step] = {}

    def provable(self, a: Formula, b: Formula) -> bool:
        if a is b:
            return True
        return self.entries[(a, b)]

    def equivalent(self, a: Formula, b: Formula) -> bool:
        return self.provable(a, b) and self.provable(b, a)

    def __contains__(self, pair: tuple[Formula, Formula]) -> bool:
        return pair[0] is pair[1] or pair in self.entries

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Partition:
    classes: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)


def _classes(n: int, same) -> list[list[int]]:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for p in range(i + 1, n):
            if find(i) != find(p) and same(i, p):
                parent[find(p)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def partition_by_antecedent(lits: Sequence[Formula], eq: EquivTable) -> Partition:
    ants = [_literal_parts(f)[0] for f in lits]
    return Partition(tuple(tuple(c) for c in
                           _classes(len(ants), lambda i, p: eq.equivalent(ants[i], ants[p]))))


def _literal_parts(f: Formula) -> tuple[Formula, Formula, bool]:
    """(antecedent, consequent, positive?) of a conditional literal."""
    if type(f) is Cond:
        return f.args[0], f.args[1], True
    if type(f) is Neg and type(f.args[0]) is Cond:
        return f.args[0].args[0], f.args[0].args[1], False
    raise ValueError(f"not a conditional literal: {f}")


# --------------------------------------------------------------------------
# search engine

_LOOP, _IDCUT, _DEPTHCUT = 1, 2, 4
_FAILED = "failed"
_SAME_WORLD = MP_FAMILY | {RuleId.T}


class _Step:
    """A proof of a search state: rule, principal occurrences, sub-proofs."""

    __slots__ = ("rule", "principal", "split", "cut", "children")

    def __init__(self, rule: RuleId, principal: tuple[Occurrence, ...],
                 children: tuple["_Step", ...] = (), split: int | None = None,
                 cut: Formula | None = None):
        self.rule = rule
        self.principal = principal
        self.children = children
        self.split = split
        self.cut = cut


class _Budget(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _cand_key(c):
    rule, chosen, split = c
    k = len(chosen)
    if rule in MP_FAMILY:
        prem = 2
    else:
        prem = 2 * (k - 1) + 1
    return (prem, k, sorted(chosen), chosen, rule.value)


def _okey(o: Occurrence):
    return (o[0].key, o[1])


def _state(occs: Iterable[Occurrence]) -> tuple[Occurrence, ...]:
    return tuple(sorted(set(occs), key=_okey))


def _ustate(fs: Iterable[Formula]) -> tuple[Occurrence, ...]:
    return _state((f, False) for f in fs)


@lru_cache(maxsize=None)
def _descendant_sets(f: Formula) -> tuple[frozenset, ...]:
    return tuple(frozenset(d.items) for d in propositional_descendants(f))


class _Engine:
    def __init__(self, logic: LogicId, strategy: Strategy, limits: SearchLimits,
                 memo: dict | None, loop_check: bool = True,
                 cut_pool: Sequence[Formula] = (), table: EquivTable | None = None,
                 ck_maximal: bool = False):
        self.logic = logic
        self.ck_maximal = ck_maximal
        self.strategy = strategy
        self.rules = LOGIC_RULES[logic]
        self.limits = limits
        self.marks = strategy is Strategy.MARKED
        self.cut_pool = tuple(sorted(set(cut_pool), key=lambda f: f.key))
        self.deepen = bool(self.cut_pool) or logic in (LogicId.T, LogicId.K4) or (
            logic.has_mp and strategy is Strategy.NAIVE)
        self.loops = self.deepen and loop_check
        self.free = _SAME_WORLD if self.loops else frozenset()
        store = {} if memo is None else memo
        tag = (logic, strategy, loop_check, self.cut_pool, ck_maximal)
        self.memo: dict = store.setdefault(tag, {})
        if table is None:
            table = store.setdefault((logic, "equiv"), EquivTable()) if strategy is Strategy.DP \
                else EquivTable()
        self.table = table
        self.anc: set = set()
        self.cutfail: dict = {}
        self.nodes = 0
        self.deepest = 0
        self.hits = 0
        self.apps: Counter = Counter()
        self.iterations = 0
        self.deadline = None

    # -- bookkeeping -------------------------------------------------------

    def stats(self, start: float) -> SearchStats:
        return SearchStats(self.nodes, self.deepest, self.hits,
                           {r.value: c for r, c in self.apps.items()},
                           int((time.perf_counter() - start) * 1e6), self.iterations)

    def verdict(self, s: Sequent) -> Verdict:
        start = time.perf_counter()
        if self.limits.timeout_ms is not None:
            self.deadline = start + self.limits.timeout_ms / 1000
        root = MarkedSequent.from_sequent(s)
        st = _state(root.items)
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 4 * self.limits.max_depth + 2000, 20000))
        try:
            if self.strategy is Strategy.DP:
                self.fill_table(s.items)
            r = self.run(st)
        except _Budget as e:
            return ResourceExceeded(e.reason, self.stats(start))
        finally:
            sys.setrecursionlimit(old)
        if type(r) is int:
            return Unprovable(self.stats(start))
        witness = replay(r, root)
        return Provable(witness, self.stats(start))

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limits.max_nodes:
            raise _Budget("max_nodes")
        if self.deadline is not None and not self.nodes & 255 and \
                time.perf_counter() > self.deadline:
            raise _Budget("timeout")

    def run(self, st):
        if not self.deepen:
            r = self.search(st, 0, None)
            if type(r) is int and r & _DEPTHCUT:
                raise _Budget("max_depth")
            return r
        bound = 1
        while True:
            self.iterations += 1
            self.cutfail = {}
            r = self.search(st, 0, bound)
            if type(r) is not int:
                return r
            if r & _IDCUT:
                if bound >= self.limits.max_depth:
                    raise _Budget("max_depth")
                bound += 1
                continue
            if r & _DEPTHCUT:
                raise _Budget("max_depth")
            return r

    # -- core ----------------------------------------------------------------

    def search(self, st, depth: int, budget: int | None):
        self.tick()
        if depth > self.deepest:
            self.deepest = depth
        hit = self.memo.get(st)
        if hit is not None:
            self.hits += 1
            return 0 if hit is _FAILED else hit
        if self.loops and st in self.anc:
            return _LOOP
        if budget is not None and self.loops and self.cutfail.get(st, -1) >= budget:
            return _IDCUT
        step = _axiom(st)
        if step is not None:
            self.memo[st] = step
            return step
        if depth >= self.limits.max_depth:
            return _DEPTHCUT
        if self.loops:
            self.anc.add(st)
            try:
                r = self.expand(st, depth, budget)
            finally:
                self.anc.discard(st)
        else:
            r = self.expand(st, depth, budget)
        if type(r) is int:
            if r == 0:
                self.memo[st] = _FAILED
            elif r == _IDCUT and self.loops:
                self.cutfail[st] = max(self.cutfail.get(st, -1), budget)
        else:
            self.memo[st] = r
        return r

    def expand(self, st, depth: int, budget: int | None):
        prop = _prop(st)
        if prop is not None:
            rule, occ, prems = prop
            kids = []
            for p in prems:
                r = self.search(p, depth + 1, budget)
                if type(r) is int:
                    return r
                kids.append(r)
            return _Step(rule, (occ,), tuple(kids))
        if self.strategy is Strategy.DP:
            return self.dp(st, depth)
        return self.modal(st, depth, budget)

    def modal(self, st, depth: int, budget: int | None):
        if self.logic.is_modal:
            cands = self.box_candidates(st, modal_candidates(st, self.rules, False, True))
        else:
            cands = modal_candidates(st, self.rules & MP_FAMILY, self.marks)
            if any(type(f) is Cond for f, _ in st):
                cands.append(None)
        if not cands and not self.cut_pool:
            return 0
        worst = 0
        if budget is not None and budget <= 0:
            # rules that stay at the current world are bounded by the loop
            # check, so only world-changing rules and cuts use up the bound
            kept = [c for c in cands if c is not None and c[0] in self.free]
            if len(kept) < len(cands) or self.cut_pool:
                worst = _IDCUT
            if not kept:
                return worst
            cands = kept
        nxt = None if budget is None else budget - 1
        if cands and cands[-1] is None:
            ck, worst = self.ck_candidates(st, depth, nxt)
            cands = sorted(cands[:-1] + ck, key=_cand_key)
        for rule, chosen, split in cands:
            if self.strategy is Strategy.MARKED_DESCENDANTS and rule in MP_FAMILY \
                    and self.blocked(st, chosen[0]):
                continue
            self.apps[rule] += 1
            kids = []
            sub = budget if rule in self.free else nxt
            for p in self.premises(st, rule, chosen, split):
                r = self.search(p, depth + 1, sub)
                if type(r) is int:
                    worst |= r
                    break
                kids.append(r)
            else:
                return _Step(rule, tuple(st[i] for i in chosen), tuple(kids), split)
        if budget is not None and budget <= 0:
            return worst
        present = {f for f, _ in st}
        for a in self.cut_pool:
            if a in present or Neg(a) in present:
                continue
            self.apps[RuleId.Cut] += 1
            kids = []
            for p in (_state(st + ((a, False),)), _state(st + ((Neg(a), False),))):
                r = self.search(p, depth + 1, nxt)
                if type(r) is int:
                    worst |= r
                    break
                kids.append(r)
            else:
                return _Step(RuleId.Cut, (), tuple(kids), cut=a)
        return worst

    def ck_candidates(self, st, depth: int, nxt: int | None):
        """CK-family instances whose antecedent-equivalence premises can all hold.

        An instance selecting a literal whose antecedent is not equivalent to
        the pivot's fails on that literal's equivalence premise, so it is
        dropped up front.  The equivalence premises are searched once per
        pair here; the instance search then finds them in the memo.
        """
        pos = [i for i, (f, _) in enumerate(st) if type(f) is Cond]
        neg = [i for i, (f, _) in enumerate(st) if type(f) is Neg and type(f.args[0]) is Cond]
        ant = {i: _literal_parts(st[i][0])[0] for i in pos + neg}
        worst = 0
        known: dict = {}

        def holds(a, b):
            nonlocal worst
            if a is b:
                return True
            r = known.get((a, b))
            if r is None:
                r = self.search(_ustate((Neg(a), b)), depth + 1, nxt)
                if type(r) is int:
                    worst |= r
                    r = False
                else:
                    r = True
                known[(a, b)] = r
            return r

        def same(i, p):
            return holds(ant[i], ant[p]) and holds(ant[p], ant[i])

        out = []
        cem = bool(self.rules & {RuleId.CKCEMg, RuleId.CKCEMIDg})
        rule = next(r for r in self.rules if r in CK_FAMILY)
        for p in pos:
            group = [i for i in (pos if cem else []) + neg if i != p and same(p, i)]
            group.sort()
            sizes = [len(group)] if self.ck_maximal else range(len(group) + 1)
            for k in sizes:
                for sub in combinations(group, k):
                    order = (p,) + tuple(i for i in sub if type(st[i][0]) is Cond) \
                        + tuple(i for i in sub if type(st[i][0]) is Neg)
                    split = sum(1 for i in order if type(st[i][0]) is Cond) - 1
                    out.append((rule, order, split if cem else 0))
        return out, worst

    @staticmethod
    def box_candidates(st, cands):
        # T on ~[]A is a no-op once ~A is present
        present = {f for f, _ in st}
        return [c for c in cands
                if c[0] is not RuleId.T or Neg(st[c[1][0]][0].args[0].args[0]) not in present]

    def premises(self, st, rule: RuleId, chosen: tuple[int, ...], split):
        fs = [st[i][0] for i in chosen]
        if rule is RuleId.CKg or rule is RuleId.CKIDg:
            return [_ustate(p) for p in ck_premises(fs[0], fs[1:], rule is RuleId.CKIDg)]
        if rule is RuleId.CKCEMg or rule is RuleId.CKCEMIDg:
            return [_ustate(p) for p in
                    cem_premises(fs[:split + 1], fs[split + 1:], rule is RuleId.CKCEMIDg)]
        if rule is RuleId.K:
            return [_ustate(k_premise(fs[0], fs[1:]))]
        if rule is RuleId.K4:
            return [_ustate(k4_premise(fs[0], fs[1:]))]
        if rule is RuleId.T:
            return [_state(st + ((Neg(fs[0].args[0].args[0]), False),))]
        # MPg / MPCEMg
        i = chosen[0]
        f = fs[0]
        rest = st[:i] + st[i + 1:]
        if rule is RuleId.MPg:
            a, b = f.args[0].args
            second = Neg(b)
        else:
            a, b = f.args
            second = b
        principal = (f, self.marks)
        return [_state(rest + (principal, (a, False))), _state(rest + (principal, (second, False)))]

    def blocked(self, st, i: int) -> bool:
        f = st[i][0]
        if type(f) is Neg:
            a, b = f.args[0].args
            b = Neg(b)
        else:
            a, b = f.args
        gamma = {g for j, (g, _) in enumerate(st) if j != i}
        return any(d <= gamma for x in (a, b) for d in _descendant_sets(x))

    # -- dynamic programming for CKCEM / CKCEMID -----------------------------

    def fill_table(self, formulas: Iterable[Formula]) -> EquivTable:
        fs = list(formulas)
        ants = sorted({g.args[0] for f in fs for g in subformulas(f) if type(g) is Cond},
                      key=lambda f: f.key)
        m = max((f.depth for f in fs), default=0)
        table = self.table
        for stage in range(m):
            made = 0
            for a, b in product(ants, repeat=2):
                if max(a.depth, b.depth) == stage and a is not b and (a, b) not in table:
                    self.entry(a, b, 0)
                    made += 1
            table.stages.append(made)
        return table

    def entry(self, a: Formula, b: Formula, depth: int) -> bool:
        if a is b:
            return True
        hit = self.table.entries.get((a, b))
        if hit is None:
            r = self.search(_ustate((Neg(a), b)), depth, None)
            if type(r) is int and r & _DEPTHCUT:
                raise _Budget("max_depth")
            hit = type(r) is not int
            self.table.entries[(a, b)] = hit
            if hit:
                self.table._proofs[(a, b)] = r
        return hit

    def equiv_proof(self, a: Formula, b: Formula, depth: int) -> _Step:
        if a is b:
            return _axiom(_ustate((Neg(a), a)))
        # classes are merged transitively, so this pair may not be decided yet
        if not self.entry(a, b, depth):
            raise RuntimeError(f"equivalence of {a} and {b} is not transitive")
        return self.table._proofs[(a, b)]

    def dp(self, st, depth: int):
        lits = [i for i, (f, _) in enumerate(st)
                if type(f) is Cond or (type(f) is Neg and type(f.args[0]) is Cond)]
        if not any(type(st[i][0]) is Cond for i in lits):
            return 0
        parts = [_literal_parts(st[i][0]) for i in lits]

        def same(i, p):
            a, b = parts[i][0], parts[p][0]
            return self.entry(a, b, depth + 1) and self.entry(b, a, depth + 1)

        with_id = self.logic is LogicId.CKCEMID
        rule = RuleId.CKCEMIDg if with_id else RuleId.CKCEMg
        for cls in _classes(len(lits), same):
            pos = [lits[k] for k in cls if parts[k][2]]
            if not pos:
                continue
            neg = [lits[k] for k in cls if not parts[k][2]]
            chosen = tuple(pos + neg)
            fs = [st[i][0] for i in chosen]
            split = len(pos) - 1
            self.apps[rule] += 1
            prems = cem_premises(fs[:split + 1], fs[split + 1:], with_id)
            r = self.search(_ustate(prems[-1]), depth + 1, None)
            if type(r) is int:
                if r:
                    return r
                continue
            a0 = fs[0].args[0]
            kids = []
            for k in range(0, len(prems) - 1, 2):
                ai = prems[k][1]
                kids.append(self.equiv_proof(a0, ai, depth + 1))
                kids.append(self.equiv_proof(ai, a0, depth + 1))
            kids.append(r)
            return _Step(rule, tuple(st[i] for i in chosen), tuple(kids), split)
        return 0


def _axiom(st) -> _Step | None:
    present = {}
    for occ in st:
        present.setdefault(occ[0], occ)
    for occ in st:
        f = occ[0]
        if f is TOP:
            return _Step(RuleId.NegBot, (occ,))
    for occ in st:
        f = occ[0]
        if type(f) is Neg:
            pos = present.get(f.args[0])
            if pos is not None:
                return _Step(RuleId.Axiom, (pos, occ))
    return None


def _prop(st):
    split_at = None
    for i, occ in enumerate(st):
        f = occ[0]
        t = type(f)
        if t is Neg:
            g = f.args[0]
            tg = type(g)
            if tg is Neg:
                rest = st[:i] + st[i + 1:]
                return RuleId.NegNeg, occ, [_state(rest + ((g.args[0], False),))]
            if tg is And:
                rest = st[:i] + st[i + 1:]
                a, b = g.args
                return RuleId.NegAnd, occ, [_state(rest + ((Neg(a), False), (Neg(b), False)))]
        elif t is And and split_at is None:
            split_at = i
    if split_at is None:
        return None
    occ = st[split_at]
    rest = st[:split_at] + st[split_at + 1:]
    a, b = occ[0].args
    return RuleId.AndSplit, occ, [_state(rest + ((a, False),)), _state(rest + ((b, False),))]


def replay(step: _Step, m: MarkedSequent, _seen: dict | None = None) -> Derivation:
    """Turn a proof of a search state into a derivation of the multiset ``m``.

    ``m`` may contain extra occurrences (duplicates, or marks the search did
    not track); they end up in the weakening context.  Sub-proofs reached
    twice with the same conclusion are shared, so the result is a DAG.
    """
    seen = {} if _seen is None else _seen
    key = (id(step), m)
    d = seen.get(key)
    if d is not None:
        return d
    items = list(m.items)
    used: set[int] = set()
    chosen = []
    for occ in step.principal:
        j = next((j for j, o in enumerate(items) if j not in used and o == occ), None)
        if j is None:  # search ran mark-free; take whichever copy exists, unmarked first
            j = next(j for j, o in enumerate(items) if j not in used and o[0] is occ[0])
        used.add(j)
        chosen.append(items[j])
    ctx = MarkedSequent(o for j, o in enumerate(items) if j not in used)
    inst = RuleInstance.build(step.rule, chosen, ctx, step.split, step.cut)
    kids = tuple(replay(c, p, seen) for c, p in zip(step.children, inst.premises))
    d = seen[key] = Derivation(inst.conclusion, inst, kids)
    return d


# --------------------------------------------------------------------------
# public entry points

def _as_sequent(s) -> Sequent:
    if isinstance(s, Sequent):
        return s
    if isinstance(s, MarkedSequent):
        return s.erase()
    if isinstance(s, Formula):
        return Sequent.of(s)
    return Sequent(s)


def prove(s, logic: "LogicId | str", strategy: "Strategy | str" = "auto",
          limits: SearchLimits | None = None, *, memo: dict | None = None,
          loop_check: bool = True, ck_maximal: bool = False) -> Verdict:
    """Decide ``s`` in the cut-free calculus of ``logic``.

    ``memo`` may be shared between calls to reuse verdicts of sub-sequents;
    it is partitioned internally by logic and strategy.  ``loop_check=False``
    turns off repetition pruning for the deepening strategies, which makes
    search on MP logics non-terminating (useful only to demonstrate why
    marks are needed).  ``ck_maximal`` is an opt-in heuristic: CK-family
    rules only select, per pivot, every literal with an equivalent
    antecedent.
    """
    logic = LogicId.parse(logic)
    s = _as_sequent(s)
    check_signature(s.items, logic)
    strat = resolve_strategy(strategy, logic)
    engine = _Engine(logic, strat, limits or SearchLimits(), memo, loop_check,
                     ck_maximal=ck_maximal)
    return engine.verdict(s)


def prove_marked(s, logic: "LogicId | str", variant: str = "mp0",
                 limits: SearchLimits | None = None, *, memo: dict | None = None) -> Verdict:
    logic = LogicId.parse(logic)
    if not logic.has_mp:
        raise StrategyError(f"{logic} has no MPg rule")
    strat = {"mp0": Strategy.MARKED, "mp1": Strategy.MARKED_DESCENDANTS}.get(variant)
    if strat is None:
        raise ValueError(f"variant must be mp0 or mp1, not {variant!r}")
    return prove(s, logic, strat, limits, memo=memo)


def prove_with_cut(s, logic: "LogicId | str", cut_pool: Iterable[Formula] | None = None,
                   limits: SearchLimits | None = None, *, memo: dict | None = None) -> Verdict:
    """Naive search with an extra context-sharing cut ``G, A  G, ~A / G`` on pool formulas.

    The pool defaults to the subformulas of ``s``.  Witnesses contain
    ``Cut`` nodes and pass ``check_derivation(..., allow_cut=True)``.
    """
    logic = LogicId.parse(logic)
    s = _as_sequent(s)
    check_signature(s.items, logic)
    if cut_pool is None:
        cut_pool = set().union(*(subformulas(f) for f in s.items)) if s.items else set()
    pool = list(cut_pool)
    check_signature(pool, logic)
    engine = _Engine(logic, Strategy.NAIVE, limits or SearchLimits(), memo, True, pool)
    return engine.verdict(s)


def build_equiv_table(s, logic: "LogicId | str", limits: SearchLimits | None = None, *,
                      memo: dict | None = None) -> EquivTable:
    """Decide ``~A, B`` for all antecedent subformulas of ``s``, one nesting level per stage."""
    logic = LogicId.parse(logic)
    if logic not in (LogicId.CKCEM, LogicId.CKCEMID):
        raise StrategyError(f"equivalence tables are built for CKCEM/CKCEMID, not {logic}")
    s = _as_sequent(s)
    check_signature(s.items, logic)
    engine = _Engine(logic, Strategy.DP, limits or SearchLimits(), memo, table=EquivTable())
    try:
        return engine.fill_table(s.items)
    except _Budget as e:
        raise ResourceError(e.reason) from None


class ResourceError(RuntimeError):
    """A search budget ran out inside a helper that has no verdict to return."""


def dp_literal_step(lits: Sequence[Formula], eq: EquivTable, logic: "LogicId | str",
                    limits: SearchLimits | None = None, *, memo: dict | None = None) -> bool:
    """Whether the sequent of conditional literals ``lits`` is provable.

    Only the partition into antecedent-equivalence classes is consulted: the
    sequent is provable iff some class containing a positive literal has a
    provable consequent sequent.  Missing table entries are computed on
    demand and added to ``eq``.
    """
    logic = LogicId.parse(logic)
    if logic not in (LogicId.CKCEM, LogicId.CKCEMID):
        raise StrategyError(f"dp_literal_step applies to CKCEM/CKCEMID, not {logic}")
    for f in lits:
        _literal_parts(f)
    engine = _Engine(logic, Strategy.DP, limits or SearchLimits(), memo, table=eq)
    try:
        r = engine.dp(_ustate(lits), 0)
    except _Budget as e:
        raise ResourceError(e.reason) from None
    if type(r) is int and r:
        raise ResourceError("max_depth")
    return type(r) is not int


from .generate import random_provable  # noqa: E402
