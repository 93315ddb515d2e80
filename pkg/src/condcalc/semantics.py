"""Finite models for the conditional and modal logics, used as a test oracle.

Sets of worlds are bitmasks: world ``w`` is bit ``1 << w``.  Selection
functions are stored extensionally on every subset of the (at most three)
worlds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from .calculus import LogicId, check_signature
from .syntax import And, Bot, Box, Cond, Formula, Neg, Var, subformulas, variables

__all__ = [
    "ConditionalModel", "KripkeModel", "FrameClass", "eval", "extension", "countermodel",
    "is_prop_tautology", "model_to_json", "model_from_json", "frame_class",
]


@dataclass(frozen=True)
class FrameClass:
    id: bool = False
    mp: bool = False
    cem: bool = False
    reflexive: bool = False
    transitive: bool = False


def frame_class(logic: "LogicId | str") -> FrameClass:
    logic = LogicId.parse(logic)
    if logic.is_modal:
        return FrameClass(reflexive=logic is LogicId.T, transitive=logic is LogicId.K4)
    return FrameClass(id=logic.has_id, mp=logic.has_mp, cem=logic.has_cem)


def _members(mask: int) -> list[int]:
    return [w for w in range(mask.bit_length()) if mask >> w & 1]


def _selection_ok(w: int, x: int, s: int, fc: FrameClass) -> bool:
    if fc.id and s & ~x:
        return False
    if fc.mp and x >> w & 1 and not s >> w & 1:
        return False
    if fc.cem and s & (s - 1):
        return False
    return True


@dataclass(frozen=True)
class ConditionalModel:
    """Selection-function model: ``selection[(w, X)]`` is the set picked at ``w`` for ``X``."""

    worlds: int
    valuation: tuple[frozenset[str], ...]
    selection: dict[tuple[int, int], int] = field(hash=False)
    frame: FrameClass = FrameClass()

    def __post_init__(self):
        if len(self.valuation) != self.worlds:
            raise ValueError("one valuation entry per world")
        full = (1 << self.worlds) - 1
        for w in range(self.worlds):
            for x in range(full + 1):
                s = self.selection.get((w, x))
                if s is None or s & ~full:
                    raise ValueError(f"selection undefined or out of range at ({w}, {x})")

    def frame_ok(self) -> bool:
        return all(_selection_ok(w, x, s, self.frame) for (w, x), s in self.selection.items())


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    valuation: tuple[frozenset[str], ...]
    relation: frozenset[tuple[int, int]]
    frame: FrameClass = FrameClass()

    def __post_init__(self):
        if len(self.valuation) != self.worlds:
            raise ValueError("one valuation entry per world")

    def successors(self, w: int) -> int:
        return sum(1 << v for u, v in self.relation if u == w)

    def frame_ok(self) -> bool:
        return _relation_ok(self.relation, self.worlds, self.frame)


def _relation_ok(rel: frozenset, n: int, fc: FrameClass) -> bool:
    if fc.reflexive and any((w, w) not in rel for w in range(n)):
        return False
    if fc.transitive:
        for u, v in rel:
            for v2, w in rel:
                if v == v2 and (u, w) not in rel:
                    return False
    return True


Model = ConditionalModel | KripkeModel


def extension(model: Model, f: Formula, _cache: dict | None = None) -> int:
    """The set of worlds where ``f`` holds, as a bitmask."""
    cache = {} if _cache is None else _cache
    hit = cache.get(f)
    if hit is not None:
        return hit
    full = (1 << model.worlds) - 1
    t = type(f)
    if t is Bot:
        r = 0
    elif t is Var:
        r = sum(1 << w for w in range(model.worlds) if f.args[0] in model.valuation[w])
    elif t is Neg:
        r = full & ~extension(model, f.args[0], cache)
    elif t is And:
        r = extension(model, f.args[0], cache) & extension(model, f.args[1], cache)
    elif t is Box:
        if not isinstance(model, KripkeModel):
            raise ValueError("[] needs a Kripke model")
        a = extension(model, f.args[0], cache)
        r = sum(1 << w for w in range(model.worlds) if model.successors(w) & ~a == 0)
    elif t is Cond:
        if not isinstance(model, ConditionalModel):
            raise ValueError("=> needs a selection-function model")
        x = extension(model, f.args[0], cache)
        b = extension(model, f.args[1], cache)
        r = sum(1 << w for w in range(model.worlds) if model.selection[(w, x)] & ~b == 0)
    else:
        raise TypeError(f"not a formula: {f!r}")
    cache[f] = r
    return r


def eval(model: Model, world: int, f: Formula) -> bool:  # noqa: A001 - the oracle's name
    if not 0 <= world < model.worlds:
        raise ValueError(f"no world {world}")
    return bool(extension(model, f) >> world & 1)


def is_prop_tautology(f: Formula) -> bool:
    subs = subformulas(f)
    if any(isinstance(g, (Box, Cond)) for g in subs):
        raise ValueError("truth tables apply to propositional formulas only")
    names = sorted(variables(f))
    n = 1 << len(names)
    # one world per valuation; the formula is a tautology iff it holds everywhere
    val = tuple(frozenset(x for i, x in enumerate(names) if row >> i & 1) for row in range(n))
    model = KripkeModel(n, val, frozenset())
    return extension(model, f) == (1 << n) - 1


# --------------------------------------------------------------------------
# countermodel search

def _valuations(names: list[str], n: int) -> Iterator[tuple[frozenset[str], ...]]:
    rows = [frozenset(x for i, x in enumerate(names) if r >> i & 1) for r in range(1 << len(names))]
    # worlds other than 0 are interchangeable: keep their rows non-decreasing
    for first in range(len(rows)):
        for rest in product(range(len(rows)), repeat=n - 1):
            if all(rest[i] <= rest[i + 1] for i in range(len(rest) - 1)):
                yield (rows[first],) + tuple(rows[r] for r in rest)


def _under_modal(f: Formula) -> set[Formula]:
    out: set[Formula] = set()
    stack = [(f, False)]
    while stack:
        g, under = stack.pop()
        if under:
            if g in out:
                continue
            out.add(g)
        if type(g) is not Var:
            inner = under or type(g) in (Box, Cond)
            stack.extend((a, inner) for a in g.args)
    return out


def countermodel(f: Formula, logic: "LogicId | str", max_worlds: int = 3
                 ) -> tuple[Model, int] | None:
    """A model of the logic's frame class falsifying ``f`` at world 0, or None.

    The search is exhaustive over 1..``max_worlds`` worlds, so None means no
    countermodel of that size exists, which is not a proof of validity.
    """
    logic = LogicId.parse(logic)
    check_signature([f], logic)
    if max_worlds < 1:
        raise ValueError("max_worlds must be positive")
    fc = frame_class(logic)
    for n in range(1, max_worlds + 1):
        found = (_kripke_search if logic.is_modal else _selection_search)(f, n, fc)
        if found is not None:
            assert not eval(found, 0, f), "countermodel search returned a model of f"
            return found, 0
    return None


def _kripke_search(f: Formula, n: int, fc: FrameClass) -> KripkeModel | None:
    names = sorted(variables(f))
    pairs = [(u, v) for u in range(n) for v in range(n)]
    rels = []
    for bits in range(1 << len(pairs)):
        rel = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
        if _relation_ok(rel, n, fc):
            rels.append(rel)
    for val in _valuations(names, n):
        for rel in rels:
            m = KripkeModel(n, val, rel, fc)
            if not extension(m, f) & 1:
                return m
    return None


def _selection_search(f: Formula, n: int, fc: FrameClass) -> ConditionalModel | None:
    names = sorted(variables(f))
    full = (1 << n) - 1
    subs = sorted(subformulas(f), key=lambda g: g.key)
    everywhere = _under_modal(f)

    def candidates(w: int, x: int) -> tuple[int, ...]:
        return tuple(s for s in range(full + 1) if _selection_ok(w, x, s, fc))

    for val in _valuations(names, n):
        ext: dict[Formula, int] = {}
        for g in subs:
            if type(g) is Var:
                ext[g] = sum(1 << w for w in range(n) if g.args[0] in val[w])
        # Selections are refined lazily: each (w, X) maps to the set of
        # admissible values still consistent with the choices made so far.
        sel = _refine(subs, 0, ext, {}, n, full, everywhere, candidates)
        if sel is not None:
            table = {}
            for w in range(n):
                for x in range(full + 1):
                    c = sel.get((w, x))
                    table[(w, x)] = min(c) if c else (1 << w) & x
            return ConditionalModel(n, val, table, fc)
    return None


def _refine(subs, i, ext, sel, n, full, everywhere, candidates):
    while i < len(subs):
        g = subs[i]
        t = type(g)
        if t is Bot:
            ext[g] = 0
        elif t is Neg:
            ext[g] = full & ~ext[g.args[0]]
        elif t is And:
            ext[g] = ext[g.args[0]] & ext[g.args[1]]
        elif t is Cond:
            break
        i += 1
    else:
        return sel if not ext[subs[-1]] & 1 else None
    g = subs[i]
    x = ext[g.args[0]]
    b = ext[g.args[1]]
    worlds = range(n) if g in everywhere else (0,)
    return _branch(subs, i, g, x, b, list(worlds), 0, ext, sel, n, full, everywhere, candidates)


def _branch(subs, i, g, x, b, worlds, acc, ext, sel, n, full, everywhere, candidates):
    if not worlds:
        ext = dict(ext)
        ext[g] = acc
        return _refine(subs, i + 1, ext, sel, n, full, everywhere, candidates)
    w = worlds[0]
    cur = sel.get((w, x))
    if cur is None:
        cur = candidates(w, x)
    inside = tuple(s for s in cur if s & ~b == 0)
    outside = tuple(s for s in cur if s & ~b)
    for part, holds in ((outside, False), (inside, True)):
        if not part:
            continue
        nsel = dict(sel)
        nsel[(w, x)] = part
        r = _branch(subs, i, g, x, b, worlds[1:], acc | (holds << w), ext, nsel, n, full,
                    everywhere, candidates)
        if r is not None:
            return r
    return None


# --------------------------------------------------------------------------
# serialization

def model_to_json(model: Model, world: int = 0) -> dict:
    out: dict = {
        "worlds": model.worlds,
        "valuation": {str(w): sorted(model.valuation[w]) for w in range(model.worlds)},
    }
    if isinstance(model, ConditionalModel):
        out["selection"] = [
            {"world": w, "set": _members(x), "selected": _members(s)}
            for (w, x), s in sorted(model.selection.items())
        ]
    else:
        out["relation"] = sorted([u, v] for u, v in model.relation)
    out["frame"] = [k for k, v in vars(model.frame).items() if v]
    out["falsified_at"] = world
    return out


def model_from_json(data: dict) -> tuple[Model, int]:
    n = int(data["worlds"])
    val = tuple(frozenset(data["valuation"].get(str(w), ())) for w in range(n))
    fc = FrameClass(**{k: True for k in data.get("frame", ())})
    if "selection" in data:
        table = {(e["world"], sum(1 << v for v in e["set"])): sum(1 << v for v in e["selected"])
                 for e in data["selection"]}
        model: Model = ConditionalModel(n, val, table, fc)
    else:
        model = KripkeModel(n, val, frozenset((u, v) for u, v in data["relation"]), fc)
    return model, int(data.get("falsified_at", 0))


def dumps(model: Model, world: int = 0) -> str:
    return json.dumps(model_to_json(model, world), sort_keys=True)
