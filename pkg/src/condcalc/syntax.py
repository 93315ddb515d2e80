"""Formulas, sequents, parsing, printing and substitution.

Formulas are hash-consed: building the same tree twice returns the same
object, so equality is identity and hashing is cheap.  The prover leans on
this heavily when it keys memo tables by sequents.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Formula", "Bot", "Var", "Neg", "And", "Box", "Cond", "TOP",
    "Sequent", "ParseError",
    "parse_formula", "parse_sequent", "print_formula", "print_sequent",
    "size", "modal_depth", "subformulas", "substitute", "compose",
    "variables", "is_conditional_literal", "disj", "imp", "iff",
]


_INTERN: dict = {}


class Formula:
    """Base class of the six core constructors.

    Instances are immutable and interned.  ``key`` is the canonical total
    order used to sort sequents: (size, constructor tag, arguments).
    """

    __slots__ = ("args", "size", "depth", "key", "__weakref__")
    tag = -1
    __match_args__: tuple = ()

    def __new__(cls, *args):
        k = (cls, args)
        f = _INTERN.get(k)
        if f is not None:
            return f
        f = object.__new__(cls)
        f.args = args
        f._init()
        _INTERN[k] = f
        return f

    def _init(self) -> None:
        subs = self.args
        self.size = 1 + sum(a.size for a in subs)
        inner = max((a.depth for a in subs), default=0)
        self.depth = inner + 1 if self.modal else inner
        self.key = (self.size, self.tag) + tuple(a.key for a in subs)

    modal = False

    def __reduce__(self):
        return (type(self), self.args)

    def __lt__(self, other: "Formula") -> bool:
        return self.key < other.key

    def __le__(self, other: "Formula") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "Formula") -> bool:
        return self.key > other.key

    def __ge__(self, other: "Formula") -> bool:
        return self.key >= other.key

    def __repr__(self) -> str:
        return f"<{print_formula(self)}>"

    def __str__(self) -> str:
        return print_formula(self)


class Bot(Formula):
    __slots__ = ()
    tag = 0


class Var(Formula):
    __slots__ = ()
    tag = 1
    __match_args__ = ("name",)

    def _init(self) -> None:
        self.size = 1
        self.depth = 0
        self.key = (1, self.tag, self.args[0])

    @property
    def name(self) -> str:
        return self.args[0]


class Neg(Formula):
    __slots__ = ()
    tag = 2
    __match_args__ = ("arg",)

    @property
    def arg(self) -> Formula:
        return self.args[0]


class And(Formula):
    __slots__ = ()
    tag = 3
    __match_args__ = ("left", "right")

    @property
    def left(self) -> Formula:
        return self.args[0]

    @property
    def right(self) -> Formula:
        return self.args[1]


class Box(Formula):
    __slots__ = ()
    tag = 4
    modal = True
    __match_args__ = ("arg",)

    @property
    def arg(self) -> Formula:
        return self.args[0]


class Cond(Formula):
    __slots__ = ()
    tag = 5
    modal = True
    __match_args__ = ("antecedent", "consequent")

    @property
    def antecedent(self) -> Formula:
        return self.args[0]

    @property
    def consequent(self) -> Formula:
        return self.args[1]


TOP = Neg(Bot())


def disj(a: Formula, b: Formula) -> Formula:
    return Neg(And(Neg(a), Neg(b)))


def imp(a: Formula, b: Formula) -> Formula:
    return Neg(And(a, Neg(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(imp(a, b), imp(b, a))


def is_conditional_literal(f: Formula) -> bool:
    return isinstance(f, Cond) or (isinstance(f, Neg) and isinstance(f.arg, Cond))


# --------------------------------------------------------------------------
# measures

def size(f: Formula) -> int:
    return f.size


def modal_depth(f: Formula) -> int:
    return f.depth


def subformulas(f: Formula) -> set[Formula]:
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if not isinstance(g, Var):
            stack.extend(g.args)
    return out


def variables(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Var)}


# --------------------------------------------------------------------------
# substitution

def substitute(f: Formula, s: Mapping[str, Formula]) -> Formula:
    """Replace every variable ``p`` in ``s`` by ``s[p]``, simultaneously."""
    if not s:
        return f
    cache: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        r = cache.get(g)
        if r is None:
            if isinstance(g, Var):
                r = s.get(g.name, g)
            elif isinstance(g, Bot):
                r = g
            else:
                r = type(g)(*(go(a) for a in g.args))
            cache[g] = r
        return r

    return go(f)


def compose(t: Mapping[str, Formula], s: Mapping[str, Formula]) -> dict[str, Formula]:
    """The substitution ``t . s``: apply ``s`` first, then ``t``."""
    out = {p: substitute(g, t) for p, g in s.items()}
    for p, g in t.items():
        out.setdefault(p, g)
    return out


# --------------------------------------------------------------------------
# sequents

class Sequent:
    """A finite multiset of formulas, read disjunctively.

    Stored as a tuple sorted by the canonical formula order, so equal
    multisets have equal ``items`` and can key dictionaries.
    """

    __slots__ = ("items",)

    def __init__(self, formulas: Iterable[Formula] = ()):
        self.items: tuple[Formula, ...] = tuple(sorted(formulas, key=_key))

    @classmethod
    def of(cls, *formulas: Formula) -> "Sequent":
        return cls(formulas)

    @property
    def counts(self) -> dict[Formula, int]:
        return dict(Counter(self.items))

    def count(self, f: Formula) -> int:
        return self.items.count(f)

    def distinct(self) -> tuple[Formula, ...]:
        return tuple(dict.fromkeys(self.items))

    def __add__(self, other: "Sequent | Iterable[Formula]") -> "Sequent":
        extra = other.items if isinstance(other, Sequent) else tuple(other)
        return Sequent(self.items + extra)

    def __sub__(self, other: "Sequent | Iterable[Formula]") -> "Sequent":
        rest = Counter(self.items)
        rest.subtract(other.items if isinstance(other, Sequent) else other)
        if any(v < 0 for v in rest.values()):
            raise ValueError("not a sub-multiset")
        return Sequent(rest.elements())

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, f: object) -> bool:
        return f in self.items

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Sequent) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        return f"Sequent({print_sequent(self)!r})"

    def __str__(self) -> str:
        return print_sequent(self)


def _key(f: Formula):
    return f.key


# --------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|=>|\[\]|[|&~(),])|(?P<ident>[a-z][a-zA-Z0-9_]*)|(?P<bad>\S))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        if m.group("op") is not None:
            toks.append(("op", m.group("op"), m.start("op")))
        else:
            toks.append(("ident", m.group("ident"), m.start("ident")))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def accept(self, op: str) -> bool:
        kind, val, _ = self.toks[self.i]
        if kind == "op" and val == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            _, val, pos = self.peek()
            raise ParseError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def formula(self) -> Formula:
        left = self.imp()
        while self.accept("<->"):
            left = iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.accept("|"):
            left = disj(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.cond()
        while self.accept("&"):
            left = And(left, self.cond())
        return left

    def cond(self) -> Formula:
        left = self.unary()
        if self.accept("=>"):
            right = self.unary()
            kind, val, pos = self.peek()
            if kind == "op" and val == "=>":
                raise ParseError("nested '=>' needs parentheses", pos)
            return Cond(left, right)
        return left

    def unary(self) -> Formula:
        if self.accept("~"):
            return Neg(self.unary())
        if self.accept("[]"):
            return Box(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "ident":
            self.i += 1
            if val == "false":
                return Bot()
            if val == "true":
                return TOP
            return Var(val)
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def done(self) -> None:
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {val!r}", pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.done()
    return f


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    if p.peek()[0] == "eof":
        return Sequent()
    out = [p.formula()]
    while p.accept(","):
        out.append(p.formula())
    p.done()
    return Sequent(out)


# --------------------------------------------------------------------------
# printing

# binding strength, loosest first
_IFF, _IMP, _OR, _AND, _COND, _UNARY = range(6)

_SYMBOLS = {
    "core": {"bot": "false", "neg": "~", "and": " & ", "box": "[]", "cond": " => "},
    "latex": {"bot": r"\bot", "neg": r"\neg ", "and": r" \wedge ", "box": r"\Box ",
              "cond": r" \Rightarrow ", "top": r"\top", "or": r" \vee ",
              "imp": r" \to ", "iff": r" \leftrightarrow "},
    "sugared": {"bot": "false", "neg": "~", "and": " & ", "box": "[]", "cond": " => ",
                "top": "true", "or": " | ", "imp": " -> ", "iff": " <-> "},
}


def _sugar(f: Formula):
    """Recognise a desugared connective; returns (kind, left, right) or None."""
    if not isinstance(f, Neg):
        if isinstance(f, And):
            l, r = f.left, f.right
            if (isinstance(l, Neg) and isinstance(l.arg, And) and isinstance(l.arg.right, Neg)
                    and l == imp(l.arg.left, l.arg.right.arg)
                    and r == imp(l.arg.right.arg, l.arg.left)):
                return ("iff", l.arg.left, l.arg.right.arg)
        return None
    g = f.arg
    if isinstance(g, Bot):
        return ("top", None, None)
    if isinstance(g, And) and isinstance(g.right, Neg):
        if isinstance(g.left, Neg):
            return ("or", g.left.arg, g.right.arg)
        return ("imp", g.left, g.right.arg)
    return None


def print_formula(f: Formula, style: str = "core") -> str:
    if style not in _SYMBOLS:
        raise ValueError(f"unknown style {style!r}")
    sym = _SYMBOLS[style]
    sugared = style != "core"

    def wrap(s: str, prec: int, ctx: int) -> str:
        return f"({s})" if prec < ctx else s

    def go(g: Formula, ctx: int) -> str:
        if sugared:
            hit = _sugar(g)
            if hit is not None:
                kind, a, b = hit
                if kind == "top":
                    return sym["top"]
                if kind == "or":
                    return wrap(go(a, _OR) + sym["or"] + go(b, _AND), _OR, ctx)
                if kind == "imp":
                    return wrap(go(a, _OR) + sym["imp"] + go(b, _IMP), _IMP, ctx)
                return wrap(go(a, _IMP) + sym["iff"] + go(b, _IMP), _IFF, ctx)
        if isinstance(g, Bot):
            return sym["bot"]
        if isinstance(g, Var):
            return g.name
        if isinstance(g, Neg):
            return sym["neg"] + go(g.arg, _UNARY)
        if isinstance(g, Box):
            return sym["box"] + go(g.arg, _UNARY)
        if isinstance(g, And):
            return wrap(go(g.left, _AND) + sym["and"] + go(g.right, _COND), _AND, ctx)
        if isinstance(g, Cond):
            return wrap(go(g.antecedent, _UNARY) + sym["cond"] + go(g.consequent, _UNARY),
                        _COND, ctx)
        raise TypeError(g)

    return go(f, _IFF)


def print_sequent(s: Iterable[Formula], style: str = "core") -> str:
    return ", ".join(print_formula(f, style) for f in s)
