"""Derivations as JSON trees, bussproofs LaTeX and indented text."""

from __future__ import annotations

from typing import Any

from .calculus import CK_FAMILY, Derivation, MarkedSequent, MalformedInstance, RuleId, RuleInstance
from .syntax import ParseError, is_conditional_literal, parse_formula, print_formula


class SchemaError(ValueError):
    """The JSON does not describe a derivation tree."""


def _occ_strings(items) -> list[str]:
    return [print_formula(f) for f, _ in items]


def derivation_to_json(d: Derivation) -> dict:
    inst = d.instance
    items = d.conclusion.items
    pivot: dict | None = None
    if inst.rule in CK_FAMILY:
        pivot = {"split": inst.split}
    elif inst.rule is RuleId.Cut:
        pivot = {"cut": print_formula(inst.cut)}
    return {
        "sequent": _occ_strings(items),
        "marked": [i for i, (_, m) in enumerate(items) if m],
        "rule": inst.rule.value,
        "pivot": pivot,
        "principal": _occ_strings(inst.principal),
        "principal_marked": [i for i, (_, m) in enumerate(inst.principal) if m],
        "children": [derivation_to_json(c) for c in d.children],
    }


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise SchemaError(msg)


def _formulas(node: dict, key: str) -> list:
    val = node.get(key)
    _expect(isinstance(val, list) and all(isinstance(x, str) for x in val),
            f"'{key}' must be a list of formula strings")
    try:
        return [parse_formula(x) for x in val]
    except ParseError as e:
        raise SchemaError(f"bad formula in '{key}': {e}") from None


def _marks(node: dict, key: str, n: int) -> set[int]:
    val = node.get(key, [])
    _expect(isinstance(val, list) and all(isinstance(i, int) and 0 <= i < n for i in val),
            f"'{key}' must list indices below {n}")
    return set(val)


def derivation_from_json(node: Any) -> Derivation:
    """Rebuild a derivation; raises SchemaError on structural problems.

    Rule shape errors (a principal that is not in the sequent, premises that
    do not match) are left for ``check_derivation`` wherever possible, so a
    wrong proof is reported as wrong rather than as unreadable.
    """
    _expect(isinstance(node, dict), "derivation node must be an object")
    seq = _formulas(node, "sequent")
    marked = _marks(node, "marked", len(seq))
    try:
        conclusion = MarkedSequent((f, i in marked) for i, f in enumerate(seq))
    except ValueError as e:
        raise SchemaError(str(e)) from None
    try:
        rule = RuleId(node.get("rule"))
    except ValueError:
        raise SchemaError(f"unknown rule {node.get('rule')!r}") from None
    principal_fs = _formulas(node, "principal")
    pmarked = _marks(node, "principal_marked", len(principal_fs))
    principal = [(f, i in pmarked) for i, f in enumerate(principal_fs)]
    _expect(all(is_conditional_literal(f) or not m for f, m in principal),
            "only conditional literals may be marked")
    pivot = node.get("pivot")
    _expect(pivot is None or isinstance(pivot, dict), "'pivot' must be an object or null")
    split = cut = None
    if pivot:
        split = pivot.get("split")
        _expect(split is None or isinstance(split, int), "'pivot.split' must be an integer")
        if "cut" in pivot:
            try:
                cut = parse_formula(pivot["cut"])
            except (ParseError, TypeError) as e:
                raise SchemaError(f"bad cut formula: {e}") from None
    kids = node.get("children")
    _expect(isinstance(kids, list), "'children' must be a list")
    children = tuple(derivation_from_json(c) for c in kids)
    try:
        context = conclusion - principal
    except ValueError:
        context = conclusion
    try:
        inst = RuleInstance.build(rule, principal, context, split, cut)
    except MalformedInstance:
        # keep the node as written; check_derivation names the problem
        inst = RuleInstance(rule, tuple(principal), context, (), split, cut)
    return Derivation(conclusion, inst, children)


# --------------------------------------------------------------------------
# LaTeX

_INFER = {1: "UnaryInfC", 2: "BinaryInfC", 3: "TrinaryInfC", 4: "QuaternaryInfC",
          5: "QuinaryInfC"}


def _latex_sequent(s: MarkedSequent) -> str:
    parts = []
    for f, m in s.items:
        t = print_formula(f, "latex")
        parts.append(t + r"^{\bullet}" if m else t)
    return "$" + (", ".join(parts) if parts else r"\emptyset") + "$"


def _latex_lines(d: Derivation, out: list[str], extra: list[Derivation]) -> None:
    inst = d.instance
    kids = list(d.children)
    if len(kids) > 5:
        # CK-family rules with many equivalence premises: show the main
        # premise inline and the equivalences as separate trees
        extra.extend(kids[:-1])
        _latex_lines(kids[-1], out, extra)
        out.append(r"\RightLabel{\scriptsize " + inst.rule.value + " (+%d)}" % (len(kids) - 1))
        out.append(r"\UnaryInfC{" + _latex_sequent(d.conclusion) + "}")
        return
    for c in kids:
        _latex_lines(c, out, extra)
    if not kids:
        out.append(r"\AxiomC{}")
    out.append(r"\RightLabel{\scriptsize " + inst.rule.value + "}")
    out.append("\\" + _INFER[max(1, len(kids))] + "{" + _latex_sequent(d.conclusion) + "}")


def derivation_to_latex(d: Derivation) -> str:
    """bussproofs source; needs ``\\usepackage{bussproofs}``."""
    blocks = []
    todo = [d]
    while todo:
        cur = todo.pop(0)
        lines: list[str] = []
        _latex_lines(cur, lines, todo)
        blocks.append("\\begin{prooftree}\n" + "\n".join(lines) + "\n\\end{prooftree}")
    return "\n".join(blocks) + "\n"


# --------------------------------------------------------------------------
# text

def derivation_to_text(d: Derivation, indent: int = 0) -> str:
    lines: list[str] = []
    stack = [(d, indent)]
    while stack:
        node, ind = stack.pop()
        lines.append("  " * ind + f"{node.conclusion}    [{node.instance.rule.value}]")
        stack.extend((c, ind + 1) for c in reversed(node.children))
    return "\n".join(lines)
