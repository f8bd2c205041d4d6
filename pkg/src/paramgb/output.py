"""Text, JSON and DOT renderings of Gröbner systems."""

from __future__ import annotations

import json

from .disptree import Case, GroebnerSystem, Vertex, format_lpp, iter_vertices
from .polycore import VariableContext, format_monomial, order_from_name
from .specs import Specification

__all__ = ["system_text", "system_json", "system_from_json", "tree_dot", "tree_text",
           "label_str", "poly_list"]


def label_str(label) -> str:
    return "[" + ",".join(str(b) for b in label) + "]"


def poly_list(polys) -> str:
    return "[" + ", ".join(str(p) for p in polys) + "]"


def system_text(system: GroebnerSystem) -> str:
    ctx = system.ctx
    lines = [f"discriminant: {poly_list(system.discriminant)}",
             f"generic case: {label_str(system.generic_label)}",
             f"cases: {len(system.cases)}"]
    for c in system.cases:
        lines.append(f"T{c.label_str()} = ({poly_list(c.basis)}, {c.sigma})")
        lines.append(f"    lpp = {format_lpp(c.lpp, ctx)}")
    return "\n".join(lines) + "\n"


def _case_dict(c: Case, ctx: VariableContext) -> dict:
    return {
        "label": list(c.label),
        "basis": [str(p) for p in c.basis],
        "N": [str(p) for p in c.sigma.N],
        "W": [str(p) for p in c.sigma.W],
        "lpp": [format_monomial(m, ctx.xvars) for m in c.lpp],
        "generic": c.sigma.generic,
    }


def system_json(system: GroebnerSystem, J=None, principal_j=None) -> str:
    ctx = system.ctx
    N = system.discriminant
    data = {
        "vars": list(ctx.xvars),
        "params": list(ctx.avars),
        "order_vars": str(ctx.ordx),
        "order_params": str(ctx.orda),
        "cases": [_case_dict(c, ctx) for c in system.cases],
        "discriminant": [str(p) for p in N],
        "genericLabel": list(system.generic_label),
        "principal": len(N) <= 1,
        "J": [str(p) for p in (J if J is not None else [])],
    }
    if principal_j is not None:
        data["principalJ"] = principal_j
    return json.dumps(data, indent=2)


def _parse_monomial(text: str, ctx: VariableContext):
    if text == "1":
        return (0,) * ctx.n
    return ctx.X.parse(text).lm


def system_from_json(text: str) -> GroebnerSystem:
    """Rebuild the flat case list (without the tree) from :func:`system_json` output."""
    data = json.loads(text)
    ctx = VariableContext(data["vars"], data["params"], order_from_name(data["order_vars"]),
                          order_from_name(data["order_params"]))
    R = ctx.R
    cases = []
    for c in data["cases"]:
        sigma = Specification(R, tuple(R.parse(p) for p in c["N"]), tuple(R.parse(p) for p in c["W"]),
                              bool(c.get("generic", False)))
        cases.append(Case(tuple(c["label"]), [ctx.parse(p) for p in c["basis"]], sigma,
                          tuple(_parse_monomial(m, ctx) for m in c["lpp"])))
    N = [R.parse(p) for p in data["discriminant"]]
    glabel = tuple(data["genericLabel"])
    glpp = next((c.lpp for c in cases if c.label == glabel), ())
    return GroebnerSystem(ctx, cases, N, glabel, None, glpp)


def _condition_text(cond) -> str:
    if isinstance(cond, (tuple, list)):
        return str(cond[0]) if len(cond) == 1 else poly_list(cond)
    return str(cond)


def tree_dot(system: GroebnerSystem) -> str:
    """DOT digraph: conditions at internal nodes, lpp sets at leaves."""
    ctx = system.ctx
    lines = ["digraph discussion {", "  node [fontname=\"Helvetica\"];"]
    order = sorted(iter_vertices(system.tree), key=lambda t: (len(t[0]), t[0]))
    ids = {label: f"n{i}" for i, (label, _) in enumerate(order)}
    for label, v in order:
        nid = ids[label]
        if v.terminal:
            text = f"{label_str(label)}\\n{format_lpp(v.lpp, ctx)}"
            lines.append(f"  {nid} [shape=box, label=\"{text}\"];")
        else:
            lines.append(f"  {nid} [shape=ellipse, label=\"{_condition_text(v.condition)}\"];")
    for label, v in order:
        if not v.terminal:
            for k in (0, 1):
                lines.append(f"  {ids[label]} -> {ids[label + (k,)]} [label=\"{k}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_text(system: GroebnerSystem) -> str:
    """Indented outline of the tree."""
    ctx = system.ctx
    out = []

    def walk(v: Vertex, label, depth):
        pad = "  " * depth
        if v.terminal:
            out.append(f"{pad}{label_str(label)} {format_lpp(v.lpp, ctx)}  {v.sigma}")
            return
        out.append(f"{pad}{label_str(label)} branch on {_condition_text(v.condition)}")
        walk(v.children[1], label + (1,), depth + 1)
        walk(v.children[0], label + (0,), depth + 1)

    walk(system.tree, (), 0)
    return "\n".join(out) + "\n"
