"""The discussion tree.

``dispgb`` builds a binary tree whose internal vertices branch on whether
a parameter polynomial vanishes and whose terminal vertices hold a basis
that specializes to the reduced Gröbner basis on their specification.
Vertex labels are 0/1 paths from the root and are derived from position,
so subtrees can be moved (pruned, lifted) freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .idealkit import (
    FractionFreeBuchberger, buchberger_over_k, ideal_contains, intersect, quasi_radical,
)
from .polycore import Poly, VariableContext, format_monomial, normal_form, sort_polys
from .specs import (
    Specification, canspec, empty_spec, pnormalform_split, strip_w,
)

__all__ = [
    "Vertex", "Case", "GroebnerSystem", "DepthGuardError", "cond_to_branch", "condpgb",
    "build_tree", "discriminant_ideal", "compact_vert", "rebuild_tree", "dispgb",
    "iter_terminals", "generic_leaf",
]

MAX_DEPTH = 64


class DepthGuardError(RuntimeError):
    """The discussion went deeper than the configured number of decisions."""


@dataclass
class Vertex:
    basis: list
    sigma: Specification
    terminal: bool = False
    condition: object = None
    children: list | None = None
    lpp: tuple | None = None

    def child(self, k: int) -> "Vertex":
        return self.children[k]


@dataclass
class Case:
    label: tuple
    basis: list
    sigma: Specification
    lpp: tuple

    def label_str(self) -> str:
        return "[" + ",".join(str(b) for b in self.label) + "]"


@dataclass
class GroebnerSystem:
    ctx: VariableContext
    cases: list
    discriminant: list
    generic_label: tuple
    tree: Vertex
    generic_lpp: tuple
    stats: dict = field(default_factory=dict)

    def case(self, label) -> Case:
        label = tuple(label)
        for c in self.cases:
            if c.label == label:
                return c
        raise KeyError(label)

    def cases_at(self, point) -> list:
        from .specs import point_satisfies
        return [c for c in self.cases if point_satisfies(point, c.sigma)]


# ---------------------------------------------------------------------------
# branching primitives
# ---------------------------------------------------------------------------

def _lead(d, ctx):
    key = ctx._xkey
    return max(d) if key is None else max(d, key=key)


def _decided(c: Poly, sigma: Specification, nonzero) -> bool:
    if c.is_constant():
        return bool(c)
    if sigma.generic:
        return False
    known = tuple(sigma.W) + tuple(nonzero)
    return bool(known) and strip_w(c, known).is_constant()


@dataclass
class _Branch:
    cb: bool
    G: list
    sigma0: Specification | None
    sigma1: Specification | None
    cond: Poly


def cond_to_branch(B: Sequence[dict], sigma: Specification, ctx: VariableContext, nonzero=()):
    """Reduce ``B`` under ``sigma`` and look for an undecided leading coefficient.

    Returns ``(G, None)`` when every leading coefficient is decided, else
    ``(G, branch)``.  A leading coefficient that vanishes on the whole of
    ``sigma`` is dropped and the next term takes its place.
    """
    R = ctx.R
    G = []
    for d in B:
        d = pnormalform_split(d, sigma, ctx)
        if d:
            G.append(d)
    for idx in range(len(G)):
        d = G[idx]
        while d:
            lp = _lead(d, ctx)
            lc = d[lp]
            if _decided(lc, sigma, nonzero):
                break
            s1 = canspec(R, sigma.N, tuple(sigma.W) + (lc,))
            if s1 is None:
                d = dict(d)
                del d[lp]
                d = pnormalform_split(d, sigma, ctx)
                G[idx] = d
                continue
            s0 = canspec(R, tuple(sigma.N) + (lc,), sigma.W)
            G = [g for g in G if g]
            return G, _Branch(s0 is not None, G, s0, s1, lc.normalized())
    return [g for g in G if g], None


class _Undecided(Exception):
    def __init__(self, d):
        self.d = d


class _CondEngine(FractionFreeBuchberger):
    def __init__(self, ctx, sigma, nonzero, cache):
        super().__init__(ctx)
        self.sigma = sigma
        self.nonzero = nonzero
        self.zero_pairs = cache

    def simplify(self, d):
        return pnormalform_split(d, self.sigma, self.ctx, self.nonzero)

    def step_simplify(self, r):
        gb = self.sigma.gb
        if not gb:
            return r
        out = {}
        for m, c in r.items():
            c = normal_form(c, gb)
            if c:
                out[m] = c
        return out

    def check(self, d):
        if d and not _decided(d[self.lead(d)], self.sigma, self.nonzero):
            raise _Undecided(d)


def condpgb(G: Sequence[dict], sigma: Specification, ctx: VariableContext, cache: set, nonzero=()):
    """Buchberger under ``sigma``: ``(basis, None)`` or ``(G, branch)``."""
    G = list(G)
    while True:
        eng = _CondEngine(ctx, sigma, nonzero, cache)
        try:
            return eng.run(G), None
        except _Undecided as u:
            current = [e[2] for e in eng.entries] + [u.d]
        G2, br = cond_to_branch(current, sigma, ctx, nonzero)
        if br is not None:
            return G2, br
        G = G2


# ---------------------------------------------------------------------------
# building
# ---------------------------------------------------------------------------

def _lpp_set(basis: Sequence[dict], ctx) -> tuple:
    return tuple(_lead(d, ctx) for d in basis)


def build_tree(B: Sequence[dict], sigma: Specification, ctx: VariableContext,
               depth: int = 0, cache: set | None = None, nonzero=(), max_depth: int = MAX_DEPTH,
               stats: dict | None = None) -> Vertex:
    """Discussion subtree for the split basis ``B`` under ``sigma``."""
    if depth > max_depth:
        raise DepthGuardError(f"discussion exceeded {max_depth} decisions")
    if cache is None:
        cache = set()
    if stats is not None:
        stats["calls"] = stats.get("calls", 0) + 1
    G, br = cond_to_branch(B, sigma, ctx, nonzero)
    if br is None:
        basis, br = condpgb(G, sigma, ctx, cache, nonzero)
        if br is None:
            return Vertex([ctx.join(d) for d in basis], sigma, terminal=True,
                          lpp=_lpp_set(basis, ctx))
    G = br.G
    if br.cb:
        c0 = build_tree(G, br.sigma0, ctx, depth + 1, None, nonzero, max_depth, stats)
        c1 = build_tree(G, br.sigma1, ctx, depth + 1, None, nonzero, max_depth, stats)
        return Vertex([ctx.join(d) for d in G], sigma, condition=br.cond, children=[c0, c1])
    # the condition cannot vanish here: continue at the same vertex
    return build_tree(G, br.sigma1, ctx, depth + 1, cache, tuple(nonzero) + (br.cond,),
                      max_depth, stats)


def iter_terminals(v: Vertex, label=()):
    """Terminal vertices with their labels, non-null child first."""
    if v.terminal:
        yield label, v
        return
    yield from iter_terminals(v.children[1], label + (1,))
    yield from iter_terminals(v.children[0], label + (0,))


def iter_vertices(v: Vertex, label=()):
    yield label, v
    if not v.terminal:
        yield from iter_vertices(v.children[1], label + (1,))
        yield from iter_vertices(v.children[0], label + (0,))


def generic_leaf(v: Vertex) -> tuple:
    """Label and vertex reached by always taking the non-null child."""
    label = ()
    while not v.terminal:
        v = v.children[1]
        label += (1,)
    return label, v


def discriminant_ideal(tree: Vertex, ctx: VariableContext, generic_lpp: tuple) -> list:
    """Intersection of the null ideals of all singular terminal cases.

    Returns the quasi-radical basis; ``[1]`` when there is no singular case.
    """
    R = ctx.R
    acc = None
    for _, v in iter_terminals(tree):
        if set(v.lpp) == set(generic_lpp):
            continue
        N = list(v.sigma.gb)
        if not N:
            return []
        acc = N if acc is None else intersect(acc, N, R)
    if acc is None:
        return [R.one]
    return [g.normalized() for g in quasi_radical(acc, R)]


def compact_vert(v: Vertex) -> Vertex:
    """Merge brother terminal vertices with equal lpp sets, bottom-up."""
    if v.terminal:
        return v
    c0 = compact_vert(v.children[0])
    c1 = compact_vert(v.children[1])
    if c0.terminal and c1.terminal and set(c0.lpp) == set(c1.lpp):
        return Vertex(c1.basis, v.sigma, terminal=True, lpp=c1.lpp)
    return Vertex(v.basis, v.sigma, condition=v.condition, children=[c0, c1])


def _copy(v: Vertex) -> Vertex:
    if v.terminal:
        return Vertex(list(v.basis), v.sigma, terminal=True, lpp=v.lpp)
    return Vertex(list(v.basis), v.sigma, condition=v.condition,
                  children=[_copy(v.children[0]), _copy(v.children[1])])


def rebuild_tree(tree: Vertex, N: Sequence[Poly], ctx: VariableContext, generic_basis: Sequence[dict],
                 max_depth: int = MAX_DEPTH, stats: dict | None = None) -> Vertex:
    """New tree with ``N`` at the root, the generic case on its non-null side
    and the old tree restricted to ``V(N)`` on its null side."""
    R = ctx.R
    gb = [ctx.join(d) for d in generic_basis]
    glpp = _lpp_set(generic_basis, ctx)
    if len(N) == 1 and N[0].is_constant():
        return Vertex(gb, empty_spec(R), terminal=True, lpp=glpp)
    if not N:
        # every point is singular: nothing to place on the generic side
        return tree
    gsig = Specification(R, (), tuple(sort_polys(N)), generic=True)
    generic = Vertex(gb, gsig, terminal=True, lpp=glpp)
    rootsig = empty_spec(R)
    null = _rewrite(tree, list(N), ctx, max_depth, stats)
    if null is None:
        return generic
    return Vertex(gb, rootsig, condition=tuple(sort_polys(N)), children=[null, generic])


def _rewrite(v: Vertex, N, ctx, max_depth, stats):
    R = ctx.R
    if ideal_contains(v.sigma.gb, N, R):
        return _copy(v)
    s = canspec(R, tuple(v.sigma.N) + tuple(N), v.sigma.W)
    if s is None:
        return None
    if v.terminal:
        B = [ctx.split(f) for f in v.basis]
        return build_tree(B, s, ctx, 0, None, (), max_depth, stats)
    c0 = _rewrite(v.children[0], N, ctx, max_depth, stats)
    c1 = _rewrite(v.children[1], N, ctx, max_depth, stats)
    if c0 is None and c1 is None:
        return None
    if c0 is None:
        return c1
    if c1 is None:
        return c0
    basis = [ctx.join(d) for d in (pnormalform_split(ctx.split(f), s, ctx) for f in v.basis) if d]
    return Vertex(basis, s, condition=v.condition, children=[c0, c1])


def count_terminals(v: Vertex) -> int:
    return sum(1 for _ in iter_terminals(v))


def dispgb(B: Iterable[Poly], ctx: VariableContext, max_depth: int = MAX_DEPTH,
           rebuild: bool = True) -> GroebnerSystem:
    """Full pipeline: build, discriminant, compact, rebuild, compact."""
    B = [ctx.embed(p) for p in B if p]
    R = ctx.R
    stats = {}
    split = [ctx.split(p) for p in B]
    tree = build_tree(split, empty_spec(R), ctx, max_depth=max_depth, stats=stats)
    stats["built_terminals"] = count_terminals(tree)
    _, gleaf = generic_leaf(tree)
    generic_lpp = gleaf.lpp
    N = discriminant_ideal(tree, ctx, generic_lpp)
    tree = compact_vert(tree)
    stats["compacted_terminals"] = count_terminals(tree)
    if rebuild:
        generic_basis = buchberger_over_k(ctx, B) if B else []
        tree = rebuild_tree(tree, N, ctx, generic_basis, max_depth, stats)
        tree = compact_vert(tree)
    cases = [Case(label, v.basis, v.sigma, v.lpp) for label, v in iter_terminals(tree)]
    glabel, _ = generic_leaf(tree)
    return GroebnerSystem(ctx, cases, N, glabel, tree, generic_lpp, stats)


def format_lpp(lpp: Sequence[tuple], ctx: VariableContext) -> str:
    return "{" + ", ".join(format_monomial(m, ctx.xvars) for m in lpp) + "}"
