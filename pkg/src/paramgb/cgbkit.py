"""Generic basis, Weispfenning's discriminant and comprehensive bases.

The generic basis is the reduced basis over QQ(a); its sub-lifting
multiplies each element by the lcm of its coefficient denominators.
``is_cgb`` checks a candidate basis against a Gröbner system case by case
and ``cgb`` repairs failing cases by adjoining faithful pre-images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .disptree import GroebnerSystem, format_lpp
from .idealkit import (
    KPolynomial, aux_name, buchberger_over_k, groebner, groebner_with_cofactors,
    ideal_contains, intersect, quasi_radical, quotient,
)
from .polycore import (
    LEX, Poly, Ring, VariableContext, lcm, normal_form, product_order, squarefree_part,
)
from .specs import Specification, equivalent_reduced, pnormalform

__all__ = [
    "GenericBasis", "CaseVerdict", "CgbReport", "generic_basis", "weispfenning_discriminant",
    "principality_check", "conjecture_report", "is_cgb", "preimage", "cgb", "PreimageError",
    "CgbGuardError",
]


class PreimageError(RuntimeError):
    """No element of the ideal specializes to the requested case polynomial."""


class CgbGuardError(RuntimeError):
    """The repair loop hit its iteration cap."""


@dataclass
class GenericBasis:
    G: list            # KPolynomial, monic
    d: list            # denominators in R
    G2: list           # d_g * g in S, primitive

    def __len__(self):
        return len(self.G)


def generic_basis(B: Sequence[Poly], ctx: VariableContext) -> GenericBasis:
    """Reduced basis over QQ(a) with its denominators and sub-lifting."""
    B = [ctx.embed(p) for p in B if p]
    split = buchberger_over_k(ctx, B)
    G = [KPolynomial.monic_from_split(ctx, d) for d in split]
    dens = [g.denominator() for g in G]
    G2 = [ctx.join(d) for d in split]
    return GenericBasis(G, dens, G2)


def _eliminate_x(gb: Sequence[Poly], ctx: VariableContext) -> list:
    """Elements free of x in a basis under the product order, moved to R."""
    n = ctx.n
    return [ctx.to_R(g) for g in gb if not any(g.lm[:n])]


def weispfenning_discriminant(B: Sequence[Poly], ctx: VariableContext,
                              gbasis: GenericBasis | None = None) -> list:
    """``J = sqrt(intersection of J_g)`` with ``J_g = d_g * ((I : d_g g) ∩ R)``.

    Returned as a quasi-radical basis in R; ``[1]`` without parameters.
    """
    R = ctx.R
    if not ctx.avars:
        return [R.one]
    if gbasis is None:
        gbasis = generic_basis(B, ctx)
    I = groebner([ctx.embed(p) for p in B if p], ctx.S)
    if len(I) == 1 and I[0].is_constant():
        return [R.one]
    acc = None
    for g2, dg in zip(gbasis.G2, gbasis.d):
        if not normal_form(g2, I):
            Jg = [dg]
        else:
            q = quotient(I, g2, ctx.S)
            Jg = groebner([dg * h for h in _eliminate_x(q, ctx)], R)
        acc = Jg if acc is None else intersect(acc, Jg, R)
    if acc is None:
        return [R.one]
    return [g.normalized() for g in quasi_radical(acc, R)]


def principality_check(J: Sequence[Poly], gbasis: GenericBasis, ctx: VariableContext):
    """Principality of ``J`` and the denominator-lcm candidate.

    Returns ``(principal, generator, candidate, candidate_generates)``:
    ``principal`` says whether ``J`` has a single generator, and
    ``candidate_generates`` whether the squarefree lcm of the denominators
    generates ``J`` up to radical (guaranteed for prime ideals).
    """
    R = ctx.R
    L = R.one
    for d in gbasis.d:
        L = lcm(L, d)
    cand = (squarefree_part(L) if not L.is_constant() else R.one).normalized()
    J = list(J)
    matches = ideal_contains([cand], J, R) and ideal_contains(J, [cand], R)
    principal = len(J) <= 1
    gen = (J[0].normalized() if J else R.zero) if principal else None
    return principal, gen, cand, matches


def conjecture_report(J: Sequence[Poly], N: Sequence[Poly], ctx: VariableContext):
    """``(J in N, N in J)`` up to radical; the first must hold."""
    R = ctx.R
    return ideal_contains(list(N), list(J), R), ideal_contains(list(J), list(N), R)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class CaseVerdict:
    label: tuple
    specialized_lpp: tuple
    case_lpp: tuple
    ok: bool

    def label_str(self):
        return "[" + ",".join(str(b) for b in self.label) + "]"


@dataclass
class CgbReport:
    cases: list = field(default_factory=list)

    @property
    def is_cgb(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if not c.ok]

    def lines(self, ctx: VariableContext) -> list[str]:
        out = []
        for c in self.cases:
            out.append(f"[{c.label_str()}, {format_lpp(c.specialized_lpp, ctx)}, "
                       f"{format_lpp(c.case_lpp, ctx)}, {'true' if c.ok else 'false'}]")
        return out


def _lpps(polys, ctx):
    seen = []
    for p in polys:
        lp = ctx.lpp(p)
        if lp not in seen:
            seen.append(lp)
    return tuple(seen)


def is_cgb(B: Sequence[Poly], system: GroebnerSystem) -> CgbReport:
    """Per case: do the specialized lpps of ``B`` cover the case's lpps?"""
    ctx = system.ctx
    report = CgbReport()
    for case in system.cases:
        spec = [pnormalform(ctx.embed(b), case.sigma, ctx) for b in B]
        lp = _lpps([s for s in spec if s], ctx)
        ok = set(case.lpp) <= set(lp)
        report.cases.append(CaseVerdict(case.label, lp, case.lpp, ok))
    return report


# ---------------------------------------------------------------------------
# pre-images
# ---------------------------------------------------------------------------

def _reduce_coeffs(f: Poly, sigma: Specification, ctx: VariableContext) -> Poly:
    if not sigma.gb:
        return f
    parts = {m: normal_form(c, sigma.gb) for m, c in ctx.split(f).items()}
    return ctx.join({m: c for m, c in parts.items() if c})


def _faithful(h: Poly, g: Poly, sigma: Specification, ctx: VariableContext) -> bool:
    ph = pnormalform(h, sigma, ctx)
    return bool(ph) and equivalent_reduced(ph, g, sigma, ctx)


def preimage(g: Poly, sigma: Specification, B: Sequence[Poly], ctx: VariableContext,
             I_gb: Sequence[Poly] | None = None) -> Poly:
    """An element of ``<B>`` whose reduction under ``sigma`` is equivalent to ``g``."""
    S = ctx.S
    g = ctx.embed(g)
    if I_gb is None:
        I_gb = groebner([ctx.embed(b) for b in B if b], S)
    g = pnormalform(g, sigma, ctx)
    if not g:
        raise PreimageError("case polynomial vanishes on its specification")
    if not normal_form(g, I_gb) and _faithful(g, g, sigma, ctx):
        return g
    for f in I_gb:
        if _faithful(f, g, sigma, ctx):
            return f.normalized()
    Nemb = [ctx.embed(n) for n in sigma.N]
    Ig = intersect(list(I_gb), [g] + Nemb, S)
    for f in Ig:
        if _faithful(f, g, sigma, ctx):
            return f.normalized()
    if not Ig:
        raise PreimageError("empty intersection basis")
    return _combine(g, Ig, sigma, ctx)


def _combine(g, F, sigma, ctx):
    """Express ``w^k * g`` through the ``f_i`` reduced modulo ``N`` and lift."""
    S = ctx.S
    w = ctx.R.one
    for x in sigma.W:
        w = w * x
    Fp = [_reduce_coeffs(f, sigma, ctx) for f in F]
    t = aux_name(S)
    big = Ring(S.names + (t,), product_order((S.order, len(S.names)), (LEX, 1)))
    tv = big.var(t)
    wb = ctx.embed(w).to_ring(big)
    inputs = [f.to_ring(big) for f in Fp] + [ctx.embed(n).to_ring(big) for n in sigma.N]
    inputs.append(1 - tv * wb)
    G, C = groebner_with_cofactors(inputs, big)
    r, qs = normal_form(g.to_ring(big), G, cofactors=True)
    if r:
        raise PreimageError(f"{g} is not generated by the intersection basis under the case conditions")
    k = len(F)
    alphas = [big.zero] * k
    for q, row in zip(qs, C):
        if q:
            for i in range(k):
                if row[i]:
                    alphas[i] = alphas[i] + q * row[i]
    ti = big.index[t]
    D = max((a.degree(ti) for a in alphas if a), default=0)
    wpow = [big.one]
    for _ in range(D):
        wpow.append(wpow[-1] * wb)
    h = S.zero
    for a, f in zip(alphas, F):
        if not a:
            continue
        acc = big.zero
        for m, c in a.terms.items():
            e = m[ti]
            mm = list(m)
            mm[ti] = 0
            acc = acc + big.monomial(mm, c) * wpow[D - e]
        ah = _reduce_coeffs(acc.to_ring(S), sigma, ctx)
        h = h + ah * f
    if not h:
        raise PreimageError("lifted combination vanished")
    return h.normalized()


def cgb(B0: Sequence[Poly], system: GroebnerSystem, B: Sequence[Poly] | None = None,
        max_iter: int | None = None):
    """Repair ``B0`` until it is comprehensive over ``system``.

    Returns ``(basis, iterations)``.
    """
    ctx = system.ctx
    basis = [ctx.embed(b).normalized() for b in B0]
    gens = basis if B is None else [ctx.embed(b) for b in B]
    I_gb = groebner([p for p in gens if p], ctx.S)
    cap = len(system.cases) + 1 if max_iter is None else max_iter
    for it in range(cap + 1):
        rep = is_cgb(basis, system)
        if rep.is_cgb:
            return basis, it
        if it == cap:
            break
        bad = rep.failures[0]
        case = system.case(bad.label)
        for g in case.basis:
            h = preimage(g, case.sigma, gens, ctx, I_gb)
            if h not in basis:
                basis.append(h)
    raise CgbGuardError(f"no comprehensive basis after {cap} repair rounds")
