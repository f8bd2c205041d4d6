"""Specifications of specializations.

A specification ``(N, W)`` describes the parameter points where every
polynomial of the ideal ``N`` vanishes and no element of ``W`` does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd as igcd
from typing import Iterable, Mapping

from gmpy2 import mpq

from .idealkit import groebner, groebner_with_cofactors, quasi_radical, radical_member
from .polycore import (
    GREVLEX, Poly, Ring, VariableContext, coprime_factor_basis, exact_div, gcd, gcd_list,
    normal_form, sort_polys, to_mpq,
)

__all__ = [
    "Specification", "canspec", "empty_spec", "pnormalform", "pnormalform_split",
    "equivalent_reduced", "point_satisfies", "strip_w", "is_decided",
]

_MAX_ROUNDS = 200


@dataclass(frozen=True)
class Specification:
    """Pair ``(N, W)`` in reduced form.

    ``N`` holds the reduced basis of the null ideal, each element primitive
    with positive leading coefficient; ``W`` is sorted.  When ``generic`` is
    set the non-null side is read disjunctively: some element of ``W`` is
    nonzero.
    """

    ring: Ring
    N: tuple = ()
    W: tuple = ()
    generic: bool = False
    gb: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.gb and self.N:
            object.__setattr__(self, "gb", tuple(g.monic() for g in self.N))

    @property
    def is_empty_conditions(self) -> bool:
        return not self.N and not self.W

    def reduce(self, c: Poly) -> Poly:
        return normal_form(c, self.gb) if self.gb else c

    def __str__(self):
        n = ", ".join(str(g) for g in self.N)
        w = ", ".join(str(g) for g in self.W)
        return f"(N = [{n}], W = {{{w}}})"

    __repr__ = __str__


def empty_spec(ring: Ring) -> Specification:
    return Specification(ring)


def _is_unit(G):
    return len(G) == 1 and G[0].is_constant()


def _certified_radical(G) -> bool:
    """Cases where the quasi-radical is known to be the radical."""
    return len(G) <= 1 or all(g.total_degree() <= 1 for g in G)


def canspec(ring: Ring, N: Iterable[Poly] = (), W: Iterable[Poly] = (),
            generic: bool = False) -> Specification | None:
    """Reduce ``(N, W)``; None when no point satisfies the conditions."""
    G = quasi_radical([p for p in N if p], ring)
    if _is_unit(G):
        return None
    W = [w for w in W]
    if any(not w for w in W):
        return None
    for _ in range(_MAX_ROUNDS):
        red = []
        for w in W:
            r = normal_form(w, G) if G else w
            if not r:
                return None
            if not r.is_constant():
                red.append(r)
        Wb = coprime_factor_basis(red)
        changed = False
        newN = []
        for g in G:
            h = g
            for w in Wb:
                c = gcd(h, w)
                while not c.is_constant():
                    h = exact_div(h, c)
                    changed = True
                    c = gcd(h, c)
            if h.is_constant():
                return None
            newN.append(h)
        if changed:
            G = quasi_radical(newN, ring)
            if _is_unit(G):
                return None
            W = Wb
            continue
        if G and any(normal_form(w, G) != w for w in Wb):
            W = Wb
            continue
        break
    else:
        raise RuntimeError("condition reduction did not stabilize")
    if G and Wb:
        prod = ring.one
        for w in Wb:
            prod = prod * w
        if _certified_radical(G):
            if not normal_form(prod, G):
                return None
        elif radical_member(prod, G, ring):
            return None
    Nn = tuple(sort_polys(g.normalized() for g in G))
    return Specification(ring, Nn, tuple(sort_polys(Wb)), generic, tuple(G))


def strip_w(c: Poly, W: Iterable[Poly]) -> Poly:
    """Remove from ``c`` every factor it shares with an element of ``W``."""
    for w in W:
        g = gcd(c, w)
        while not g.is_constant():
            c = exact_div(c, g)
            g = gcd(c, g)
    return c


def is_decided(c: Poly, sigma: Specification) -> bool:
    """True when ``c`` is known to be nonzero at every point of ``sigma``."""
    if c.is_constant():
        return bool(c)
    if sigma.generic or not sigma.W:
        return False
    return strip_w(c, sigma.W).is_constant()


def pnormalform_split(d: dict, sigma: Specification, ctx: VariableContext, nonzero=()) -> dict:
    """Reduction of a split polynomial ``{x-exponent: R-coefficient}``.

    Coefficients are reduced modulo ``N``, factors of the content lying in
    ``W`` (or in the extra ``nonzero`` polynomials) are removed, and the
    result is made integer-primitive with positive leading coefficient.
    """
    if sigma.gb:
        gb = sigma.gb
        d = {m: normal_form(c, gb) for m, c in d.items()}
        d = {m: c for m, c in d.items() if c}
    if not d:
        return d
    known = () if sigma.generic else tuple(sigma.W) + tuple(nonzero)
    if known:
        cont = gcd_list(list(d.values()))
        if not cont.is_constant():
            rest = strip_w(cont, known)
            if rest != cont:
                drop = exact_div(cont, rest)
                d = {m: exact_div(c, drop) for m, c in d.items()}
    if sigma.gb and not sigma.generic:
        d = _unit_lead(d, sigma.gb, known, ctx)
    return normalize_split(d, ctx)


@lru_cache(maxsize=4096)
def _inverse_mod(c: Poly, gb: tuple):
    """``u`` with ``u*c = 1`` modulo ``gb``, or None when ``c`` is no unit there."""
    # the inverse does not depend on the order, and grevlex is much cheaper
    rg = c.ring.with_order(GREVLEX)
    F = [c.to_ring(rg)] + [g.to_ring(rg) for g in gb]
    if groebner(F, rg, stop_on_unit=True) != [rg.one]:
        return None
    G, C = groebner_with_cofactors(F, rg)
    return normal_form(C[0][0].scale(1 / G[0].lc).to_ring(c.ring), list(gb))


def _unit_lead(d: dict, gb: tuple, known, ctx: VariableContext) -> dict:
    # the part of the leading coefficient that is a unit modulo N is divided out
    key = ctx._xkey
    lp = max(d) if key is None else max(d, key=key)
    lc = d[lp]
    if known:
        lc = strip_w(lc, known)
    if lc.is_constant():
        return d
    n = lc.normalized()
    u = _inverse_mod(n, gb)
    if u is None:
        return d
    u = u.scale(n.lc / lc.lc)
    out = {m: normal_form(u * c, list(gb)) for m, c in d.items()}
    return {m: c for m, c in out.items() if c}


def normalize_split(d: dict, ctx: VariableContext) -> dict:
    """Integer-primitive with positive leading coefficient under the product order."""
    if not d:
        return d
    num = 0
    den = 1
    for c in d.values():
        for v in c.terms.values():
            num = igcd(num, int(v.numerator))
            vd = int(v.denominator)
            den = den * vd // igcd(den, vd)
    key = ctx._xkey
    lp = max(d) if key is None else max(d, key=key)
    s = mpq(den, num)
    if d[lp].lc < 0:
        s = -s
    if s == 1:
        return d
    return {k: v.scale(s) for k, v in d.items()}


def pnormalform(f: Poly, sigma: Specification, ctx: VariableContext) -> Poly:
    return ctx.join(pnormalform_split(ctx.split(f), sigma, ctx))


def equivalent_reduced(f: Poly, g: Poly, sigma: Specification, ctx: VariableContext) -> bool:
    """Same lpp and ``lc(g)*f - lc(f)*g`` reduces to zero under ``sigma``."""
    if not f or not g:
        return not f and not g
    if ctx.lpp(f) != ctx.lpp(g):
        return False
    h = ctx.embed(ctx.lc(g)) * f - ctx.embed(ctx.lc(f)) * g
    return not pnormalform(h, sigma, ctx)


def point_satisfies(point: Mapping[str, object], sigma: Specification) -> bool:
    """Membership of a rational parameter point in the specification."""
    pt = {k: to_mpq(v) for k, v in point.items()}
    if any(g.value_at(pt) != 0 for g in sigma.N):
        return False
    if sigma.generic:
        return not sigma.W or any(w.value_at(pt) != 0 for w in sigma.W)
    return all(w.value_at(pt) != 0 for w in sigma.W)
