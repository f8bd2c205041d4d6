"""Gröbner bases and ideal operations.

Two Buchberger engines live here:

* :func:`groebner` works over QQ with mpq coefficients and can track
  cofactors of the result in terms of the input;
* :class:`FractionFreeBuchberger` works in R[x] with R = QQ[a], which is
  how bases over the fraction field K = QQ(a) are computed.  Subclasses
  hook into coefficient simplification and leading-coefficient checks;
  the discussion tree uses that to run Buchberger under conditions.

Both use the normal selection strategy with the Gebauer-Möller update.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Sequence

from gmpy2 import mpq

from .polycore import (
    GREVLEX, LEX, ONE, ZERO, Poly, RationalFunction, Ring, VariableContext,
    exact_div, gcd, gcd_list, mono_div, mono_divides, mono_lcm, mono_mul,
    normal_form, product_order, sort_polys, squarefree_part,
)

__all__ = [
    "groebner", "groebner_with_cofactors", "is_groebner", "Ideal", "eliminate",
    "intersect", "quotient", "radical_member", "quasi_radical", "ideal_contains",
    "FractionFreeBuchberger", "KPolynomial", "buchberger_over_k", "aux_name",
]


# ---------------------------------------------------------------------------
# pair bookkeeping
# ---------------------------------------------------------------------------

def _update(lms, pairs, key):
    """Gebauer-Möller update after appending ``lms[-1]``.

    ``pairs`` is a list of ``(i, j)`` index pairs and is modified in place.
    """
    new = len(lms) - 1
    lmf = lms[new]

    def can_drop(p):
        i, j = p
        gam = mono_lcm(lms[i], lms[j])
        return (mono_divides(lmf, gam) and gam != mono_lcm(lms[i], lmf)
                and gam != mono_lcm(lms[j], lmf))

    pairs[:] = [p for p in pairs if not can_drop(p)]
    groups = {}
    for i in range(new):
        groups.setdefault(mono_lcm(lms[i], lmf), []).append(i)
    minimal = []
    for gam in sorted(groups, key=key):
        if any(mono_divides(m, gam) for m in minimal):
            continue
        minimal.append(gam)
        if not any(mono_lcm(lms[i], lmf) == mono_mul(lms[i], lmf) for i in groups[gam]):
            pairs.append((groups[gam][0], new))


def _select(lms, pairs, key):
    """Normal strategy: smallest lcm, ties broken by index pair."""
    best = min(range(len(pairs)),
               key=lambda k: (key(mono_lcm(lms[pairs[k][0]], lms[pairs[k][1]])), pairs[k]))
    return pairs.pop(best)


def _minimal_indices(lms, key):
    """Indices of a minimal basis: drop elements whose lm is divisible by another's."""
    keep = []
    order = sorted(range(len(lms)), key=lambda i: (key(lms[i]), i))
    for i in order:
        if not any(mono_divides(lms[j], lms[i]) for j in keep):
            keep.append(i)
    return keep


# ---------------------------------------------------------------------------
# Buchberger over QQ
# ---------------------------------------------------------------------------

def groebner(polys: Iterable[Poly], ring: Ring | None = None, stop_on_unit: bool = False) -> list[Poly]:
    """Reduced monic Gröbner basis, sorted ascending by leading monomial.

    ``[]`` denotes the zero ideal and ``[1]`` the unit ideal.
    """
    return _groebner(polys, ring, False, stop_on_unit)[0]


def groebner_with_cofactors(polys: Sequence[Poly], ring: Ring | None = None):
    """Reduced basis together with a cofactor matrix.

    Returns ``(G, C)`` where ``G[k] == sum(C[k][i] * polys[i])``.
    """
    return _groebner(polys, ring, True, False)


def _groebner(polys, ring, track, stop_on_unit):
    polys = list(polys)
    if ring is None:
        if not polys:
            raise ValueError("need a ring for an empty generator list")
        ring = polys[0].ring
    key = ring.sort_key
    n_in = len(polys)
    G: list[Poly] = []
    cof: list[list[Poly]] = []
    lms = []
    pairs: list = []

    def unit_vec(i):
        v = [ring.zero] * n_in
        v[i] = ring.one
        return v

    def add(p, c):
        inv = 1 / p.lc
        G.append(p.scale(inv))
        if track:
            cof.append([x.scale(inv) for x in c])
        lms.append(G[-1].lm)
        _update(lms, pairs, key)

    def reduce(p, c):
        if not track:
            return normal_form(p, G), None
        r, qs = normal_form(p, G, cofactors=True)
        c = list(c)
        for q, cg in zip(qs, cof):
            if q:
                for i in range(n_in):
                    if cg[i]:
                        c[i] = c[i] - q * cg[i]
        return r, c

    for i, p in enumerate(polys):
        if p.ring != ring:
            raise ValueError("ring mismatch in generator list")
        if not p:
            continue
        r, c = reduce(p, unit_vec(i) if track else None)
        if r:
            add(r, c)
            if stop_on_unit and r.is_constant():
                return [ring.one], None

    while pairs:
        i, j = _select(lms, pairs, key)
        f, g = G[i], G[j]
        L = mono_lcm(lms[i], lms[j])
        u, v = mono_div(L, lms[i]), mono_div(L, lms[j])
        s = f.mul_term(u) - g.mul_term(v)
        sc = None
        if track:
            uf = ring.monomial(u)
            vg = ring.monomial(v)
            sc = [uf * a - vg * b for a, b in zip(cof[i], cof[j])]
        r, rc = reduce(s, sc)
        if r:
            add(r, rc)
            if r.is_constant():
                if stop_on_unit or not track:
                    return [ring.one], None
                # keep going only to finish the cofactor bookkeeping
                pairs.clear()

    keep = _minimal_indices(lms, key)
    basis = [G[i] for i in keep]
    bcof = [cof[i] for i in keep] if track else None
    # interreduce
    out = []
    out_cof = []
    for k, g in enumerate(basis):
        others = basis[:k] + basis[k + 1:]
        if track:
            ocof = bcof[:k] + bcof[k + 1:]
            r, qs = normal_form(g, others, cofactors=True)
            c = list(bcof[k])
            for q, cg in zip(qs, ocof):
                if q:
                    for i in range(n_in):
                        if cg[i]:
                            c[i] = c[i] - q * cg[i]
            out_cof.append(c)
        else:
            # lm is irreducible, so only the tail changes
            r = normal_form(g, others)
        out.append(r)
    order = sorted(range(len(out)), key=lambda k: (key(out[k].lm), k))
    G_sorted = [out[k] for k in order]
    if track:
        return G_sorted, [out_cof[k] for k in order]
    return G_sorted, None


def is_groebner(G: Sequence[Poly]) -> bool:
    """Post-hoc check: every S-polynomial reduces to zero."""
    from .polycore import spoly
    G = [g for g in G if g]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if normal_form(spoly(G[i], G[j]), G):
                return False
    return True


def is_reduced(G: Sequence[Poly]) -> bool:
    lms = [g.lm for g in G]
    if len(set(lms)) != len(lms):
        return False
    for k, g in enumerate(G):
        for m in g.terms:
            for j, lm in enumerate(lms):
                if j != k and mono_divides(lm, m):
                    return False
    return True


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------

class Ideal:
    """Ideal of a polynomial ring, held through its reduced Gröbner basis.

    An empty basis is the zero ideal; ``[1]`` is the unit ideal.
    """

    __slots__ = ("ring", "gb")

    def __init__(self, ring: Ring, generators: Iterable[Poly] = (), *, reduced: bool = False):
        gens = [g for g in generators if g]
        self.ring = ring
        self.gb = tuple(gens) if reduced else tuple(groebner(gens, ring))

    @property
    def is_zero(self) -> bool:
        return not self.gb

    @property
    def is_unit(self) -> bool:
        return len(self.gb) == 1 and self.gb[0].is_constant()

    def generators(self) -> list[Poly]:
        """Basis elements normalized for printing (primitive, positive lc)."""
        return [g.normalized() for g in self.gb]

    def contains(self, f: Poly) -> bool:
        if not f:
            return True
        if self.is_unit:
            return True
        return not normal_form(f, self.gb)

    def radical_contains(self, f: Poly) -> bool:
        return radical_member(f, self.gb, self.ring)

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f, self.gb) if self.gb else f

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, list(self.gb) + list(other.gb))

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gb == other.gb

    def __hash__(self):
        return hash((self.ring, self.gb))

    def __str__(self):
        return "[" + ", ".join(str(g) for g in self.generators()) + "]"

    __repr__ = __str__


def aux_name(ring: Ring, base: str = "_t") -> str:
    """A variable name not used in ``ring``."""
    k = 0
    while f"{base}{k}" in ring.index:
        k += 1
    return f"{base}{k}"


def eliminate(polys: Sequence[Poly], drop: Iterable[str], ring: Ring | None = None) -> list[Poly]:
    """Generators of the ideal intersected with the subring free of ``drop``.

    The result is the reduced basis in the subring with the inherited order.
    """
    polys = [p for p in polys if p]
    if ring is None:
        if not polys:
            return []
        ring = polys[0].ring
    drop = [n for n in ring.names if n in set(drop)]
    keep = [n for n in ring.names if n not in set(drop)]
    sub = Ring(keep, _sub_order(ring, keep))
    if not drop:
        return groebner([p.to_ring(sub) for p in polys], sub)
    big = Ring(drop + keep, product_order((GREVLEX, len(drop)), (sub.order, len(keep))))
    G = groebner([p.to_ring(big) for p in polys], big)
    k = len(drop)
    out = [g for g in G if not any(g.lm[:k])]
    return groebner([g.to_ring(sub) for g in out], sub)


def _sub_order(ring, keep):
    from .polycore import _restricted_order
    return _restricted_order(ring, keep)


def intersect(I: Sequence[Poly], J: Sequence[Poly], ring: Ring) -> list[Poly]:
    """Reduced basis of the intersection via ``t*I + (1-t)*J``."""
    I = [p for p in I if p]
    J = [p for p in J if p]
    if not I or not J:
        return []
    if _is_unit_list(I):
        return groebner(J, ring)
    if _is_unit_list(J):
        return groebner(I, ring)
    t = aux_name(ring)
    big = Ring((t,) + ring.names, product_order((LEX, 1), (ring.order, ring.nvars)))
    tv = big.var(t)
    gens = [tv * p.to_ring(big) for p in I] + [(1 - tv) * q.to_ring(big) for q in J]
    G = groebner(gens, big)
    return groebner([g.to_ring(ring) for g in G if g.degree(0) <= 0], ring)


def _is_unit_list(gens):
    return any(g.is_constant() and g for g in gens)


def quotient(I: Sequence[Poly], f: Poly, ring: Ring) -> list[Poly]:
    """Reduced basis of ``I : f``."""
    if not f:
        raise ValueError("quotient by zero")
    if f.is_constant():
        return groebner(I, ring)
    inter = intersect(I, [f], ring)
    return groebner([exact_div(g, f) for g in inter], ring)


@lru_cache(maxsize=20000)
def _radical_member_cached(f: Poly, gb: tuple, ring: Ring) -> bool:
    if not gb:
        return False
    t = aux_name(ring)
    big = Ring(ring.names + (t,), GREVLEX)
    tv = big.var(t)
    gens = [g.to_ring(big) for g in gb] + [1 - tv * f.to_ring(big)]
    G = groebner(gens, big, stop_on_unit=True)
    return len(G) == 1 and G[0].is_constant()


def radical_member(f: Poly, gens: Sequence[Poly], ring: Ring | None = None) -> bool:
    """Exact test of ``f`` in the radical of ``<gens>`` (Rabinowitsch)."""
    gens = tuple(g for g in gens if g)
    if not f:
        return True
    if ring is None:
        ring = f.ring
    if not gens:
        return False
    if _is_unit_list(gens):
        return True
    gb = tuple(groebner(gens, ring))
    if len(gb) == 1 and gb[0].is_constant():
        return True
    if f.is_constant():
        return False
    if not normal_form(f, gb):
        return True
    if len(gb) == 1:
        # principal: f is in the radical iff the squarefree part divides f^k
        s = squarefree_part(gb[0])
        g = gcd(s, f)
        while not g.is_constant():
            s = exact_div(s, g)
            g = gcd(s, g)
        return s.is_constant()
    return _radical_member_cached(f, gb, ring)


def quasi_radical(gens: Sequence[Poly], ring: Ring) -> list[Poly]:
    """Fixpoint of replacing basis elements by their squarefree parts.

    Same variety as the input; exact radical when the result is principal
    or all its elements are linear.
    """
    G = groebner(gens, ring)
    while True:
        if not G or (len(G) == 1 and G[0].is_constant()):
            return G
        S = [squarefree_part(g) for g in G]
        if all(s == g.normalized() for s, g in zip(S, G)):
            return G
        G2 = groebner(S, ring)
        if G2 == G:
            return G
        G = G2


def ideal_contains(I: Sequence[Poly], J: Sequence[Poly], ring: Ring | None = None) -> bool:
    """True when ``J`` lies in the radical of ``I``."""
    return all(radical_member(g, I, ring) for g in J if g)


# ---------------------------------------------------------------------------
# fraction-free Buchberger in R[x]
# ---------------------------------------------------------------------------
# Polynomials are handled split: dict {x-exponent: R-polynomial}.

class FractionFreeBuchberger:
    """Buchberger over K = QQ(a) carried out with polynomial coefficients.

    Every intermediate polynomial is kept primitive over R, so the reduced
    basis over K is recovered by dividing each element by its leading
    coefficient.  Subclasses override :meth:`simplify` and :meth:`check`.
    """

    def __init__(self, ctx: VariableContext):
        self.ctx = ctx
        self.R = ctx.R
        self.xkey = ctx.xkey
        self.zero_pairs: set = set()

    # hooks -------------------------------------------------------------
    def simplify(self, d: dict) -> dict:
        return primitive_split(d, self.ctx)

    def check(self, d: dict):
        """Called on each new basis candidate; may raise to interrupt."""
        return None

    # helpers -----------------------------------------------------------
    def lead(self, d):
        key = self.ctx._xkey
        return max(d) if key is None else max(d, key=key)

    def reduce(self, f: dict, G: Sequence[tuple]) -> dict:
        """Full fraction-free reduction of ``f`` by elements ``(lpp, lc, d)``."""
        r = dict(f)
        out = {}
        key = self.ctx._xkey
        while r:
            m = max(r) if key is None else max(r, key=key)
            c = r[m]
            for lp, lg, gd in G:
                if mono_divides(lp, m):
                    q = mono_div(m, lp)
                    if lg.is_constant():
                        b = c.scale(1 / lg.constant_value())
                    else:
                        h = gcd(lg, c)
                        if h.is_constant():
                            a, b = lg, c
                        else:
                            a, b = exact_div(lg, h), exact_div(c, h)
                        if not a.is_constant():
                            r = {k: v * a for k, v in r.items()}
                            out = {k: v * a for k, v in out.items()}
                        else:
                            s = a.constant_value()
                            if s != 1:
                                b = b.scale(1 / s)
                    for k, v in gd.items():
                        kk = mono_mul(k, q)
                        nv = r.get(kk)
                        nv = -(b * v) if nv is None else nv - b * v
                        if nv:
                            r[kk] = nv
                        else:
                            r.pop(kk, None)
                    r = self.step_simplify(r)
                    r, out = _shrink(r, out)
                    break
            else:
                out[m] = c
                del r[m]
        return out

    def step_simplify(self, r: dict) -> dict:
        return r

    def spair(self, f, g):
        lf, cf, df = f
        lg, cg, dg = g
        L = mono_lcm(lf, lg)
        u, v = mono_div(L, lf), mono_div(L, lg)
        h = gcd(cf, cg)
        a = exact_div(cg, h)
        b = exact_div(cf, h)
        s = {}
        for k, c in df.items():
            s[mono_mul(k, u)] = c * a
        for k, c in dg.items():
            kk = mono_mul(k, v)
            nv = s.get(kk)
            nv = -(c * b) if nv is None else nv - c * b
            if nv:
                s[kk] = nv
            else:
                s.pop(kk, None)
        return s

    def entry(self, d):
        lp = self.lead(d)
        return (lp, d[lp], d)

    # main loop ---------------------------------------------------------
    def run(self, polys: Iterable[dict]) -> list[dict]:
        """Reduced basis (each element primitive), ascending by lpp."""
        key = self.xkey
        G: list[tuple] = []
        self.entries = G
        lms: list = []
        pairs: list = []
        for d in polys:
            d = self.simplify(d)
            if not d:
                continue
            self.check(d)
            G.append(self.entry(d))
            lms.append(G[-1][0])
            if not any(lms[-1]):
                return [d]
            _update(lms, pairs, key)
        while pairs:
            i, j = _select(lms, pairs, key)
            tag = (_dkey(G[i][2]), _dkey(G[j][2]))
            if tag in self.zero_pairs:
                continue
            s = self.spair(G[i], G[j])
            r = self.simplify(self.reduce(s, G)) if s else {}
            if not r:
                self.zero_pairs.add(tag)
                continue
            self.check(r)
            G.append(self.entry(r))
            lms.append(G[-1][0])
            _update(lms, pairs, key)
            if not any(lms[-1]):
                return [self.simplify(r)]
        keep = _minimal_indices(lms, key)
        basis = [G[i] for i in keep]
        out = []
        for k, e in enumerate(basis):
            others = basis[:k] + basis[k + 1:]
            r = self.simplify(self.reduce(e[2], others))
            self.check(r)
            out.append(r)
        out.sort(key=lambda d: key(self.lead(d)))
        return out


def _shrink(r: dict, out: dict):
    """Divide ``r`` and ``out`` by their common integer content."""
    g = 0
    for part in (r, out):
        for c in part.values():
            for v in c.terms.values():
                g = math.gcd(g, int(v.numerator))
                if g == 1:
                    return r, out
    if g == 0:
        return r, out
    s = 1 / mpq(g)
    return ({k: c.scale(s) for k, c in r.items()}, {k: c.scale(s) for k, c in out.items()})


def _dkey(d):
    return tuple(sorted((m, tuple(sorted(c.terms.items()))) for m, c in d.items()))


def primitive_split(d: dict, ctx: VariableContext) -> dict:
    """Divide by the gcd of the R-coefficients; integer-primitive; positive sign."""
    if not d:
        return d
    coeffs = list(d.values())
    g = gcd_list(coeffs)
    if not g.is_constant():
        d = {k: exact_div(v, g) for k, v in d.items()}
    return _sign_normalize(d, ctx)


def _sign_normalize(d, ctx):
    from math import gcd as igcd
    num = 0
    den = 1
    for c in d.values():
        for v in c.terms.values():
            num = igcd(num, int(v.numerator))
            vd = int(v.denominator)
            den = den * vd // igcd(den, vd)
    key = ctx._xkey
    lp = max(d) if key is None else max(d, key=key)
    from gmpy2 import mpq
    s = mpq(den, num)
    if d[lp].lc < 0:
        s = -s
    if s == 1:
        return d
    return {k: v.scale(s) for k, v in d.items()}


class KPolynomial:
    """Polynomial in the x-variables with coefficients in QQ(a)."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: VariableContext, terms: dict):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c}

    @classmethod
    def monic_from_split(cls, ctx, d):
        key = ctx._xkey
        lp = max(d) if key is None else max(d, key=key)
        lc = d[lp]
        return cls(ctx, {m: RationalFunction(c, lc) for m, c in d.items()})

    @property
    def lpp(self):
        key = self.ctx._xkey
        return max(self.terms) if key is None else max(self.terms, key=key)

    def denominator(self) -> Poly:
        """Least common multiple of the coefficient denominators, normalized."""
        from .polycore import lcm
        d = self.ctx.R.one
        for c in self.terms.values():
            if not c.den.is_constant():
                d = lcm(d, c.den)
        return d.normalized()

    def sorted_terms(self):
        key = self.ctx._xkey
        return sorted(self.terms.items(), key=lambda t: t[0] if key is None else key(t[0]), reverse=True)

    def __eq__(self, other):
        return isinstance(other, KPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        from .polycore import format_monomial
        parts = []
        for m, c in self.sorted_terms():
            neg = c.num.lc < 0
            if neg:
                c = -c
            mono = format_monomial(m, self.ctx.xvars)
            cs = str(c)
            if mono == "1":
                body = cs
            elif cs == "1":
                body = mono
            else:
                simple = c.den.is_constant() and len(c.num) == 1
                body = f"{cs}*{mono}" if simple else f"({cs})*{mono}"
            if parts:
                parts.append((" - " if neg else " + ") + body)
            else:
                parts.append(("-" if neg else "") + body)
        return "".join(parts) if parts else "0"

    __repr__ = __str__


def buchberger_over_k(ctx: VariableContext, polys: Sequence[Poly]) -> list[dict]:
    """Reduced basis of ``<polys>`` over QQ(a)[x] as primitive split polynomials."""
    eng = FractionFreeBuchberger(ctx)
    return eng.run([ctx.split(p) for p in polys if p])
