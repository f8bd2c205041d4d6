"""Property tests on random inputs, checked against exact arithmetic and sympy."""

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from corpus import FAST, load, system
from oracles import random_point, reduced_lpps, specialized_lpps, to_sympy, witness_points
from paramgb.cgbkit import cgb, is_cgb, preimage
from paramgb.disptree import (
    build_tree, compact_vert, dispgb, iter_vertices,
)
from paramgb.idealkit import (
    groebner, intersect, is_groebner, is_reduced, quasi_radical, quotient, radical_member,
)
from paramgb.output import system_text
from paramgb.polycore import (
    GREVLEX, GRLEX, LEX, Poly, Ring, VariableContext, coprime_factor_basis, divides, gcd, normal_form, squarefree_part,
)
from paramgb.specs import canspec, empty_spec, equivalent_reduced, pnormalform, point_satisfies

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
ORDERS = [LEX, GRLEX, GREVLEX]
R3 = Ring(["x", "y", "z"])
R2 = Ring(["x", "y"], GREVLEX)
Rab = Ring(["a", "b"])

coeffs = st.integers(-5, 5)


def polys(ring, max_terms=4, max_deg=3, allow_zero=True):
    mono = st.tuples(*[st.integers(0, max_deg)] * ring.nvars)
    terms = st.dictionaries(mono, coeffs, max_size=max_terms)
    p = terms.map(lambda d: Poly(ring, d))
    return p if allow_zero else p.filter(bool)


def linear_factors(ring, max_factors=3):
    # products of small linear forms, so small integer points hit the zero sets
    lin = st.tuples(*[st.integers(-1, 1)] * ring.nvars, st.integers(-2, 2)).filter(lambda t: any(t[:-1]))
    one = lin.map(lambda t: sum((ring.var(n).scale(c) for n, c in zip(ring.names, t)), ring.const(t[-1])))
    return st.lists(one, min_size=1, max_size=max_factors).map(lambda fs: _prod(fs, ring))


def _prod(fs, ring):
    out = ring.one
    for f in fs:
        out = out * f
    return out


def small_points(names, n=60, seed=0):
    rng = random.Random(seed)
    pts = [{k: Fraction(rng.randint(-2, 2)) for k in names} for _ in range(n)]
    return pts + [random_point(names, rng) for _ in range(n // 3)]


# --- polynomial arithmetic -------------------------------------------------

@SETTINGS
@given(polys(R3), polys(R3), polys(R3))
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == R3.zero


@SETTINGS
@given(polys(R3, max_terms=5), st.lists(polys(R3, allow_zero=False), min_size=1, max_size=3),
       st.sampled_from(ORDERS))
def test_normal_form_cofactor_identity(f, G, order):
    ring = R3.with_order(order)
    f = f.to_ring(ring)
    G = [g.to_ring(ring) for g in G]
    r, qs = normal_form(f, G, cofactors=True)
    assert f - sum((q * g for q, g in zip(qs, G)), ring.zero) - r == ring.zero
    for m in r.terms:
        assert not any(all(a >= b for a, b in zip(m, g.lm)) for g in G)


@SETTINGS
@given(st.lists(polys(Rab, max_terms=3, max_deg=2, allow_zero=False), min_size=1, max_size=3))
def test_squarefree_part(fs):
    p = _prod(fs + fs[:1], Rab)
    assume(not p.is_constant())
    q = squarefree_part(p)
    assert divides(q, p)
    for v in Rab.names:
        # free of repeated factors involving v
        assert gcd(q, q.diff(v)).degree(v) == 0
    assert squarefree_part(q) == q


@SETTINGS
@given(st.lists(polys(Rab, max_terms=3, max_deg=2, allow_zero=False), min_size=1, max_size=4))
def test_coprime_factor_basis(fs):
    fs = [f for f in fs if not f.is_constant()]
    basis = coprime_factor_basis(fs)
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            assert gcd(a, b).is_constant()
    for f in fs:
        power = _prod([b ** f.total_degree() for b in basis], Rab)
        assert divides(f, power)


monos = st.tuples(*[st.integers(0, 4)] * 3)


@settings(max_examples=1000, deadline=None)
@given(monos, monos, monos, st.sampled_from(ORDERS))
def test_monomial_order_axioms(a, b, c, order):
    ring = Ring(["x", "y", "z"], order)
    k = ring.sort_key
    if k(a) < k(b) and k(b) < k(c):
        assert k(a) < k(c)
    if k(a) < k(b):
        ac = tuple(i + j for i, j in zip(a, c))
        bc = tuple(i + j for i, j in zip(b, c))
        assert k(ac) < k(bc)
    assert k((0, 0, 0)) <= k(a)
    assert (k(a) == k(b)) == (a == b)


# --- ideals ----------------------------------------------------------------

def _sympy_lpps(G, ring):
    return reduced_lpps([to_sympy(str(g), ring.names) for g in G], ring.names, str(ring.order))


@settings(max_examples=25, deadline=None)
@given(st.lists(polys(R2, max_terms=3, max_deg=2, allow_zero=False), min_size=1, max_size=3))
def test_groebner_matches_sympy(F):
    G = groebner(F, R2)
    assert is_groebner(G) and is_reduced(G)
    assert groebner(F, R2) == G
    ours = frozenset(g.lm for g in G)
    assert ours == _sympy_lpps(F, R2)
    gens = sp.symbols(R2.names)
    ref = sp.groebner([to_sympy(str(f), R2.names) for f in F], *gens, order="grevlex")
    monic = {sp.expand(e / sp.LC(e, *gens, order="grevlex")) for e in ref.exprs}
    assert monic == {sp.expand(to_sympy(str(g), R2.names)) for g in G}


def _member(h, G):
    return not normal_form(h, G)


@settings(max_examples=30, deadline=None)
@given(st.lists(polys(R2, max_terms=2, max_deg=2, allow_zero=False), min_size=1, max_size=2),
       st.lists(polys(R2, max_terms=2, max_deg=2, allow_zero=False), min_size=1, max_size=2),
       polys(R2, max_terms=3, max_deg=2), polys(R2, max_terms=2, max_deg=1))
def test_intersect_membership(I, J, h, u):
    K = intersect(I, J, R2)
    GI, GJ = groebner(I, R2), groebner(J, R2)
    # a product lands in both ideals, so it must land in the intersection
    cands = [h, h * I[0] * J[0] + u * I[0] * J[-1], h * I[-1]]
    for c in cands:
        assert _member(c, K) == (_member(c, GI) and _member(c, GJ))


@settings(max_examples=30, deadline=None)
@given(st.lists(polys(R2, max_terms=2, max_deg=2, allow_zero=False), min_size=1, max_size=2),
       polys(R2, max_terms=2, max_deg=2, allow_zero=False), polys(R2, max_terms=3, max_deg=2))
def test_quotient_membership(I, f, h):
    Q = quotient(I, f, R2)
    GI = groebner(I, R2)
    for c in (h, h * I[0], h * quotient(I, f, R2)[0]):
        assert _member(c, Q) == _member(c * f, GI)


@settings(max_examples=25, deadline=None)
# degrees kept small: powers of products blow up the Rabinowitsch bases
@given(st.lists(linear_factors(Rab, 2), min_size=1, max_size=2), st.integers(1, 2))
def test_quasi_radical_same_variety(gens, k):
    I = [g ** k for g in gens]
    Q = quasi_radical(I, Rab)
    assert all(radical_member(g, Q, Rab) for g in I)
    assert all(radical_member(q, I, Rab) for q in Q)


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
       st.lists(st.tuples(polys(R2, max_terms=2, max_deg=1, allow_zero=False), st.integers(0, 2)),
                min_size=1, max_size=3),
       polys(R2, max_terms=3, max_deg=2))
def test_radical_membership_vanishes_on_points(p, parts, f):
    px, py = p
    mx = R2.parse(f"x - ({px})")
    my = R2.parse(f"y - ({py})")
    ms = [mx, my, mx ** 2, mx * my]
    I = [u * ms[i] for u, i in parts] + [my ** 2]
    pt = {"x": px, "y": py}
    if radical_member(f, I, R2):
        assert f.value_at(pt) == 0
    assert radical_member(mx * my + my ** 3, I + [mx], R2)


# --- specifications ----------------------------------------------------------

spec_inputs = st.tuples(st.lists(linear_factors(Rab), max_size=2), st.lists(linear_factors(Rab), max_size=2))


def _raw_satisfies(pt, N, W):
    return all(g.value_at(pt) == 0 for g in N) and all(w.value_at(pt) != 0 for w in W)


@settings(max_examples=60, deadline=None)
@given(spec_inputs)
def test_canspec_idempotent_and_preserves_points(nw):
    N, W = nw
    s = canspec(Rab, N, W)
    pts = small_points(Rab.names, 45)
    if s is None:
        assert not any(_raw_satisfies(pt, N, W) for pt in pts)
        return
    assert canspec(Rab, s.N, s.W) == s
    for pt in pts:
        assert _raw_satisfies(pt, N, W) == point_satisfies(pt, s)


ctx2 = VariableContext(["x", "y"], ["a", "b"])


@settings(max_examples=50, deadline=None)
@given(spec_inputs, polys(ctx2.S, max_terms=4, max_deg=2))
def test_pnormalform_soundness(nw, f):
    s = canspec(Rab, *nw)
    assume(s is not None)
    h = pnormalform(f, s, ctx2)
    for pt in small_points(Rab.names, 30, seed=3):
        if not point_satisfies(pt, s):
            continue
        ef, eh = ctx2.specialize(f, pt), ctx2.specialize(h, pt)
        if h.is_zero():
            assert ef.is_zero()
            continue
        if ctx2.lc(h).value_at(pt) == 0:
            continue
        assert not eh.is_zero()
        ratio = ef.lc / eh.lc if ef else 0
        assert ef == eh.scale(ratio)


@settings(max_examples=40, deadline=None)
@given(spec_inputs, st.lists(polys(ctx2.S, max_terms=3, max_deg=2), min_size=3, max_size=3))
def test_equivalent_reduced_is_equivalence(nw, fs):
    s = canspec(Rab, *nw)
    assume(s is not None)
    f, g, h = [pnormalform(p, s, ctx2) for p in fs]
    assert equivalent_reduced(f, f, s, ctx2)
    assert equivalent_reduced(f, g, s, ctx2) == equivalent_reduced(g, f, s, ctx2)
    if equivalent_reduced(f, g, s, ctx2) and equivalent_reduced(g, h, s, ctx2):
        assert equivalent_reduced(f, h, s, ctx2)
    c = ctx2.S.parse("3*a^2+1")
    assert equivalent_reduced(f, pnormalform(f * c, s, ctx2), s, ctx2)


# --- discussion trees --------------------------------------------------------

ctx1 = VariableContext(["x", "y"], ["a", "b"])
small_systems = st.lists(polys(ctx1.S, max_terms=3, max_deg=1, allow_zero=False), min_size=1, max_size=2)


def _point_lpps(B, pt):
    F = [to_sympy(str(ctx1.specialize(b, pt)), ctx1.xvars) for b in B]
    return reduced_lpps(F, ctx1.xvars)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_systems)
def test_random_system_partition_and_oracle(B):
    assume(any(b.used_names() & {"x", "y"} for b in B))
    S = dispgb(B, ctx1)
    for pt in small_points(ctx1.avars, 24, seed=5):
        hits = S.cases_at(pt)
        assert len(hits) == 1
        assert frozenset(hits[0].lpp) == _point_lpps(B, pt)
        if any(g.value_at(pt) != 0 for g in S.discriminant):
            assert hits[0].label == S.generic_label
    assert system_text(dispgb(B, ctx1)) == system_text(S)


@settings(max_examples=20, deadline=None)
@given(small_systems)
def test_compact_vert_and_rebuild(B):
    assume(any(b.used_names() & {"x", "y"} for b in B))
    raw = build_tree([ctx1.split(b) for b in B], empty_spec(ctx1.R), ctx1)
    comp = compact_vert(raw)
    for _, v in iter_vertices(comp):
        if not v.terminal:
            a, b = v.children
            assert not (a.terminal and b.terminal and a.lpp == b.lpp)
    assert len(list(iter_vertices(comp))) <= len(list(iter_vertices(raw)))
    before = dispgb(B, ctx1, rebuild=False)
    after = dispgb(B, ctx1)
    sing_before = {frozenset(c.lpp) for c in before.cases if c.lpp != after.generic_lpp}
    sing_after = {frozenset(c.lpp) for c in after.cases if c.label != after.generic_label}
    assert sing_after <= sing_before


@pytest.mark.parametrize("name", FAST)
def test_fixture_partition_sampled(name):
    sf, _, _ = load(name)
    S = system(name)
    rng = random.Random(11)
    for _ in range(60):
        pt = random_point(sf.params, rng)
        hits = S.cases_at(pt)
        assert len(hits) == 1
        assert frozenset(hits[0].lpp) == specialized_lpps(sf, pt)


# --- comprehensive bases -------------------------------------------------------

@pytest.mark.parametrize("name", ["s02", "s05", "s10_robot", "s12"])
def test_preimages_specialize_to_case_basis(name):
    sf, c, B = load(name)
    S = system(name)
    I = groebner(B, c.S)
    wits = witness_points(sf, S)
    for v in is_cgb(I, S).failures:
        case = S.case(v.label)
        for g in case.basis:
            h = preimage(g, case.sigma, B, c, I)
            assert not normal_form(h, I)
            if v.label not in wits:
                continue
            pt = wits[v.label]
            eh, eg = c.specialize(h, pt), c.specialize(g, pt)
            if eg.is_zero():
                continue
            assert not eh.is_zero()
            assert eh == eg.scale(eh.lc / eg.lc)


@pytest.mark.parametrize("name", ["s02", "s05", "s12"])
def test_cgb_on_failing_fixtures(name):
    _, c, B = load(name)
    S = system(name)
    B0 = groebner(B, c.S)
    assert not is_cgb(B0, S).is_cgb
    basis, rounds = cgb(B0, S, B)
    assert is_cgb(basis, S).is_cgb
    assert all(not normal_form(h, B0) for h in basis)
