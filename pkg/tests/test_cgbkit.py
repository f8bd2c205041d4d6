import pytest

from corpus import generic, load, lpp_set, product_gb, system, weispfenning
from paramgb.cgbkit import (
    CgbGuardError, cgb, conjecture_report, generic_basis, is_cgb, preimage, principality_check,
    weispfenning_discriminant,
)
from paramgb.disptree import dispgb
from paramgb.idealkit import groebner, quotient
from paramgb.polycore import VariableContext, normal_form
from paramgb.specs import canspec, equivalent_reduced, pnormalform


def test_generic_basis_linear_example():
    _, c, _ = load("s00_linear")
    gb = generic("s00_linear")
    assert [str(g) for g in gb.G] == ["z + b/(a + 2)", "y + b/(a + 2)", "x + b/(a + 2)"]
    assert gb.d == [c.R.parse("a+2")] * 3
    assert gb.G2 == [c.parse(t) for t in ("(a+2)*z+b", "(a+2)*y+b", "(a+2)*x+b")]


def test_generic_basis_without_parameters():
    c = VariableContext(["x", "y"])
    B = [c.parse("x^2 - y"), c.parse("x*y - 1")]
    gb = generic_basis(B, c)
    assert all(d == c.R.one for d in gb.d)
    assert gb.G2 == [g.normalized() for g in groebner(B, c.S)]


def test_generic_basis_robot_matches_listing():
    _, c, _ = load("s10_robot")
    listed = [
        "2*l*c2+l^2+1-z^2-r^2",
        "4*l^2*s2^2+(l^2-1)^2-2*(l^2+1)*(r^2+z^2)+(z^2+r^2)^2",
        "2*(r^2+z^2)*c1-2*z*l*s2-r*(r^2+z^2-l^2+1)",
        "2*(r^2+z^2)*s1+2*l*r*s2+z*(l^2-r^2-z^2-1)",
    ]
    assert set(generic("s10_robot").G2) == {c.parse(t).normalized() for t in listed}
    assert set(system("s10_robot").case((1,)).basis) == set(generic("s10_robot").G2)


SATURATED = ("s03", "s05", "s07", "s09", "s10_robot", "s12", "s13")


@pytest.mark.parametrize("name", SATURATED)
def test_sub_lifting_lies_in_ideal(name):
    I = product_gb(name)
    assert all(not normal_form(g, I) for g in generic(name).G2)


@pytest.mark.parametrize("name", ["s00_linear", "s01", "s06", "s15", "s16_tensegrity"])
def test_sub_lifting_lies_in_ideal_up_to_parameters(name):
    # some nonzero parameter polynomial multiplies each g into I
    _, c, _ = load(name)
    I = product_gb(name)
    nx = len(c.xvars)
    for g in generic(name).G2:
        q = quotient(I, g, c.S)
        assert any(not any(h.lm[:nx]) and not h.is_zero() for h in q)


def test_weispfenning_examples():
    _, c, _ = load("s00_linear")
    assert weispfenning("s00_linear") == [c.R.parse("(a+2)*(a-1)")]
    _, c, _ = load("s10_robot")
    assert weispfenning("s10_robot") == [c.R.parse("l*(z^2+r^2)")]
    c0 = VariableContext(["x"])
    assert weispfenning_discriminant([c0.parse("x^2-1")], c0) == [c0.R.one]


def test_principality_examples():
    _, c, _ = load("s10_robot")
    principal, gen, cand, matches = principality_check(weispfenning("s10_robot"), generic("s10_robot"), c)
    assert principal and gen == c.R.parse("l*(z^2+r^2)") and matches
    principal, gen, _, _ = principality_check(weispfenning("s16_tensegrity"), generic("s16_tensegrity"),
                                              load("s16_tensegrity")[1])
    assert not principal and gen is None
    _, c, _ = load("s00_linear")
    principal, gen, cand, matches = principality_check(weispfenning("s00_linear"), generic("s00_linear"), c)
    assert principal and gen == c.R.parse("(a+2)*(a-1)")
    # the ideal is not prime: the denominators alone miss the factor a-1
    assert cand == c.R.parse("a+2") and not matches


def test_conjecture_examples():
    for name in ("s10_robot", "s16_tensegrity", "s00_linear"):
        c = load(name)[1]
        assert conjecture_report(weispfenning(name), system(name).discriminant, c) == (True, True)


def test_is_cgb_robot_listing():
    S = system("s10_robot")
    rep = is_cgb(product_gb("s10_robot"), S)
    assert not rep.is_cgb
    assert {v.label for v in rep.failures} == {(0, 1, 1, 1), (0, 1, 0, 1)}
    c = S.ctx
    first = next(v for v in rep.cases if v.label == (0, 1, 1, 1))
    assert set(first.specialized_lpp) == lpp_set(c, "s1 s2 s2*c1 s2*s1 c2*s1 c2 s1^2 s2^2")
    line = rep.lines(c)[1]
    assert line.startswith("[[0,1,1,1], {") and line.endswith("{c2, s2, c1, s1}, false]")


def test_is_cgb_true_cases():
    assert is_cgb(product_gb("s16_tensegrity"), system("s16_tensegrity")).is_cgb
    c = VariableContext(["x", "y"])
    B = [c.parse("x^2 - y"), c.parse("x*y - 1")]
    S = dispgb(B, c)
    assert len(S.cases) == 1
    assert is_cgb(groebner(B, c.S), S).is_cgb


def test_preimage_short_circuit():
    _, c, B = load("s10_robot")
    g = product_gb("s10_robot")[0].normalized()
    sigma = system("s10_robot").case((1,)).sigma
    assert preimage(g, sigma, B, c) == pnormalform(g, sigma, c)


def test_preimage_toy_membership():
    c = VariableContext(["x", "y"], ["a"])
    B = [c.parse("x - a*y*x"), c.parse("a")]
    sigma = canspec(c.R, [c.R.parse("a")], [])
    h = preimage(c.parse("x"), sigma, B, c)
    assert not normal_form(h, groebner(B, c.S))
    assert equivalent_reduced(pnormalform(h, sigma, c), c.parse("x"), sigma, c)


def test_preimages_robot_failing_case():
    _, c, B = load("s10_robot")
    case = system("s10_robot").case((0, 1, 1, 1))
    I = product_gb("s10_robot")
    for g in case.basis:
        h = preimage(g, case.sigma, B, c, I)
        assert not normal_form(h, I)
        assert equivalent_reduced(pnormalform(h, case.sigma, c), pnormalform(g, case.sigma, c), case.sigma, c)


def test_cgb_robot():
    S = system("s10_robot")
    B0 = product_gb("s10_robot")
    basis, rounds = cgb(B0, S, load("s10_robot")[2])
    assert rounds >= 1 and len(basis) > len(B0)
    assert is_cgb(basis, S).is_cgb
    I = B0
    assert all(not normal_form(h, I) for h in basis)


def test_cgb_unchanged_cases():
    B0 = product_gb("s16_tensegrity")
    basis, rounds = cgb(B0, system("s16_tensegrity"))
    assert rounds == 0 and basis == [b.normalized() for b in B0]
    c = VariableContext(["x"])
    B = [c.parse("x^2 - 2")]
    basis, rounds = cgb(groebner(B, c.S), dispgb(B, c))
    assert rounds == 0 and basis == [c.parse("x^2-2")]


def test_cgb_guard():
    S = system("s10_robot")
    with pytest.raises(CgbGuardError):
        cgb(product_gb("s10_robot"), S, load("s10_robot")[2], max_iter=0)
