from fractions import Fraction

from paramgb.polycore import Ring, VariableContext
from paramgb.specs import (
    Specification, canspec, empty_spec, equivalent_reduced, is_decided, pnormalform,
    point_satisfies, strip_w,
)

Ra = Ring(["a"])
ctx = VariableContext(["x", "y"], ["a"])
A = Ra.parse


def test_canspec_redundant_condition_kept():
    s = canspec(Ra, [A("a^2-1")], [A("a")])
    assert s.N == (A("a^2-1"),)
    assert s.W == (A("a"),)


def test_canspec_incompatible():
    assert canspec(Ra, [A("a")], [A("a")]) is None
    assert canspec(Ra, [Ra.one], []) is None
    assert canspec(Ra, [], [Ra.zero]) is None


def test_canspec_drops_factor_in_w():
    # a^2*(a+2) with a+2 nonzero leaves a; a+2 is then the constant 2 modulo a
    s = canspec(Ra, [A("a^2*(a+2)")], [A("a+2")])
    assert s.N == (A("a"),)
    assert s.W == ()


def test_canspec_coprime_w():
    R = Ring(["a", "b"])
    s = canspec(R, [], [R.parse("a^2-1"), R.parse("a-1"), R.parse("3*b")])
    assert set(s.W) == {R.parse("a-1"), R.parse("a+1"), R.parse("b")}


def test_canspec_is_idempotent_on_examples():
    R = Ring(["r", "z", "l"])
    s = canspec(R, [R.parse("l*(z^2+r^2)^2"), R.parse("l^2")], [R.parse("l^2-1"), R.parse("z")])
    assert canspec(R, s.N, s.W) == s


def test_specification_printing():
    s = canspec(Ra, [A("a^2-1")], [A("a")])
    assert str(s) == "(N = [a^2 - 1], W = {a})"
    assert str(empty_spec(Ra)) == "(N = [], W = {})"


def test_pnormalform_examples():
    s1 = canspec(Ra, [A("a-1")], [])
    assert pnormalform(ctx.parse("(a^2-1)*x + a*y"), s1, ctx) == ctx.parse("y")
    s2 = canspec(Ra, [], [A("a")])
    assert pnormalform(ctx.parse("a^2*x"), s2, ctx) == ctx.parse("x")
    f = ctx.parse("-4*a*x + 6*y")
    assert pnormalform(f, empty_spec(Ra), ctx) == f.normalized()


def test_pnormalform_keeps_undecided_content():
    s = canspec(Ra, [], [A("a+1")])
    assert pnormalform(ctx.parse("a*(a+1)*x"), s, ctx) == ctx.parse("a*x")


def test_equivalent_reduced_examples():
    R = Ring(["a", "b", "c"])
    c3 = VariableContext(["x"], ["a", "b", "c"])
    s = canspec(R, [R.parse(t) for t in ("a*b-c", "a*c-b", "b^2-c^2")], [])
    f, g = c3.parse("a*x+c^2"), c3.parse("c*x+c^2*b")
    assert equivalent_reduced(f, g, s, c3)
    assert not equivalent_reduced(c3.parse("x"), c3.parse("x+1"), s, c3)
    assert equivalent_reduced(f, f, s, c3)
    c2 = VariableContext(["x", "y"], [])
    e = canspec(c2.R, [], [])
    assert not equivalent_reduced(c2.parse("x"), c2.parse("y"), e, c2)


def test_point_satisfies_examples():
    R = Ring(["r", "z", "l"])
    s = canspec(R, [R.parse("l"), R.parse("r^2+z^2-1")], [])
    assert point_satisfies({"l": 0, "r": Fraction(3, 5), "z": Fraction(4, 5)}, s)
    assert not point_satisfies({"l": 1, "r": 1, "z": 1}, canspec(R, [R.parse("l")], []))
    assert point_satisfies({"l": 7, "r": "1/2", "z": -3}, empty_spec(R))


def test_generic_specification_is_disjunctive():
    R = Ring(["a", "b"])
    s = Specification(R, (), (R.parse("a"), R.parse("b")), True)
    assert point_satisfies({"a": 0, "b": 1}, s)
    assert not point_satisfies({"a": 0, "b": 0}, s)


def test_strip_and_decided():
    R = Ring(["a", "b"])
    W = (R.parse("a"), R.parse("b-1"))
    assert strip_w(R.parse("3*a^2*(b-1)"), W).is_constant()
    assert strip_w(R.parse("a*b"), W) == R.parse("b")
    s = canspec(R, [], W)
    assert is_decided(R.parse("a^3"), s)
    assert not is_decided(R.parse("a+b"), s)
    assert is_decided(R.const(5), s)
