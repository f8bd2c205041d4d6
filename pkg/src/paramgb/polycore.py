"""Exact multivariate polynomials over QQ.

Polynomials are sparse maps from exponent tuples to ``gmpy2.mpq``
coefficients, tied to a :class:`Ring` that fixes the variable names and
the monomial order.  Values are immutable once built.

The gcd machinery works on integer-coefficient dictionaries and uses the
primitive polynomial remainder sequence over a recursive view of the
polynomial (one main variable, coefficients in the others).
"""

from __future__ import annotations

import heapq
import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

__all__ = [
    "MonomialOrder", "LEX", "GRLEX", "GREVLEX", "order_from_name", "product_order",
    "Ring", "Poly", "RationalFunction", "VariableContext", "PolyParseError",
    "to_mpq", "normal_form", "spoly", "gcd", "gcd_list", "lcm", "exact_div",
    "squarefree_part", "coprime_factor_basis", "mono_divides", "mono_lcm",
    "mono_mul", "mono_div", "format_monomial",
]

_add = operator.add
_sub = operator.sub
ZERO = mpq(0)
ONE = mpq(1)


def to_mpq(value) -> mpq:
    """Coerce int, Fraction, mpq or a rational literal string to ``mpq``."""
    if isinstance(value, str):
        f = Fraction(value.strip())
        return mpq(f.numerator, f.denominator)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    return mpq(value)


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_mul(a, b):
    return tuple(map(_add, a, b))


def mono_div(a, b):
    return tuple(map(_sub, a, b))


def mono_divides(a, b) -> bool:
    """True when monomial ``a`` divides ``b``."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a, b):
    return tuple(map(max, a, b))


def mono_gcd(a, b):
    return tuple(map(min, a, b))


def format_monomial(exps, names) -> str:
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

def _grlex_key(e):
    return (sum(e), e)


def _grevlex_key(e):
    return (sum(e), tuple([-x for x in reversed(e)]))


def _neg_flat(k, out):
    for x in k:
        if isinstance(x, tuple):
            _neg_flat(x, out)
        else:
            out.append(-x)
    return out


def _heap_keyfunc(key):
    """Flat key whose ascending order is the descending monomial order."""
    if key is None:
        return lambda e: tuple([-x for x in e])
    return lambda e: tuple(_neg_flat(key(e), []))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``lex``, ``grlex``, ``grevlex`` or a block ``product``.

    A product order carries ``blocks``: pairs ``(inner order, block size)``,
    compared block by block from the first.
    """

    kind: str
    blocks: tuple = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex", "product"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if (self.kind == "product") != bool(self.blocks):
            raise ValueError("product orders need blocks, simple orders must not have them")

    @property
    def is_lex(self) -> bool:
        if self.kind == "lex":
            return True
        return self.kind == "product" and all(o.is_lex for o, _ in self.blocks)

    def keyfunc(self):
        """Sort key on exponent tuples, or None when plain tuple order is the order."""
        if self.is_lex:
            return None
        if self.kind == "grlex":
            return _grlex_key
        if self.kind == "grevlex":
            return _grevlex_key
        parts = []
        start = 0
        for inner, size in self.blocks:
            k = inner.keyfunc()
            parts.append((start, start + size, k))
            start += size

        def key(e):
            return tuple([(e[s:t] if k is None else k(e[s:t])) for s, t, k in parts])

        return key

    def __str__(self):
        if self.kind != "product":
            return self.kind
        return "product(" + ", ".join(f"{o}:{n}" for o, n in self.blocks) + ")"


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")


def order_from_name(name: str) -> MonomialOrder:
    try:
        return {"lex": LEX, "grlex": GRLEX, "grevlex": GREVLEX}[name]
    except KeyError:
        raise ValueError(f"unknown monomial order {name!r}") from None


def product_order(*blocks) -> MonomialOrder:
    """Block order from ``(order, size)`` pairs; empty blocks are dropped."""
    blocks = tuple((o, n) for o, n in blocks if n > 0)
    if len(blocks) == 1:
        return blocks[0][0]
    return MonomialOrder("product", blocks)


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*\Z")


class Ring:
    """Polynomial ring QQ[names] with a fixed monomial order."""

    __slots__ = ("names", "order", "key", "hkey", "index", "nvars", "zero_exp", "_hash")

    def __init__(self, names: Sequence[str], order: MonomialOrder = LEX):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for n in names:
            if not _NAME_RE.match(n):
                raise ValueError(f"bad variable name {n!r}")
        self.names = names
        self.order = order
        self.key = order.keyfunc()
        self.hkey = _heap_keyfunc(self.key)
        self.index = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.zero_exp = (0,) * len(names)
        self._hash = hash((names, order))

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Ring) and self.names == other.names and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Ring({', '.join(self.names)}; {self.order})"

    @property
    def zero(self) -> "Poly":
        return Poly._raw(self, {})

    @property
    def one(self) -> "Poly":
        return Poly._raw(self, {self.zero_exp: ONE})

    def const(self, c) -> "Poly":
        c = to_mpq(c)
        return Poly._raw(self, {self.zero_exp: c} if c else {})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Poly._raw(self, {tuple(e): ONE})

    def gens(self) -> list["Poly"]:
        return [self.var(n) for n in self.names]

    def monomial(self, exps, coeff=1) -> "Poly":
        c = to_mpq(coeff)
        return Poly._raw(self, {tuple(exps): c} if c else {})

    def parse(self, text: str) -> "Poly":
        return _Parser(text, self).parse()

    def sort_key(self, exps):
        return exps if self.key is None else self.key(exps)

    def with_order(self, order: MonomialOrder) -> "Ring":
        return Ring(self.names, order)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Immutable sparse polynomial over QQ in a :class:`Ring`."""

    __slots__ = ("ring", "terms", "_lm", "_hash")

    def __init__(self, ring: Ring, terms: Mapping | None = None):
        clean = {}
        if terms:
            n = ring.nvars
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise ValueError("exponent vector length does not match ring")
                c = to_mpq(c)
                if c:
                    clean[m] = c
        self.ring = ring
        self.terms = clean
        self._lm = None
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._lm = None
        p._hash = None
        return p

    # -- basic accessors -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and self.ring.zero_exp in t)

    def constant_value(self) -> mpq:
        return self.terms.get(self.ring.zero_exp, ZERO)

    @property
    def lm(self):
        """Leading monomial (exponent tuple) under the ring order."""
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            key = self.ring.key
            self._lm = max(self.terms) if key is None else max(self.terms, key=key)
        return self._lm

    @property
    def lc(self) -> mpq:
        return self.terms[self.lm]

    @property
    def lt(self):
        m = self.lm
        return m, self.terms[m]

    def sorted_terms(self):
        """Terms in descending order."""
        key = self.ring.key
        items = list(self.terms.items())
        if key is None:
            items.sort(key=lambda t: t[0], reverse=True)
        else:
            items.sort(key=lambda t: key(t[0]), reverse=True)
        return items

    def monomials(self):
        return [m for m, _ in self.sorted_terms()]

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index[var]
        return max((m[i] for m in self.terms), default=-1)

    def used_vars(self) -> set[int]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def used_names(self) -> set[str]:
        return {self.ring.names[i] for i in self.used_vars()}

    # -- comparison ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is type(ONE):
            return self.terms == ({self.ring.zero_exp: to_mpq(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        d = dict(a)
        for m, c in b.items():
            v = d.get(m, ZERO) + c
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Poly._raw(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = dict(self.terms)
        for m, c in other.terms.items():
            v = d.get(m, ZERO) - c
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Poly._raw(self.ring, d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                c = to_mpq(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        d = {}
        get = d.get
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(map(_add, m1, m2))
                d[m] = get(m, ZERO) + c1 * c2
        return Poly._raw(self.ring, {m: c for m, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        c = to_mpq(c)
        if not c:
            return self.ring.zero
        return Poly._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, exps, c=ONE) -> "Poly":
        if not c:
            return self.ring.zero
        return Poly._raw(self.ring, {tuple(map(_add, m, exps)): v * c for m, v in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if other.is_constant() and other:
                return self.scale(1 / other.constant_value())
            return exact_div(self, other)
        return self.scale(1 / to_mpq(other))

    # -- normalization -------------------------------------------------------
    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(1 / self.lc)

    def integer_content(self) -> mpq:
        """Positive rational c such that self / c is primitive over ZZ."""
        if not self.terms:
            return ONE
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, int(c.numerator))
            den = den * int(c.denominator) // math.gcd(den, int(c.denominator))
        return mpq(num, den)

    def normalized(self) -> "Poly":
        """Primitive over ZZ with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.integer_content()
        if self.lc < 0:
            c = -c
        if c == 1:
            return self
        return self.scale(1 / c)

    # -- calculus and substitution ------------------------------------------
    def diff(self, var) -> "Poly":
        i = var if isinstance(var, int) else self.ring.index[var]
        d = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                d[tuple(mm)] = c * e
        return Poly._raw(self.ring, d)

    def evaluate(self, point: Mapping[str, object], target: Ring | None = None) -> "Poly":
        """Substitute rationals for some variables.

        The result lives in ``target`` (by default the ring of the remaining
        variables with the inherited order restricted).  Every variable of the
        source ring that is absent from ``target`` must be assigned.
        """
        ring = self.ring
        vals = {ring.index[n]: to_mpq(v) for n, v in point.items() if n in ring.index}
        if target is None:
            keep = [n for n in ring.names if ring.index[n] not in vals]
            target = Ring(keep, ring.order if not vals else _restricted_order(ring, keep))
        tidx = [ring.index[n] for n in target.names]
        missing = [n for n in ring.names if n not in target.index and ring.index[n] not in vals]
        if missing:
            raise KeyError(f"no value assigned to {', '.join(missing)}")
        pos = [(i, v) for i, v in vals.items() if ring.names[i] not in target.index]
        d = {}
        for m, c in self.terms.items():
            for i, v in pos:
                if m[i]:
                    c = c * v ** m[i]
            if not c:
                continue
            mm = tuple(m[i] for i in tidx)
            d[mm] = d.get(mm, ZERO) + c
        return Poly._raw(target, {m: c for m, c in d.items() if c})

    def value_at(self, point: Mapping[str, object]) -> mpq:
        """Full evaluation to a rational number."""
        ring = self.ring
        vals = [to_mpq(point[n]) if n in point else None for n in ring.names]
        total = ZERO
        for m, c in self.terms.items():
            for v, e in zip(vals, m):
                if e:
                    if v is None:
                        raise KeyError("incomplete point")
                    c = c * v ** e
            total += c
        return total

    def to_ring(self, target: Ring) -> "Poly":
        """Re-express in a ring whose names include every used variable."""
        if target == self.ring:
            return self
        src = self.ring
        idx = []
        for i, n in enumerate(src.names):
            j = target.index.get(n)
            idx.append(j)
        used = self.used_vars()
        for i in used:
            if idx[i] is None:
                raise ValueError(f"variable {src.names[i]} is not in target ring")
        d = {}
        n = target.nvars
        for m, c in self.terms.items():
            e = [0] * n
            for i, x in enumerate(m):
                if x:
                    e[idx[i]] = x
            d[tuple(e)] = c
        return Poly._raw(target, d)

    # -- printing --------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        out = []
        for m, c in self.sorted_terms():
            neg = c < 0
            a = -c if neg else c
            mono = format_monomial(m, names)
            if mono == "1":
                body = _fmt_rat(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_rat(a)}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"


def _fmt_rat(c) -> str:
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"{int(c.numerator)}/{int(c.denominator)}"


def _restricted_order(ring: Ring, keep):
    """Order on a subset of variables induced by the ring order (blocks shrink)."""
    order = ring.order
    if order.kind != "product":
        return order
    keepset = set(keep)
    blocks = []
    start = 0
    for inner, size in order.blocks:
        names = ring.names[start:start + size]
        blocks.append((inner, sum(1 for n in names if n in keepset)))
        start += size
    return product_order(*blocks)


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def normal_form(f: Poly, G: Sequence[Poly], cofactors: bool = False):
    """Full multivariate division of ``f`` by ``G`` under the ring order.

    Returns the remainder, or ``(remainder, quotients)`` when ``cofactors``
    is set, with ``f == sum(q*g) + remainder`` exactly.
    """
    ring = f.ring
    hkey = ring.hkey
    red = []
    for g in G:
        if not g.terms:
            raise ValueError("division by the zero polynomial")
        lm = g.lm
        red.append(([(i, e) for i, e in enumerate(lm) if e], lm, g.terms[lm], g.terms))
    p = dict(f.terms)
    r = {}
    quots = [dict() for _ in G] if cofactors else None
    # max-heap of the live monomials of p, stale entries are skipped
    heap = [(hkey(m), m) for m in p]
    heapq.heapify(heap)
    while heap:
        m = heapq.heappop(heap)[1]
        c = p.get(m)
        if c is None:
            continue
        for gi, (nz, lm, lc, gt) in enumerate(red):
            for i, e in nz:
                if m[i] < e:
                    break
            else:
                q = tuple(map(_sub, m, lm))
                coef = c / lc
                for mm, cc in gt.items():
                    t = tuple(map(_add, mm, q))
                    old = p.get(t)
                    if old is None:
                        p[t] = -coef * cc
                        heapq.heappush(heap, (hkey(t), t))
                        continue
                    v = old - coef * cc
                    if v:
                        p[t] = v
                    else:
                        del p[t]
                if cofactors:
                    qd = quots[gi]
                    v = qd.get(q, ZERO) + coef
                    if v:
                        qd[q] = v
                    else:
                        qd.pop(q, None)
                break
        else:
            r[m] = c
            del p[m]
    rem = Poly._raw(ring, r)
    if cofactors:
        return rem, [Poly._raw(ring, q) for q in quots]
    return rem


def spoly(f: Poly, g: Poly) -> Poly:
    """S-polynomial ``(L/lt(f))*f - (L/lt(g))*g`` with ``L`` the lcm of the leading monomials."""
    L = mono_lcm(f.lm, g.lm)
    return f.mul_term(mono_div(L, f.lm), 1 / f.lc) - g.mul_term(mono_div(L, g.lm), 1 / g.lc)


# ---------------------------------------------------------------------------
# integer-dict gcd kernel
# ---------------------------------------------------------------------------
# Dictionaries map full-length exponent tuples to Python ints.  Every helper
# expects and returns ZZ-primitive data unless stated otherwise.

def _to_int_dict(p: Poly) -> dict:
    c = p.integer_content()
    return {m: int(v / c) for m, v in p.terms.items()}


def _icontent(d) -> int:
    g = 0
    for v in d.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


def _iprim(d) -> dict:
    g = _icontent(d)
    if g in (0, 1):
        return d
    return {m: v // g for m, v in d.items()}


def _dmul(a, b):
    d = {}
    get = d.get
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(map(_add, m1, m2))
            d[m] = get(m, 0) + c1 * c2
    return {m: c for m, c in d.items() if c}


def _dsub(a, b):
    d = dict(a)
    for m, c in b.items():
        v = d.get(m, 0) - c
        if v:
            d[m] = v
        else:
            d.pop(m, None)
    return d


def _dscale(a, k):
    return {m: c * k for m, c in a.items()}


def _dexact(f, g):
    """Exact quotient f/g over ZZ (lex division), or None when not exact."""
    lg = max(g)
    cg = g[lg]
    nz = [(i, e) for i, e in enumerate(lg) if e]
    r = dict(f)
    q = {}
    while r:
        m = max(r)
        for i, e in nz:
            if m[i] < e:
                return None
        c, rem = divmod(r[m], cg)
        if rem:
            return None
        e = tuple(map(_sub, m, lg))
        q[e] = c
        for mm, cc in g.items():
            t = tuple(map(_add, mm, e))
            v = r.get(t, 0) - c * cc
            if v:
                r[t] = v
            else:
                del r[t]
    return q


def _dvars(d):
    used = set()
    for m in d:
        for i, e in enumerate(m):
            if e:
                used.add(i)
    return used


def _is_const(d):
    return len(d) == 1 and not any(next(iter(d)))


def _one_like(d):
    n = len(next(iter(d)))
    return {(0,) * n: 1}


def _mono_gcd_dict(mono, d):
    e = list(mono)
    for m in d:
        for i, x in enumerate(m):
            if x < e[i]:
                e[i] = x
    return {tuple(e): 1}


def _uni(d, v):
    """Split into {k: coefficient dict with variable v removed}."""
    out = {}
    for m, c in d.items():
        k = m[v]
        if k:
            mm = list(m)
            mm[v] = 0
            mm = tuple(mm)
        else:
            mm = m
        out.setdefault(k, {})[mm] = c
    return out


def _from_uni(u, v):
    d = {}
    for k, cd in u.items():
        for m, c in cd.items():
            if k:
                mm = list(m)
                mm[v] = k
                m = tuple(mm)
            d[m] = c
    return d


def _dgcd_list(ds):
    ds = sorted(ds, key=len)
    g = ds[0]
    for d in ds[1:]:
        if _is_const(g):
            break
        g = _dgcd(g, d)
    return _iprim(g)


def _dgcd(f, g):
    """gcd of two nonzero integer polynomials, ZZ-primitive, sign arbitrary."""
    f = _iprim(f)
    g = _iprim(g)
    if len(f) == 1:
        return _mono_gcd_dict(next(iter(f)), g)
    if len(g) == 1:
        return _mono_gcd_dict(next(iter(g)), f)
    if f == g:
        return f
    vf = _dvars(f)
    vg = _dvars(g)
    common = vf & vg
    if not common:
        return _one_like(f)
    # variables occurring in only one argument: the gcd divides that side's
    # content with respect to those variables
    only_f = vf - common
    if only_f:
        return _dgcd(_content_wrt(f, only_f), g)
    only_g = vg - common
    if only_g:
        return _dgcd(f, _content_wrt(g, only_g))
    v = min(common, key=lambda i: (max(m[i] for m in f) + max(m[i] for m in g), i))
    fu = _uni(f, v)
    gu = _uni(g, v)
    cf = _dgcd_list(list(fu.values()))
    cg = _dgcd_list(list(gu.values()))
    c = _dgcd(cf, cg)
    if not _is_const(cf):
        fu = {k: _dexact(x, cf) for k, x in fu.items()}
    if not _is_const(cg):
        gu = {k: _dexact(x, cg) for k, x in gu.items()}
    A, B = (fu, gu) if max(fu) >= max(gu) else (gu, fu)
    while True:
        if max(B) == 0:
            H = None
            break
        R = _prem(A, B)
        if not R:
            H = B
            break
        if max(R) == 0:
            H = None
            break
        cr = _dgcd_list(list(R.values()))
        if not _is_const(cr):
            R = {k: _dexact(x, cr) for k, x in R.items()}
        k = 0
        for x in R.values():
            k = math.gcd(k, _icontent(x))
            if k == 1:
                break
        if k > 1:
            R = {j: {m: c // k for m, c in x.items()} for j, x in R.items()}
        A, B = B, R
    if H is None:
        return c
    h = _iprim(_from_uni(H, v))
    if _is_const(c):
        return h
    return _iprim(_dmul(c, h))


def _content_wrt(d, variables):
    """gcd of the coefficients of d seen as a polynomial in ``variables``."""
    groups = {}
    for m, c in d.items():
        key = tuple(m[i] for i in variables)
        mm = list(m)
        for i in variables:
            mm[i] = 0
        groups.setdefault(key, {})[tuple(mm)] = c
    return _dgcd_list(list(groups.values()))


def _prem(A, B):
    dB = max(B)
    lB = B[dB]
    R = dict(A)
    while R:
        dR = max(R)
        if dR < dB:
            break
        lR = R[dR]
        new = {k: _dmul(lB, c) for k, c in R.items()}
        shift = dR - dB
        for k, c in B.items():
            kk = k + shift
            t = _dsub(new.get(kk, {}), _dmul(lR, c))
            if t:
                new[kk] = t
            else:
                new.pop(kk, None)
        R = new
    return R


def _from_int_dict(ring, d) -> Poly:
    return Poly._raw(ring, {m: mpq(c) for m, c in d.items()})


# ---------------------------------------------------------------------------
# public gcd-based operations
# ---------------------------------------------------------------------------

def gcd(p: Poly, q: Poly) -> Poly:
    """Normalized greatest common divisor (primitive, positive lc)."""
    if p.ring != q.ring:
        raise ValueError("ring mismatch")
    if not p.terms:
        return q.normalized()
    if not q.terms:
        return p.normalized()
    if p.is_constant() or q.is_constant():
        return p.ring.one
    return _from_int_dict(p.ring, _dgcd(_to_int_dict(p), _to_int_dict(q))).normalized()


def gcd_list(polys: Iterable[Poly], ring: Ring | None = None) -> Poly:
    polys = [p for p in polys if p.terms]
    if not polys:
        if ring is None:
            raise ValueError("gcd of an empty list needs a ring")
        return ring.zero
    r = polys[0].ring
    if any(p.is_constant() for p in polys):
        return r.one
    return _from_int_dict(r, _dgcd_list([_to_int_dict(p) for p in polys])).normalized()


def exact_div(p: Poly, q: Poly) -> Poly:
    """Exact quotient p/q; raises ``ArithmeticError`` when q does not divide p."""
    if not q.terms:
        raise ZeroDivisionError("polynomial division by zero")
    if q.is_constant():
        return p.scale(1 / q.constant_value())
    if not p.terms:
        return p
    cp = p.integer_content()
    cq = q.integer_content()
    d = _dexact(_to_int_dict(p), _to_int_dict(q))
    if d is None:
        raise ArithmeticError(f"{q} does not divide {p}")
    return _from_int_dict(p.ring, d).scale(cp / cq)


def divides(q: Poly, p: Poly) -> bool:
    try:
        exact_div(p, q)
    except ArithmeticError:
        return False
    return True


def lcm(p: Poly, q: Poly) -> Poly:
    if not p.terms or not q.terms:
        return p.ring.zero
    return exact_div(p * q, gcd(p, q)).normalized()


def squarefree_part(p: Poly) -> Poly:
    """Product of the distinct irreducible factors of p, normalized."""
    if not p.terms:
        raise ValueError("squarefree part of zero")
    if p.is_constant():
        return p.ring.one
    return _from_int_dict(p.ring, _dsqf(_to_int_dict(p))).normalized()


def _dsqf(d):
    used = _dvars(d)
    if not used:
        return _one_like(d)
    if len(d) == 1:
        m = next(iter(d))
        return {tuple(1 if e else 0 for e in m): 1}
    v = min(used)
    u = _uni(d, v)
    cont = _dgcd_list(list(u.values()))
    pp = d if _is_const(cont) else _dexact(d, cont)
    dp = {}
    for m, c in pp.items():
        if m[v]:
            mm = list(m)
            mm[v] -= 1
            dp[tuple(mm)] = c * m[v]
    g = _dgcd(pp, dp)
    s = pp if _is_const(g) else _dexact(pp, g)
    if _is_const(cont):
        return _iprim(s)
    return _iprim(_dmul(_dsqf(cont), s))


def coprime_factor_basis(polys: Iterable[Poly]) -> list[Poly]:
    """Pairwise coprime squarefree nonconstant polynomials generating the
    same multiplicative structure as ``polys`` up to units (gcd-free basis)."""
    basis: list[Poly] = []

    def add(q: Poly):
        if q.is_constant():
            return
        for i, b in enumerate(basis):
            if b == q:
                return
            g = gcd(q, b)
            if not g.is_constant():
                pieces = [x.normalized() for x in (g, exact_div(b, g)) if not x.is_constant()]
                basis[i:i + 1] = pieces
                add(exact_div(q, g).normalized())
                return
        basis.append(q)

    for p in polys:
        if not p.terms:
            raise ValueError("coprime basis of a set containing zero")
        add(squarefree_part(p))
    return sort_polys(basis)


def poly_sort_key(p: Poly):
    """Deterministic key: ascending by leading monomial then full term list."""
    ring = p.ring
    return tuple((ring.sort_key(m), c) for m, c in p.sorted_terms())


def sort_polys(polys: Iterable[Poly]) -> list[Poly]:
    return sorted(polys, key=poly_sort_key)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RationalFunction:
    """Reduced quotient of two polynomials in the same ring.

    The denominator is primitive over ZZ with positive leading coefficient and
    shares no nonconstant factor with the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = num.ring.one
        if not den.terms:
            raise ZeroDivisionError("zero denominator")
        if not num.terms:
            self.num, self.den = num, num.ring.one
            return
        if not den.is_constant():
            g = gcd(num, den)
            if not g.is_constant():
                num = exact_div(num, g)
                den = exact_div(den, g)
        c = den.integer_content()
        if den.lc < 0:
            c = -c
        self.num = num.scale(1 / c)
        self.den = den.scale(1 / c)

    @property
    def ring(self):
        return self.num.ring

    def __bool__(self):
        return bool(self.num.terms)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _as_rf(other, self.ring)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        other = _as_rf(other, self.ring)
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        other = _as_rf(other, self.ring)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = _as_rf(other, self.ring)
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        n = str(self.num)
        if len(self.num) > 1:
            n = f"({n})"
        d = str(self.den)
        if len(self.den) > 1 or not self.den.lc == 1:
            d = f"({d})"
        return f"{n}/{d}"

    __repr__ = __str__


def _as_rf(x, ring) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction(ring.const(x))


# ---------------------------------------------------------------------------
# variable contexts: the x-block / a-block split
# ---------------------------------------------------------------------------

class VariableContext:
    """Variables ``xvars`` and parameters ``avars`` with their block orders.

    Rings:
      * ``S``: QQ[x, a] with the product order (x-block first);
      * ``R``: QQ[a] with the parameter order;
      * ``X``: QQ[x] with the variable order.
    """

    def __init__(self, xvars, avars=(), ordx: MonomialOrder = LEX, orda: MonomialOrder = LEX):
        self.xvars = tuple(xvars)
        self.avars = tuple(avars)
        if set(self.xvars) & set(self.avars):
            raise ValueError("variables and parameters must be distinct")
        if not self.xvars:
            raise ValueError("at least one variable is required")
        self.ordx = ordx
        self.orda = orda
        self.n = len(self.xvars)
        self.m = len(self.avars)
        self.S = Ring(self.xvars + self.avars, product_order((ordx, self.n), (orda, self.m)))
        self.R = Ring(self.avars, orda)
        self.X = Ring(self.xvars, ordx)
        self._xkey = ordx.keyfunc()

    def __eq__(self, other):
        return isinstance(other, VariableContext) and (
            self.xvars, self.avars, self.ordx, self.orda) == (other.xvars, other.avars, other.ordx, other.orda)

    def __hash__(self):
        return hash((self.xvars, self.avars, self.ordx, self.orda))

    def __repr__(self):
        return f"VariableContext(x={self.xvars}, a={self.avars}, {self.ordx}/{self.orda})"

    def xkey(self, xexp):
        return xexp if self._xkey is None else self._xkey(xexp)

    # S <-> dict{x-exponent: R-poly}
    def split(self, f: Poly) -> dict:
        n = self.n
        R = self.R
        out = {}
        for m, c in f.terms.items():
            out.setdefault(m[:n], {})[m[n:]] = c
        return {k: Poly._raw(R, v) for k, v in out.items()}

    def join(self, coeffs: Mapping) -> Poly:
        d = {}
        for xm, c in coeffs.items():
            for am, v in c.terms.items():
                d[xm + am] = v
        return Poly._raw(self.S, d)

    def embed(self, p: Poly) -> Poly:
        """R- or X-polynomial into S."""
        if p.ring == self.S:
            return p
        if p.ring == self.R:
            z = (0,) * self.n
            return Poly._raw(self.S, {z + m: c for m, c in p.terms.items()})
        if p.ring == self.X:
            z = (0,) * self.m
            return Poly._raw(self.S, {m + z: c for m, c in p.terms.items()})
        return p.to_ring(self.S)

    def to_R(self, p: Poly) -> Poly:
        """S-polynomial free of x into R."""
        n = self.n
        d = {}
        for m, c in p.terms.items():
            if any(m[:n]):
                raise ValueError(f"{p} involves variables, not only parameters")
            d[m[n:]] = c
        return Poly._raw(self.R, d)

    def lpp(self, f: Poly):
        """Leading power product in the x-variables."""
        return f.lm[:self.n]

    def lc(self, f: Poly) -> Poly:
        """Leading coefficient in R with respect to the x-variables."""
        lp = self.lpp(f)
        n = self.n
        return Poly._raw(self.R, {m[n:]: c for m, c in f.terms.items() if m[:n] == lp})

    def specialize(self, f: Poly, point: Mapping[str, object]) -> Poly:
        """Substitute a parameter point; the result lives in X."""
        missing = [a for a in self.avars if a not in point]
        if missing:
            raise KeyError(f"no value assigned to {', '.join(missing)}")
        return f.evaluate({a: point[a] for a in self.avars}, self.X)

    def parse(self, text: str) -> Poly:
        return self.S.parse(text)

    def format_lpp(self, xexp) -> str:
        return format_monomial(xexp, self.xvars)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class PolyParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based offending column."""

    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at column {pos + 1}")
        self.message = message
        self.pos = pos
        self.text = text


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(.))")


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos and not m.group(0):
                break
            num, name, other = m.groups()
            if num is None and name is None and other is None:
                break
            start = m.start(1) if num else m.start(2) if name else m.start(3)
            if num is not None:
                self.tokens.append(("num", num, start))
            elif name is not None:
                self.tokens.append(("name", name, start))
            else:
                if other not in "+-*/^()":
                    raise PolyParseError(f"unexpected character {other!r}", start, text)
                self.tokens.append((other, other, start))
            pos = m.end()
        self.tokens.append(("end", "", len(text.rstrip())))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise PolyParseError(msg, tok[2], self.text)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            if tok[0] in ("num", "name", "("):
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected {tok[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            q = self.unary()
            if op[0] == "*":
                p = p * q
            else:
                if not q.is_constant() or not q:
                    raise PolyParseError("division only by a nonzero constant", op[2], self.text)
                p = p.scale(1 / q.constant_value())
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                self.error("expected an integer exponent")
            self.take()
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "num":
            self.take()
            return self.ring.const(int(tok[1]))
        if kind == "name":
            self.take()
            if tok[1] not in self.ring.index:
                self.error(f"unknown name {tok[1]!r}", tok)
            return self.ring.var(tok[1])
        if kind == "(":
            self.take()
            p = self.expr()
            if self.peek()[0] != ")":
                self.error("expected ')'")
            self.take()
            return p
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok[1]!r}")
