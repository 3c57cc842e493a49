"""Buchberger's algorithm, normal forms, elimination and saturation.

Internally polynomials are lists of ``[exponent, int]`` pairs sorted in
decreasing term order with coprime integer coefficients; the public surface
speaks ``MPoly`` with monic rational bases.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .exactpoly import MPoly, UnknownVariableError

log = logging.getLogger(__name__)


class ResourceLimitError(RuntimeError):
    """A configured S-pair or degree cap was exceeded."""


class UnitIdealError(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    max_pairs: int | None = None
    max_degree: int | None = None
    deadline: float | None = None      # time.monotonic() value

    @classmethod
    def limited(cls, max_pairs=None, max_degree=None, seconds=None):
        return cls(max_pairs, max_degree, None if seconds is None else time.monotonic() + seconds)

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError("time limit exceeded")


DEFAULT_CAPS = Caps()


# ---------------------------------------------------------------------------
# term orders


@dataclass(frozen=True)
class TermOrder:
    """``lex``, ``grevlex`` or ``block``.

    A block order compares the grevlex keys of consecutive variable blocks
    lexicographically, so any monomial touching the first block outranks
    every monomial free of it.
    """

    kind: str = "grevlex"
    blocks: tuple = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def elimination(cls, context: Sequence[str], drop: Iterable[str]):
        drop = set(drop)
        for v in drop:
            if v not in context:
                raise UnknownVariableError(v)
        first = tuple(i for i, v in enumerate(context) if v in drop)
        rest = tuple(i for i, v in enumerate(context) if v not in drop)
        return cls("block", (first, rest))

    def key_function(self):
        if self.kind == "lex":
            return lambda m: m
        if self.kind == "grevlex":
            return lambda m: (sum(m), tuple(-e for e in reversed(m)))
        blocks = self.blocks

        def key(m):
            out = []
            for b in blocks:
                sub = [m[i] for i in b]
                out.append(sum(sub))
                out.extend(-e for e in reversed(sub))
            return tuple(out)

        return key

    def eliminates(self) -> tuple:
        return self.blocks[0] if self.kind == "block" else ()


class _Order:
    """Memoized key access for one term order."""

    def __init__(self, order: TermOrder):
        self._key = order.key_function()
        self._memo = {}

    def key(self, m):
        k = self._memo.get(m)
        if k is None:
            k = self._memo[m] = self._key(m)
        return k


# ---------------------------------------------------------------------------
# internal integer polynomial helpers


def _to_internal(p: MPoly, order: _Order):
    from math import lcm

    den = 1
    for c in p.terms.values():
        den = lcm(den, c.denominator)
    terms = [[m, int(c * den)] for m, c in p.terms.items()]
    terms.sort(key=lambda t: order.key(t[0]), reverse=True)
    return _make_primitive(terms)


def _make_primitive(terms):
    if not terms:
        return terms
    g = 0
    for t in terms:
        g = gcd(g, t[1])
        if g == 1:
            break
    if terms[0][1] < 0:
        g = -g
    if g != 1:
        for t in terms:
            t[1] //= g
    return terms


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b):
    return all(not (x and y) for x, y in zip(a, b))


def _sub_scaled(p, a, q, b, shift, order: _Order):
    """Return ``a*p - b*x^shift*q`` as a sorted term list (p, q sorted)."""
    key = order.key
    out = []
    i = j = 0
    np_, nq = len(p), len(q)
    if shift is not None:
        qs = [(tuple(x + y for x, y in zip(m, shift)), c) for m, c in q]
    else:
        qs = q
    while i < np_ and j < nq:
        mp, cp = p[i]
        mq, cq = qs[j]
        if mp == mq:
            c = a * cp - b * cq
            if c:
                out.append([mp, c])
            i += 1
            j += 1
        elif key(mp) > key(mq):
            out.append([mp, a * cp])
            i += 1
        else:
            out.append([mq, -b * cq])
            j += 1
    while i < np_:
        mp, cp = p[i]
        out.append([mp, a * cp])
        i += 1
    while j < nq:
        mq, cq = qs[j]
        out.append([mq, -b * cq])
        j += 1
    return out


def _find_reducer(m, basis):
    for g in basis:
        lm = g[0][0]
        if all(x <= y for x, y in zip(lm, m)):
            return g
    return None


def _reduce(p, basis, order: _Order, full=True, caps=None):
    """Normal form of ``p`` modulo ``basis`` up to a positive rational factor.

    Returns ``(remainder, scale)`` with ``remainder == scale * NF(p)``.
    """
    scale = Fraction(1)
    rem = []
    steps = 0
    while p:
        m, c = p[0]
        g = _find_reducer(m, basis)
        if g is None:
            if not full:
                rem.extend(p)
                p = []
                break
            rem.append(p[0])
            p = p[1:]
            continue
        lc = g[0][1]
        d = gcd(lc, c)
        a, b = lc // d, c // d
        if a < 0:
            a, b = -a, -b
        shift = tuple(x - y for x, y in zip(m, g[0][0]))
        p = _sub_scaled(p[1:], a, g[1:], b, shift, order)
        if a != 1:
            for t in rem:
                t[1] *= a
            scale *= a
        steps += 1
        if caps is not None and steps % 64 == 0:
            caps.check_time()
        if steps % 16 == 0 and (rem or p):
            h = 0
            for t in itertools.chain(rem, p):
                h = gcd(h, t[1])
                if h == 1:
                    break
            if h > 1:
                for t in itertools.chain(rem, p):
                    t[1] //= h
                scale /= h
    return rem, scale


def _spoly(f, g, order: _Order):
    mf, cf = f[0]
    mg, cg = g[0]
    l = _lcm(mf, mg)
    d = gcd(cf, cg)
    a, b = cg // d, cf // d
    sf = tuple(x - y for x, y in zip(l, mf))
    sg = tuple(x - y for x, y in zip(l, mg))
    fs = [(tuple(x + y for x, y in zip(m, sf)), c) for m, c in f[1:]]
    return _sub_scaled(fs, a, g[1:], b, sg, order)


def _from_internal(terms, context) -> MPoly:
    if not terms:
        return MPoly(context)
    lc = terms[0][1]
    return MPoly._raw(tuple(context), {m: Fraction(c, lc) for m, c in terms})


# ---------------------------------------------------------------------------
# public types


@dataclass
class Ideal:
    context: tuple
    generators: list

    def __init__(self, generators: Iterable[MPoly], context: Sequence[str] | None = None):
        gens = [g for g in generators]
        if context is None:
            if not gens:
                raise ValueError("context required for an ideal without generators")
            context = gens[0].context
        self.context = tuple(context)
        for g in gens:
            if g.context != self.context:
                raise ValueError("all generators must share the ideal's context")
        self.generators = [g for g in gens if not g.is_zero()]

    def with_context(self, context) -> Ideal:
        return Ideal([g.with_context(context) for g in self.generators], context)

    def __add__(self, other: Ideal) -> Ideal:
        if other.context != self.context:
            raise ValueError("context mismatch")
        return Ideal(self.generators + other.generators, self.context)

    def __len__(self):
        return len(self.generators)


@dataclass
class GroebnerBasis:
    order: TermOrder
    context: tuple
    elements: list = field(default_factory=list)
    stats: dict = field(default_factory=dict, compare=False)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def leading_monomials(self) -> list:
        key = self.order.key_function()
        return [max(g.terms, key=key) for g in self.elements]

    def ideal(self) -> Ideal:
        return Ideal(self.elements, self.context)

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return (self.order == other.order and self.context == other.context
                and set(self.elements) == set(other.elements))


# ---------------------------------------------------------------------------
# Buchberger


def _update(G, B, h_idx, polys, lms):
    """Gebauer-Moeller installation of a new basis element."""
    lh = lms[h_idx]
    C = [(h_idx, g, _lcm(lh, lms[g])) for g in G]
    D = []
    while C:
        h, g1, l1 = C.pop(0)
        if _coprime(lh, lms[g1]):
            D.append((h, g1, l1))
            continue
        dominated = False
        for (_, _, l2) in itertools.chain(C, D):
            if _divides(l2, l1):
                dominated = True
                break
        if not dominated:
            D.append((h, g1, l1))
    E = [(h, g, l) for h, g, l in D if not _coprime(lh, lms[g])]
    B_new = []
    for g1, g2, l in B:
        if (_divides(lh, l) and _lcm(lms[g1], lh) != l and _lcm(lms[g2], lh) != l):
            continue
        B_new.append((g1, g2, l))
    B_new.extend((min(g, h), max(g, h), l) for h, g, l in E)
    G_new = [g for g in G if not _divides(lh, lms[g])]
    G_new.append(h_idx)
    return G_new, B_new


def buchberger(ideal: Ideal, order: TermOrder | None = None, caps: Caps = DEFAULT_CAPS,
               strategy: str = "sugar") -> GroebnerBasis:
    """Reduced Groebner basis.

    ``strategy`` is ``"sugar"`` (default) or ``"normal"``; both break ties by
    LCM degree, then lexicographic LCM, then pair indices.
    """
    order = order or TermOrder.grevlex()
    ctx = ideal.context
    od = _Order(order)
    polys = []
    lms = []
    sugar = []
    G: list = []
    B: list = []
    pairs_done = 0
    max_deg_seen = 0

    def install(terms, sug=None):
        sugar.append(max(sum(m) for m, _ in terms) if sug is None else sug)
        polys.append(terms)
        lms.append(terms[0][0])
        return len(polys) - 1

    def _pair_sugar(p):
        if strategy != "sugar":
            return 0
        i, j, l = p
        d = sum(l)
        return max(sugar[i] + d - sum(lms[i]), sugar[j] + d - sum(lms[j]))

    inputs = [_to_internal(g, od) for g in ideal.generators]
    inputs = [t for t in inputs if t]
    inputs.sort(key=lambda t: od.key(t[0][0]))
    for t in inputs:
        basis = [polys[i] for i in G]
        r, _ = _reduce(t, basis, od, caps=caps)
        r = _make_primitive(r)
        if not r:
            continue
        idx = install(r)
        G, B = _update(G, B, idx, polys, lms)

    while B:
        B.sort(key=lambda p: (_pair_sugar(p), sum(p[2]), p[2], p[0], p[1]))
        i, j, l = B.pop(0)
        deg = sum(l)
        if caps.max_degree is not None and deg > caps.max_degree:
            raise ResourceLimitError(f"S-pair degree {deg} exceeds cap {caps.max_degree}")
        pairs_done += 1
        caps.check_time()
        if caps.max_pairs is not None and pairs_done > caps.max_pairs:
            raise ResourceLimitError(f"more than {caps.max_pairs} S-pairs")
        s = _spoly(polys[i], polys[j], od)
        s = _make_primitive(s)
        basis = [polys[k] for k in G]
        r, _ = _reduce(s, basis, od, caps=caps)
        r = _make_primitive(r)
        if not r:
            continue
        max_deg_seen = max(max_deg_seen, max(sum(m) for m, _ in r))
        if caps.max_degree is not None and max_deg_seen > caps.max_degree:
            raise ResourceLimitError(f"basis degree {max_deg_seen} exceeds cap {caps.max_degree}")
        idx = install(r, _pair_sugar((i, j, l)) if strategy == "sugar" else None)
        if len(r) == 1 and not any(r[0][0]):
            G, B = [idx], []
            break
        G, B = _update(G, B, idx, polys, lms)

    # inter-reduce the minimal basis
    final = []
    members = [polys[k] for k in G]
    members.sort(key=lambda t: od.key(t[0][0]))
    for k, g in enumerate(members):
        others = members[:k] + members[k + 1:]
        # the leading term is irreducible by the others since the basis is minimal
        r, _ = _reduce([list(t) for t in g], others, od)
        final.append(_make_primitive(r))
    elements = [_from_internal(t, ctx) for t in final]
    log.debug("buchberger: %d pairs, %d elements", pairs_done, len(elements))
    return GroebnerBasis(order, ctx, elements, {"pairs": pairs_done, "max_degree": max_deg_seen})


def normal_form(p: MPoly, G: GroebnerBasis) -> MPoly:
    if p.context != G.context:
        raise ValueError("context mismatch")
    od = _Order(G.order)
    basis = [_to_internal(g, od) for g in G.elements]
    terms = [[m, c] for m, c in _to_internal_exact(p, od)]
    r, scale = _reduce(terms, basis, od)
    return MPoly._raw(G.context, {m: Fraction(c) / scale / _den_of(p) for m, c in r}) if r else MPoly(G.context)


def _to_internal_exact(p: MPoly, od: _Order):
    # integer image of p without content removal; scaled by _den_of(p)
    den = _den_of(p)
    terms = [[m, int(c * den)] for m, c in p.terms.items()]
    terms.sort(key=lambda t: od.key(t[0]), reverse=True)
    return terms


def _den_of(p: MPoly) -> int:
    from math import lcm

    den = 1
    for c in p.terms.values():
        den = lcm(den, c.denominator)
    return den


def is_reduced(G: GroebnerBasis) -> bool:
    """Check reducedness and that every S-polynomial reduces to zero."""
    od = _Order(G.order)
    internal = [_to_internal(g, od) for g in G.elements]
    for k, g in enumerate(G.elements):
        if g.terms[internal[k][0][0]] != 1:
            return False
        for j, h in enumerate(internal):
            if j != k and any(_divides(h[0][0], m) for m in g.terms):
                return False
    for a, b in itertools.combinations(internal, 2):
        r, _ = _reduce(_make_primitive(_spoly(a, b, od)), internal, od)
        if r:
            return False
    return True


# ---------------------------------------------------------------------------
# elimination, saturation, intersection


def eliminate(ideal: Ideal, drop: Iterable[str], caps: Caps = DEFAULT_CAPS) -> Ideal:
    """Generators of the ideal intersected with the subring free of ``drop``."""
    drop = list(drop)
    order = TermOrder.elimination(ideal.context, drop)
    G = buchberger(ideal, order, caps)
    idx = order.eliminates()
    keep = [g for g in G.elements if not any(m[i] for m in g.terms for i in idx)]
    return Ideal(keep, ideal.context)


def _fresh(context, stem="t"):
    name = stem
    k = 0
    while name in context:
        k += 1
        name = f"{stem}{k}"
    return name


def saturate(ideal: Ideal, g: MPoly, caps: Caps = DEFAULT_CAPS) -> Ideal:
    """``I : g^inf`` via a fresh variable t and the relation ``1 - t*g``."""
    if g.is_zero():
        raise ValueError("cannot saturate by zero")
    t = _fresh(ideal.context)
    ctx = (t,) + ideal.context
    gens = [f.with_context(ctx) for f in ideal.generators]
    gens.append(1 - MPoly.var(ctx, t) * g.with_context(ctx))
    J = eliminate(Ideal(gens, ctx), [t], caps)
    return J.with_context(ideal.context)


def intersect(a: Ideal, b: Ideal, caps: Caps = DEFAULT_CAPS) -> Ideal:
    if a.context != b.context:
        raise ValueError("context mismatch")
    t = _fresh(a.context)
    ctx = (t,) + a.context
    tv = MPoly.var(ctx, t)
    gens = [tv * f.with_context(ctx) for f in a.generators]
    gens += [(1 - tv) * f.with_context(ctx) for f in b.generators]
    J = eliminate(Ideal(gens, ctx), [t], caps)
    return J.with_context(a.context)


def saturate_by_ideal(ideal: Ideal, J: Ideal, caps: Caps = DEFAULT_CAPS) -> Ideal:
    """``I : J^inf`` as the intersection of saturations by J's generators."""
    if not J.generators:
        raise ValueError("saturating ideal needs at least one generator")
    GJ = buchberger(J, TermOrder.grevlex(), caps)
    if GJ.is_unit():
        return ideal
    GI = buchberger(ideal, TermOrder.grevlex(), caps)
    parts = []
    for g in GJ.elements:
        # generators already in I contribute the unit ideal
        if normal_form(g, GI).is_zero():
            continue
        parts.append(saturate(ideal, g, caps))
    if not parts:
        return Ideal([MPoly.constant(ideal.context, 1)], ideal.context)
    result = parts[0]
    for other in parts[1:]:
        result = intersect(result, other, caps)
    return result


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    order = TermOrder.grevlex()
    return buchberger(a, order) == buchberger(b, order)


# ---------------------------------------------------------------------------
# dimension and minors


def codimension(ideal: Ideal, caps: Caps = DEFAULT_CAPS) -> int:
    G = buchberger(ideal, TermOrder.grevlex(), caps)
    if G.is_unit():
        raise UnitIdealError("codimension of the unit ideal")
    n = len(ideal.context)
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in G.leading_monomials()]
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            S = set(S)
            if all(not s <= S for s in supports):
                return n - size
    return n


def determinant(M):
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        if M[0][j].is_zero():
            continue
        sub = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * determinant(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else MPoly(M[0][0].context)


def minors(M: Sequence[Sequence[MPoly]], k: int) -> list:
    """All k x k minors in (row subset, column subset) lexicographic order."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise ValueError("matrix is not rectangular")
    if not 1 <= k <= min(rows, cols):
        raise ValueError(f"minor size {k} out of range for a {rows}x{cols} matrix")
    out = []
    for rs in itertools.combinations(range(rows), k):
        for cs in itertools.combinations(range(cols), k):
            out.append(determinant([[M[r][c] for c in cs] for r in rs]))
    return out


def jacobian(generators: Sequence[MPoly], variables: Sequence[str]) -> list:
    """Rows = generators, columns = partial derivatives in ``variables``."""
    return [[g.diff(v) for v in variables] for g in generators]
