from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from offsetph.exactpoly import (
    ContextMismatchError,
    MPoly,
    PolySyntaxError,
    UniPoly,
    UnknownVariableError,
    as_univariate,
    degree_in,
    evaluate,
    format_poly,
    isolate_real_roots,
    parse_poly,
    partial_derivative,
    squarefree_part,
    sturm_count,
    sturm_sequence,
    uni_gcd,
)

X12 = ["x1", "x2"]


def P(text, ctx=X12):
    return parse_poly(text, ctx)


def U(*coeffs):
    return UniPoly(coeffs)


# -- parsing -----------------------------------------------------------------


def test_parse_ellipse():
    f = P("x1^2+4*x2^2-4")
    assert len(f) == 3 and f.total_degree() == 2
    assert f.terms[(0, 2)] == 4 and f.terms[(0, 0)] == -4


def test_parse_zero():
    z = parse_poly("0", ["x1"])
    assert z.is_zero() and z.terms == {}


def test_parse_viviani_cylinder():
    f = parse_poly("(x1-1)^2+x2^2-1", ["x1", "x2", "x3"])
    assert f == parse_poly("x1^2-2*x1+x2^2", ["x1", "x2", "x3"])


def test_parse_rationals_and_whitespace():
    f = P(" 3/2 * x1 ^ 2 - (x2 - 1/3) ")
    assert f.terms[(2, 0)] == Fraction(3, 2)
    assert f.terms[(0, 0)] == Fraction(1, 3)


@pytest.mark.parametrize("text,pos", [("x1^", 3), ("x1**2", 3), ("(x1+1", 5), ("x1 x2", 3), ("2/0", 2)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(PolySyntaxError) as info:
        P(text)
    assert info.value.position == pos


def test_unknown_variable():
    with pytest.raises(UnknownVariableError):
        P("x3+1")


def test_format_examples():
    assert format_poly(P("x1^2+4*x2^2-4")) == "x1^2+4*x2^2-4"
    assert format_poly(P("0")) == "0"
    assert format_poly(P("-3/2*x1")) == "-3/2*x1"


# -- ring operations -----------------------------------------------------------


def test_ring_examples():
    x, y = MPoly.var(X12, "x1"), MPoly.var(X12, "x2")
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    assert (x * 0).is_zero()
    sq = P("x1^2+4*x2^2-4") ** 2
    assert sq.total_degree() == 4 and len(sq) == 6


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        P("x1") + parse_poly("x1", ["x1", "x3"])


def test_derivatives():
    f = P("x1^2+4*x2^2-4")
    assert partial_derivative(f, "x1") == P("2*x1")
    assert partial_derivative(f, "x2") == P("8*x2")
    g = f.with_context(["x1", "x2", "x3"])
    assert partial_derivative(g, "x3").is_zero()
    with pytest.raises(UnknownVariableError):
        partial_derivative(f, "x3")


def test_evaluate():
    c = P("x1^2+x2^2-1")
    assert evaluate(c, {"x1": 1, "x2": 0}).is_zero()
    e = P("x1^2+4*x2^2-4")
    assert evaluate(e, {"x1": 0, "x2": 0}).constant_value() == -4
    assert evaluate(e, {}) == e


def test_as_univariate_and_degree():
    f = P("x1^2*x2+3*x2-x1")
    parts = as_univariate(f, "x1")
    assert [k for k, _ in parts] == [0, 1, 2]
    total = MPoly.zero(X12)
    for k, c in parts:
        assert c.degree_in("x1") <= 0
        total = total + c * MPoly.var(X12, "x1") ** k
    assert total == f
    assert as_univariate(P("7"), "x1") == [(0, P("7"))]
    assert degree_in(P("0"), "x1") == -1
    assert degree_in(f, "x2") == 1


small_coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monomial = st.tuples(st.integers(0, 3), st.integers(0, 3))
mpolys = st.dictionaries(monomial, small_coeff, max_size=5).map(lambda d: MPoly(X12, d))


@settings(max_examples=60, deadline=None)
@given(mpolys, mpolys, mpolys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a


@settings(max_examples=80, deadline=None)
@given(mpolys)
def test_parse_format_roundtrip(p):
    assert parse_poly(format_poly(p), X12) == p


# -- univariate ----------------------------------------------------------------


def test_gcd_examples():
    assert uni_gcd(U(-1, 0, 1), U(-1, 1)) == U(-1, 1)
    assert uni_gcd(U(2, 4), U()) == U(Fraction(1, 2), 1)
    a = UniPoly.from_roots([1, 1, -2])
    b = UniPoly.from_roots([1, 3])
    assert uni_gcd(a, b) == U(-1, 1)


def test_squarefree_examples():
    assert squarefree_part(UniPoly.from_roots([1, 1, -1])) == UniPoly.from_roots([1, -1])
    p = UniPoly.from_roots([2, 5])
    assert squarefree_part(p * 3) == p
    circ = UniPoly.from_roots([-1, -1, 1, 1])
    assert squarefree_part(circ) == U(-1, 0, 1)
    with pytest.raises(ValueError):
        squarefree_part(U())


def test_isolate_examples():
    ivs = isolate_real_roots(U(4, 0, -5, 0, 1), Fraction(1, 10**6))
    assert len(ivs) == 4
    for (a, b), r in zip(ivs, [-2, -1, 1, 2]):
        assert a < r <= b and b - a <= Fraction(1, 10**6)
    assert isolate_real_roots(U(1, 0, 1), Fraction(1, 100)) == []
    (a, b), = isolate_real_roots(U(0, 0, 1), Fraction(1, 100))
    assert a < 0 <= b
    with pytest.raises(ValueError):
        isolate_real_roots(U(), Fraction(1, 10))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6), st.lists(st.integers(1, 5), max_size=2))
def test_sturm_counts_distinct_real_factors(roots, quad):
    p = UniPoly.from_roots([Fraction(r, 2) for r in roots])
    for c in quad:                       # x^2 + c has no real roots
        p = p * U(c, 0, 1)
    seq = sturm_sequence(p)
    assert sturm_count(seq, None, None) == len(set(roots))
    ivs = isolate_real_roots(p, Fraction(1, 1000))
    assert len(ivs) == len(set(roots))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=7))
def test_squarefree_degree_counts_distinct_roots(roots):
    p = UniPoly.from_roots(roots)
    sq = squarefree_part(p)
    g = uni_gcd(p, p.derivative())
    assert sq.degree == len(set(roots)) == p.degree - g.degree


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=6))
def test_isolation_matches_numpy(coeffs):
    p = UniPoly(coeffs)
    if p.degree < 1:
        return
    sq = squarefree_part(p)
    ref = sorted(r.real for r in np.roots([float(c) for c in reversed(sq.coeffs)])
                 if abs(r.imag) < 1e-7)
    ivs = isolate_real_roots(p, Fraction(1, 10**8))
    assert len(ivs) == len(ref)
    for (a, b), r in zip(ivs, ref):
        assert float(a) - 1e-6 <= r <= float(b) + 1e-6
