import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from offsetph.discriminants import (
    DegreeDropError,
    NotOnComponentError,
    bareiss_determinant,
    discriminant_at,
    discriminant_degree_bound,
    is_component_point,
    sylvester_resultant,
    univariate_discriminant,
)
from offsetph.exactpoly import UniPoly, parse_poly
from offsetph.offsets import OffsetFamily, random_point

YY = ["y1", "y2"]


def test_resultant_examples():
    assert sylvester_resultant(UniPoly([-1, 0, 1]), UniPoly([0, 2])) == -4
    a, b = Fraction(3, 7), Fraction(-5, 2)
    assert sylvester_resultant(UniPoly([-a, 1]), UniPoly([-b, 1])) == a - b
    assert sylvester_resultant(UniPoly([1, 2, 3]), UniPoly([1])) == 1
    with pytest.raises(ValueError):
        sylvester_resultant(UniPoly([]), UniPoly([1, 1]))


coeffs = st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda c: c[-1] != 0)


def euclid_resultant(a: UniPoly, b: UniPoly) -> Fraction:
    """Res(a, b) by the remainder recurrence; no determinants involved."""
    m, n = a.degree, b.degree
    if n == 0:
        return b.lc ** m
    r = a % b
    if r.degree < 0:
        return Fraction(0)
    return (-1) ** (m * n) * b.lc ** (m - r.degree) * euclid_resultant(b, r)


@settings(max_examples=60)
@given(coeffs, coeffs)
def test_resultant_matches_oracles(a, b):
    res = sylvester_resultant(UniPoly(a), UniPoly(b))
    assert res == euclid_resultant(UniPoly(a), UniPoly(b))
    # product formula lc(a)^n * prod b(alpha), in floats
    n = len(b) - 1
    alphas = np.roots(list(reversed(a)))
    prod = a[-1] ** n * np.prod([np.polyval(list(reversed(b)), r) for r in alphas])
    assert abs(float(res) - prod.real) <= 1e-6 * max(1.0, abs(prod))


@settings(max_examples=40)
@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_bareiss_matches_sympy(M):
    ref = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M]).det()
    assert bareiss_determinant(M) == Fraction(int(ref.p), int(ref.q))



def test_quadratic_discriminant():
    # Res(p, p') / lc = -(b^2 - 4ac) for a quadratic
    p = UniPoly([2, 5, 3])
    assert univariate_discriminant(p) == -(25 - 24)


def test_circle_examples(circle_family):
    rep = discriminant_at(circle_family, (0, 0))
    assert rep.disc_value == 0 and rep.distinct_roots == 2 and rep.on_discriminant
    rep = discriminant_at(circle_family, (Fraction(1, 2), 0))
    assert rep.disc_value != 0 and rep.distinct_roots == 4 and not rep.on_discriminant


def test_ellipse_axis_point(ellipse_family):
    assert discriminant_at(ellipse_family, (Fraction(1, 2), 0)).disc_value == 0


def test_component_points(ellipse_family, circle_family):
    assert is_component_point(ellipse_family, parse_poly("y2", YY), (Fraction(3, 2), 0))
    assert is_component_point(ellipse_family, parse_poly("y1^2+4*y2^2-4", YY), (2, 0))
    assert not is_component_point(circle_family, parse_poly("y1", YY), (0, Fraction(1, 3)))
    with pytest.raises(NotOnComponentError):
        is_component_point(ellipse_family, parse_poly("y2", YY), (1, 1))


def test_degree_drop_reported():
    F = OffsetFamily(parse_poly("y1*e^2-1", ["y1", "y2", "e"]), None)
    with pytest.raises(DegreeDropError):
        discriminant_at(F, (0, 5))


def test_report_dichotomy(ellipse_family):
    rng = random.Random(11)
    points = [random_point(rng, 2, 20) for _ in range(10)]
    points += [(0, Fraction(1, 5)), (Fraction(7, 3), 0), (2, 0)]
    for y0 in points:
        rep = discriminant_at(ellipse_family, y0)
        assert rep.on_discriminant == (rep.disc_value == 0) == (rep.distinct_roots < rep.expected_roots)


def test_real_rooted_squarefree_nonzero():
    rng = random.Random(2)
    for _ in range(20):
        roots = rng.sample(range(-20, 20), 5)
        assert univariate_discriminant(UniPoly.from_roots(roots)) != 0


@pytest.mark.parametrize("degy,ed,val", [(4, 2, 24), (6, 3, 60), (8, 4, 112), (10, 4, 140), (14, 6, 308)])
def test_table_rows(degy, ed, val):
    assert discriminant_degree_bound(degy, ed, "table") == val
    assert discriminant_degree_bound(degy, ed, "corollary") == 2 * val


def test_bound_monotone_and_errors():
    for d in range(1, 10):
        for e in range(1, 10):
            b = discriminant_degree_bound(d, e)
            assert discriminant_degree_bound(d + 1, e) > b
            assert discriminant_degree_bound(d, e + 1) > b
    with pytest.raises(ValueError):
        discriminant_degree_bound(0, 3)
    with pytest.raises(ValueError):
        discriminant_degree_bound(4, 2, "other")
