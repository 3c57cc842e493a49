"""Sylvester resultants, pointwise offset discriminants and degree bounds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import MPoly, UniPoly, squarefree_part
from .offsets import OffsetFamily


class DegreeDropError(ValueError):
    """The specialization lowers the e-degree of the family."""


class NotOnComponentError(ValueError):
    pass


def bareiss_determinant(M) -> Fraction:
    """Exact determinant by fraction-free elimination with row pivoting."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in M:
        for x in row:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
    A = [[int(Fraction(x) * den) for x in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return Fraction(sign * A[n - 1][n - 1], den ** n)


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


def sylvester_matrix(p: UniPoly, q: UniPoly) -> list:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - n - 1 - i))
    return rows


def sylvester_resultant(p: UniPoly, q: UniPoly) -> Fraction:
    """Res(p, q) as the determinant of the Sylvester matrix (p rows first)."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    return bareiss_determinant(sylvester_matrix(p, q))


@dataclass(frozen=True)
class DiscriminantReport:
    point: tuple
    disc_value: Fraction
    distinct_roots: int
    expected_roots: int
    on_discriminant: bool


def univariate_discriminant(p: UniPoly) -> Fraction:
    """Res(p, p') / lc(p)."""
    return sylvester_resultant(p, p.derivative()) / p.lc


def discriminant_at(F: OffsetFamily, y0) -> DiscriminantReport:
    y0 = tuple(Fraction(c) for c in y0)
    u = F.specialize(y0)
    if u.degree != F.deg_eps:
        raise DegreeDropError(f"e-degree drops from {F.deg_eps} to {u.degree} at {y0}")
    disc = univariate_discriminant(u)
    distinct = squarefree_part(u).degree
    return DiscriminantReport(y0, disc, distinct, F.deg_eps, disc == 0)


def is_component_point(F: OffsetFamily, component: MPoly, y0) -> bool:
    """Whether the offset discriminant vanishes at a point of a claimed component."""
    y0 = tuple(Fraction(c) for c in y0)
    comp = component.with_context(F.y_names) if set(component.context) <= set(F.y_names) else component
    if comp(*y0) != 0:
        raise NotOnComponentError(f"{y0} is not on the component")
    return discriminant_at(F, y0).on_discriminant


def discriminant_degree_bound(deg_y: int, eddeg: int, formula: str = "table") -> int:
    """Upper bound for the degree of the offset discriminant.

    ``table`` is deg_y (4 eddeg - 2); ``corollary`` is twice that.
    """
    if deg_y <= 0 or eddeg <= 0:
        raise ValueError("degrees must be positive")
    base = deg_y * (4 * eddeg - 2)
    if formula == "table":
        return base
    if formula == "corollary":
        return 2 * base
    raise ValueError(f"unknown formula {formula!r}")
