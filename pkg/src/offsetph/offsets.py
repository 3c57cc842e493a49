"""ED correspondence, offset correspondence and the offset family of a variety."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactpoly import MPoly, UniPoly, squarefree_part
from .groebner import (
    DEFAULT_CAPS,
    Caps,
    Ideal,
    codimension,
    eliminate,
    jacobian,
    minors,
    saturate_by_ideal,
)

EPS = "e"


class NonPrincipalError(RuntimeError):
    """The elimination ideal is not generated by a single polynomial."""


class NonGenericError(RuntimeError):
    """No generic probe point was found within the retry budget."""


def x_vars(n):
    return tuple(f"x{i}" for i in range(1, n + 1))


def y_vars(n):
    return tuple(f"y{i}" for i in range(1, n + 1))


@dataclass
class VarietyInput:
    n: int
    generators: list
    codim: int | None = None
    name: str = ""

    def __post_init__(self):
        ctx = x_vars(self.n)
        self.generators = [g.with_context(ctx) for g in self.generators]
        if not self.generators or any(g.is_zero() for g in self.generators):
            raise ValueError("variety needs nonzero generators")

    @classmethod
    def from_text(cls, texts: Sequence[str], n: int, codim: int | None = None, name: str = ""):
        from .exactpoly import parse_poly

        ctx = x_vars(n)
        return cls(n, [parse_poly(t, ctx) for t in texts], codim, name)

    def ideal(self) -> Ideal:
        return Ideal(self.generators, x_vars(self.n))


@dataclass
class OffsetFamily:
    poly: MPoly
    source: VarietyInput | None
    deg_eps: int = field(init=False)
    deg_y: int = field(init=False)

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("offset family polynomial must be nonzero")
        self.deg_eps = self.poly.degree_in(EPS)
        self.deg_y = self.poly.degree_in_vars(self.y_names)

    @property
    def n(self) -> int:
        return len(self.poly.context) - 1

    @property
    def y_names(self) -> tuple:
        return tuple(v for v in self.poly.context if v != EPS)

    def specialize(self, y0) -> UniPoly:
        """f(y0, e) as a univariate polynomial in e."""
        if len(y0) != self.n:
            raise ValueError(f"point must have {self.n} coordinates")
        sub = self.poly.evaluate({v: Fraction(c) for v, c in zip(self.y_names, y0)})
        return sub.to_univariate(EPS)


def _check_codim(V: VarietyInput, caps: Caps) -> int:
    c = codimension(V.ideal(), caps)
    if V.codim is not None and V.codim != c:
        raise ValueError(f"declared codimension {V.codim} but the ideal has codimension {c}")
    return c


def ed_correspondence(V: VarietyInput, caps: Caps = DEFAULT_CAPS) -> Ideal:
    """Closure of {(x, y): x regular on X, x - y normal to X at x}."""
    n = V.n
    xs, ys = x_vars(n), y_vars(n)
    ctx = xs + ys
    c = _check_codim(V, caps)
    gens = [g.with_context(ctx) for g in V.generators]
    jac = jacobian(gens, xs)
    diff_row = [MPoly.var(ctx, x) - MPoly.var(ctx, y) for x, y in zip(xs, ys)]
    aug = [diff_row] + jac
    # rank <= c is automatic when c + 1 exceeds the matrix size
    rank_cond = minors(aug, c + 1) if c + 1 <= min(len(aug), n) else []
    EX = Ideal(gens + rank_cond, ctx)
    sing = Ideal(gens + minors(jac, c), ctx)
    return saturate_by_ideal(EX, sing, caps)


def offset_correspondence(V: VarietyInput, caps: Caps = DEFAULT_CAPS) -> Ideal:
    n = V.n
    xs, ys = x_vars(n), y_vars(n)
    ctx = xs + ys + (EPS,)
    E = ed_correspondence(V, caps).with_context(ctx)
    dist = sum(((MPoly.var(ctx, x) - MPoly.var(ctx, y)) ** 2 for x, y in zip(xs, ys)),
               MPoly(ctx)) - MPoly.var(ctx, EPS) ** 2
    return Ideal(E.generators + [dist], ctx)


def normalize_sign(p: MPoly) -> MPoly:
    """Primitive integer form whose graded-lex leading coefficient is positive."""
    p = p.primitive()
    _, c = p.leading_graded_lex()
    return -p if c < 0 else p


def offset_family(V: VarietyInput, caps: Caps = DEFAULT_CAPS) -> OffsetFamily:
    """Eliminate the variety coordinates from the offset correspondence."""
    OC = offset_correspondence(V, caps)
    elim = eliminate(OC, x_vars(V.n), caps)
    if len(elim.generators) != 1:
        raise NonPrincipalError(
            f"elimination ideal has {len(elim.generators)} generators; expected a hypersurface")
    poly = elim.generators[0].with_context(y_vars(V.n) + (EPS,))
    return OffsetFamily(normalize_sign(poly), V)


def eps_degree(F: OffsetFamily) -> int:
    return F.deg_eps


def y_degree(F: OffsetFamily) -> int:
    return F.deg_y


def random_point(rng: random.Random, n: int, bound: int = 1000) -> tuple:
    return tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(n))


def ed_degree_probe(F: OffsetFamily, y0=None, seed: int = 0, retries: int = 8) -> int:
    """Half the number of distinct roots of f(y0, e) at a generic y0.

    When ``y0`` drops the e-degree or gives a repeated root, fresh points are
    drawn from a generator seeded with ``seed``.
    """
    rng = random.Random(seed)
    candidates = [tuple(y0)] if y0 is not None else []
    while len(candidates) < retries + 1:
        candidates.append(random_point(rng, F.n))
    for pt in candidates:
        u = F.specialize(pt)
        if u.degree != F.deg_eps:
            continue
        sq = squarefree_part(u)
        if sq.degree != u.degree:
            continue
        if sq.degree % 2:
            raise ArithmeticError("odd number of distinct roots in an even family")
        return sq.degree // 2
    raise NonGenericError(f"no generic point found in {retries + 1} attempts")
