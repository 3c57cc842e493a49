"""Sparse multivariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

Rational = Fraction
Monomial = tuple


class ContextMismatchError(ValueError):
    pass


class UnknownVariableError(ValueError):
    pass


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _RationalABC)):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class MPoly:
    """Immutable polynomial with a fixed, ordered variable context.

    ``terms`` maps exponent tuples (one slot per context variable) to nonzero
    ``Fraction`` coefficients.
    """

    __slots__ = ("context", "terms", "_hash")

    def __init__(self, context: Iterable[str], terms: Mapping[tuple, object] | None = None):
        self.context = tuple(context)
        n = len(self.context)
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    m = tuple(m)
                    if len(m) != n:
                        raise ValueError(f"monomial {m} does not fit context of {n} variables")
                    clean[m] = c
        self.terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, context):
        return cls(context)

    @classmethod
    def constant(cls, context, c):
        context = tuple(context)
        return cls(context, {(0,) * len(context): c})

    @classmethod
    def var(cls, context, name: str):
        context = tuple(context)
        if name not in context:
            raise UnknownVariableError(name)
        exp = [0] * len(context)
        exp[context.index(name)] = 1
        return cls(context, {tuple(exp): 1})

    @classmethod
    def _raw(cls, context, terms):
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.context = context
        p.terms = terms
        p._hash = None
        return p

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * len(self.context), Fraction(0))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, var: str) -> int:
        """Largest exponent of ``var``; -1 for the zero polynomial."""
        i = self._index(var)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def degree_in_vars(self, names: Iterable[str]) -> int:
        """Total degree in a subset of the variables."""
        idx = [self._index(v) for v in names]
        if not self.terms:
            return -1
        return max(sum(m[i] for i in idx) for m in self.terms)

    def variables(self) -> tuple:
        """Names of the variables that actually occur."""
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(v for i, v in enumerate(self.context) if i in used)

    def _index(self, var: str) -> int:
        try:
            return self.context.index(var)
        except ValueError:
            raise UnknownVariableError(var) from None

    def _check(self, other: MPoly):
        if self.context != other.context:
            raise ContextMismatchError(f"{self.context} != {other.context}")

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.constant(self.context, _as_fraction(other))

    # ring operations

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MPoly._raw(self.context, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.context, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = _as_fraction(other)
            if not c:
                return MPoly._raw(self.context, {})
            return MPoly._raw(self.context, {m: a * c for m, a in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly._raw(self.context, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MPoly.constant(self.context, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        c = _as_fraction(c)
        return self * (1 / c)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.context == other.context and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.constant(self.context, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.context, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution

    def diff(self, var: str) -> MPoly:
        i = self._index(var)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                m2 = m[:i] + (e - 1,) + m[i + 1:]
                out[m2] = c * e
        return MPoly._raw(self.context, out)

    def evaluate(self, assignment: Mapping[str, object]) -> MPoly:
        """Substitute rationals for some variables; context is kept."""
        if not assignment:
            return self
        idx = {self._index(v): _as_fraction(val) for v, val in assignment.items()}
        out: dict = {}
        for m, c in self.terms.items():
            coeff = c
            m2 = list(m)
            for i, val in idx.items():
                if m[i]:
                    coeff *= val ** m[i]
                    m2[i] = 0
            if coeff:
                key = tuple(m2)
                out[key] = out.get(key, 0) + coeff
        return MPoly._raw(self.context, {m: c for m, c in out.items() if c})

    def __call__(self, *values):
        """Full evaluation at a point given in context order."""
        if len(values) != len(self.context):
            raise ValueError("wrong number of values")
        return self.evaluate(dict(zip(self.context, values))).constant_value()

    def eval_float(self, point) -> float:
        total = 0.0
        for m, c in self.terms.items():
            t = float(c)
            for x, e in zip(point, m):
                if e:
                    t *= x ** e
            total += t
        return total

    def as_univariate(self, var: str) -> list:
        """Split into ``[(exponent, coefficient MPoly), ...]`` sorted by exponent."""
        i = self._index(var)
        groups: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            groups.setdefault(e, {})[m[:i] + (0,) + m[i + 1:]] = c
        return [(e, MPoly._raw(self.context, groups[e])) for e in sorted(groups)]

    def to_univariate(self, var: str):
        """Dense univariate polynomial; every other variable must be absent."""
        from .unipoly import UniPoly

        i = self._index(var)
        coeffs: dict = {}
        for m, c in self.terms.items():
            if any(e for j, e in enumerate(m) if j != i):
                raise ValueError(f"polynomial involves variables other than {var}")
            coeffs[m[i]] = c
        if not coeffs:
            return UniPoly([])
        return UniPoly([coeffs.get(k, 0) for k in range(max(coeffs) + 1)])

    # context changes

    def with_context(self, context: Iterable[str]) -> MPoly:
        """Re-express in another context containing every used variable."""
        context = tuple(context)
        if context == self.context:
            return self
        pos = []
        for i, v in enumerate(self.context):
            if v in context:
                pos.append((i, context.index(v)))
        n = len(context)
        keep = {i for i, _ in pos}
        out = {}
        for m, c in self.terms.items():
            for i, e in enumerate(m):
                if e and i not in keep:
                    raise UnknownVariableError(self.context[i])
            m2 = [0] * n
            for i, j in pos:
                m2[j] = m[i]
            out[tuple(m2)] = c
        return MPoly._raw(context, out)

    def rename(self, mapping: Mapping[str, str]) -> MPoly:
        return MPoly._raw(tuple(mapping.get(v, v) for v in self.context), dict(self.terms))

    # integer normalization

    def primitive(self) -> MPoly:
        """Scale to coprime integer coefficients (sign unchanged)."""
        from math import gcd, lcm

        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gcd(g, c.numerator * (den // c.denominator))
        scale = Fraction(den, g)
        return self * scale

    def leading_graded_lex(self):
        """(monomial, coefficient) that is largest under graded lex order."""
        m = max(self.terms, key=lambda t: (sum(t), t))
        return m, self.terms[m]

    def __repr__(self):
        from .parse import format_poly

        return f"MPoly({format_poly(self)!r}, {list(self.context)!r})"

    def __str__(self):
        from .parse import format_poly

        return format_poly(self)


def partial_derivative(p: MPoly, var: str) -> MPoly:
    return p.diff(var)


def evaluate(p: MPoly, assignment) -> MPoly:
    return p.evaluate(assignment)


def as_univariate(p: MPoly, var: str) -> list:
    return p.as_univariate(var)


def degree_in(p: MPoly, var: str) -> int:
    return p.degree_in(var)
