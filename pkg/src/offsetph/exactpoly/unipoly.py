"""Dense univariate polynomials over Q, Sturm sequences and real root isolation."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class UniPoly:
    """Dense coefficient vector, index = exponent; trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots):
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other):
        a, b = self.coeffs, _up(other).coeffs
        n = max(len(a), len(b))
        return UniPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_up(other))

    def __mul__(self, other):
        a, b = self.coeffs, _up(other).coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> UniPoly:
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly([c / lc for c in self.coeffs])

    def divmod(self, other: UniPoly):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.degree
        lc = other.lc
        q = [Fraction(0)] * max(len(r) - d, 0)
        for k in range(len(r) - 1 - d, -1, -1):
            c = r[k + d] / lc
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    r[k + j] -= c * b
        return UniPoly(q), UniPoly(r[:d] if d > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def sign_at(self, x: Fraction) -> int:
        v = self(x)
        return (v > 0) - (v < 0)

    def sign_at_inf(self, positive: bool) -> int:
        if not self.coeffs:
            return 0
        s = 1 if self.lc > 0 else -1
        if not positive and self.degree % 2:
            s = -s
        return s


def _up(x) -> UniPoly:
    return x if isinstance(x, UniPoly) else UniPoly([x])


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    g = uni_gcd(p, p.derivative())
    return (p // g).monic()


def sturm_sequence(p: UniPoly) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        seq.append(-r)
    seq.pop()
    return seq


def _variations(signs):
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sturm_count(seq, a=None, b=None) -> int:
    """Distinct real roots in (a, b]; ``None`` means the corresponding infinity."""
    va = _variations([q.sign_at_inf(False) if a is None else q.sign_at(a) for q in seq])
    vb = _variations([q.sign_at_inf(True) if b is None else q.sign_at(b) for q in seq])
    return va - vb


def root_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: every root has absolute value below it."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: UniPoly, precision=Fraction(1, 10**6), lo=None, hi=None) -> list:
    """Disjoint rational intervals ``(a, b)``, one per distinct real root.

    Each root lies in the half-open interval ``(a, b]`` and ``b - a <= precision``.
    Roots are sorted increasingly. With ``lo``/``hi`` only roots in ``(lo, hi]``
    are returned.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    precision = Fraction(precision)
    if p.degree < 1:
        return []
    sq = squarefree_part(p)
    seq = sturm_sequence(sq)
    bound = root_bound(sq)
    a0 = -bound if lo is None else Fraction(lo)
    b0 = bound if hi is None else Fraction(hi)
    out = []
    stack = [(a0, b0, sturm_count(seq, a0, b0))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_refine(sq, a, b, precision))
            continue
        mid = (a + b) / 2
        left = sturm_count(seq, a, mid)
        stack.append((mid, b, n - left))
        stack.append((a, mid, left))
    out.sort()
    return out


def _refine(sq: UniPoly, a: Fraction, b: Fraction, precision: Fraction):
    # exactly one simple root of sq in (a, b]
    sb = sq.sign_at(b)
    if sb == 0:
        return (b - precision, b) if b - a > precision else (a, b)
    while b - a > precision:
        mid = (a + b) / 2
        sm = sq.sign_at(mid)
        if sm == 0:
            return (mid - precision / 2, mid)
        if sm == sb:
            b = mid
        else:
            a = mid
    return (a, b)


def real_roots(p: UniPoly, precision=Fraction(1, 10**12)) -> list:
    """Midpoints of isolating intervals as floats."""
    return [float((a + b) / 2) for a, b in isolate_real_roots(p, precision)]
