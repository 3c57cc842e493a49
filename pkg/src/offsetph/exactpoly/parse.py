"""Text format for polynomials.

Grammar (whitespace ignored)::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := identifier | rational | '(' expr ')'
    rational := int ('/' uint)?

The optional leading sign is accepted so that formatted output always parses.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .mpoly import MPoly, UnknownVariableError


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text, context):
        self.tokens = _tokenize(text)
        self.i = 0
        self.context = tuple(context)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def expr(self):
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term(self):
        result = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.factor()
            else:
                return result

    def factor(self):
        base = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise PolySyntaxError("expected unsigned integer exponent", pos)
            return base ** int(val)
        return base

    def base(self):
        kind, val, pos = self.take()
        if kind == "num":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, p3 = self.take()
                if k3 != "num":
                    raise PolySyntaxError("expected unsigned integer denominator", p3)
                if int(v3) == 0:
                    raise PolySyntaxError("zero denominator", p3)
                return MPoly.constant(self.context, Fraction(num, int(v3)))
            return MPoly.constant(self.context, num)
        if kind == "ident":
            if val not in self.context:
                raise UnknownVariableError(f"unknown variable {val!r} at position {pos}")
            return MPoly.var(self.context, val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise PolySyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse_poly(text: str, variables) -> MPoly:
    """Parse ``text`` into an MPoly over the ordered variable list."""
    p = _Parser(text, variables)
    result = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise PolySyntaxError(f"unexpected {val!r}", pos)
    return result


def _monomial_text(m, context):
    parts = []
    for v, e in zip(context, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: MPoly) -> str:
    """Render in graded-lex descending term order, e.g. ``x1^2+4*x2^2-4``."""
    if not p.terms:
        return "0"
    out = []
    for m in sorted(p.terms, key=lambda t: (sum(t), t), reverse=True):
        c = p.terms[m]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _monomial_text(m, p.context)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    return text + "".join(s + b for s, b in out[1:])
