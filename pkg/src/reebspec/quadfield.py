"""Exact arithmetic in the real quadratic field Q(sqrt(d)).

Elements are stored as p + q*sqrt(d) with p, q rational (always in lowest
terms, positive denominator) and d a fixed non-square integer >= 2.  Because
sqrt(d) is irrational, two elements are equal iff their (p, q) pairs are,
and the sign of p + q*sqrt(d) is decidable by comparing p^2 against q^2*d
when p and q differ in sign.  That exact sign test is the substrate for
certified comparisons and certified floors: no floating point value is ever
trusted, floors are seeded from integer square roots and then verified by
exact comparison.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import ExprSyntaxError, RadicandError

__all__ = [
    "FieldContext",
    "QuadIrrational",
    "compare",
    "floor_product",
    "is_rational",
    "pairwise_rational_ratio",
    "parse_expr",
    "render",
]


def _check_radicand(d):
    if not isinstance(d, int) or d < 2:
        raise RadicandError(f"radicand must be an integer >= 2, got {d!r}")
    r = isqrt(d)
    if r * r == d:
        raise RadicandError(f"radicand {d} is a perfect square")


def _sign_int(a, b, d):
    """Exact sign of a + b*sqrt(d) for integers a, b and non-square d."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # Mixed signs: |a| vs |b|*sqrt(d); equality impossible since d non-square.
    lhs = a * a
    rhs = b * b * d
    if a > 0:  # b < 0
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


def _floor_scaled(P, Q, C, d):
    """floor((P + Q*sqrt(d)) / C) for integers P, Q, C > 0, d non-square.

    Seed candidate from isqrt bounds on Q*sqrt(d) (exact to within 1), then
    certify f <= value < f+1 by exact sign tests, stepping if needed.
    """
    if Q == 0:
        return P // C
    r = isqrt(Q * Q * d)
    # Q*Q*d is never a perfect square for Q != 0, so floor(Q*sqrt(d)) is:
    fs = r if Q > 0 else -r - 1
    f = (P + fs) // C
    # value - f has the sign of (P - f*C) + Q*sqrt(d) since C > 0
    while _sign_int(P - f * C, Q, d) < 0:
        f -= 1
    while _sign_int(P - (f + 1) * C, Q, d) >= 0:
        f += 1
    return f


@dataclass(frozen=True)
class QuadIrrational:
    """Exact element p + q*sqrt(d) of Q(sqrt(d))."""

    p: Fraction
    q: Fraction
    d: int

    def __post_init__(self):
        _check_radicand(self.d)
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadIrrational):
            if other.d != self.d:
                raise RadicandError(
                    f"mismatched radicand: sqrt({self.d}) vs sqrt({other.d})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadIrrational(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadIrrational(self.p + other.p, self.q + other.q, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadIrrational(-self.p, -self.q, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadIrrational(self.p - other.p, self.q - other.q, self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadIrrational(
            self.p * other.p + self.q * other.q * self.d,
            self.p * other.q + self.q * other.p,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadIrrational(self.p, -self.q, self.d)

    def norm(self):
        """Field norm N(x) = p^2 - q^2*d, a rational."""
        return self.p * self.p - self.q * self.q * self.d

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.norm()
        if n == 0:
            # norm zero forces p = q = 0 since d is non-square
            raise ZeroDivisionError("division by zero field element")
        num = self * other.conjugate()
        return QuadIrrational(num.p / n, num.q / n, self.d)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    # -- exact order --------------------------------------------------------

    def sign(self):
        """Exact sign in {-1, 0, 1}."""
        if self.q == 0:
            return (self.p > 0) - (self.p < 0)
        P, Q, _ = self.scaled_triple()
        return _sign_int(P, Q, self.d)

    def _cmp(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        if isinstance(other, QuadIrrational):
            return (self.p, self.q, self.d) == (other.p, other.q, other.d)
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    # -- floors and conversions ---------------------------------------------

    def scaled_triple(self):
        """Integers (P, Q, C) with C > 0 and self == (P + Q*sqrt(d)) / C."""
        c = self.p.denominator * self.q.denominator // math.gcd(
            self.p.denominator, self.q.denominator
        )
        return (
            self.p.numerator * (c // self.p.denominator),
            self.q.numerator * (c // self.q.denominator),
            c,
        )

    def floor(self):
        P, Q, C = self.scaled_triple()
        return _floor_scaled(P, Q, C, self.d)

    def is_rational(self):
        return self.q == 0

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def __bool__(self):
        return self.p != 0 or self.q != 0

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"QuadIrrational({render(self)!r}, d={self.d})"


def compare(x, y):
    """Exact three-way comparison: -1, 0, or 1 as x <, ==, > y."""
    c = x._cmp(y)
    if c is NotImplemented:
        raise TypeError(f"cannot compare QuadIrrational with {type(y).__name__}")
    return c


def is_rational(x):
    """True iff x has no sqrt(d) component (decidable: d is non-square)."""
    return x.is_rational()


def floor_product(n, x):
    """The unique integer f with f <= n*x < f+1, certified by exact comparison.

    n must be a positive integer and x > 0.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if x.sign() <= 0:
        raise ValueError(f"x must be positive, got {x}")
    P, Q, C = x.scaled_triple()
    return _floor_scaled(n * P, n * Q, C, x.d)


def pairwise_rational_ratio(weights):
    """First (j, k, ratio) with a_j/a_k rational and j != k, or None.

    Indices are 1-based to match orbit-family and partition-set labels.
    """
    for j in range(len(weights)):
        for k in range(j + 1, len(weights)):
            ratio = weights[j] / weights[k]
            if ratio.is_rational():
                return (j + 1, k + 1, ratio)
    return None


# -- parsing and rendering ----------------------------------------------------

_TOKEN_RE = re.compile(r"(\d+)|(sqrt)|([+\-*/()])")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), pos))
        elif m.group(2) is not None:
            tokens.append(("sqrt", "sqrt", pos))
        else:
            tokens.append((m.group(3), m.group(3), pos))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for EXPR := TERM (('+'|'-') TERM)* with
    TERM := RAT | RAT '*' 'sqrt(' INT ')' | 'sqrt(' INT ')' and
    RAT := INT | INT '/' INT.  A leading '-' on the first term is accepted."""

    def __init__(self, text, d):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.d = d

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        sign = 1
        if self.peek()[0] == "-":
            self.take("-")
            sign = -1
        p, q = self.term()
        p, q = sign * p, sign * q
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            tp, tq = self.term()
            if op == "-":
                tp, tq = -tp, -tq
            p, q = p + tp, q + tq
        self.take("end")
        return QuadIrrational(p, q, self.d)

    def term(self):
        if self.peek()[0] == "sqrt":
            return Fraction(0), self.radical(Fraction(1))
        coeff = self.rational()
        if self.peek()[0] == "*":
            self.take("*")
            return Fraction(0), self.radical(coeff)
        return coeff, Fraction(0)

    def rational(self):
        num = self.take("int")[1]
        if self.peek()[0] == "/":
            self.take("/")
            den_tok = self.take("int")
            if den_tok[1] == 0:
                raise ExprSyntaxError("zero denominator", den_tok[2])
            return Fraction(num, den_tok[1])
        return Fraction(num)

    def radical(self, coeff):
        self.take("sqrt")
        self.take("(")
        rad_tok = self.take("int")
        self.take(")")
        _check_radicand(rad_tok[1])
        if rad_tok[1] != self.d:
            raise RadicandError(
                f"radicand {rad_tok[1]} does not match context sqrt({self.d})"
            )
        return coeff


def parse_expr(text, context):
    """Parse an expression like "3/2 - 1/2*sqrt(5)" into a QuadIrrational.

    `context` is a FieldContext (or a bare radicand); every sqrt radicand in
    the text must equal the context's d.
    """
    d = context.d if isinstance(context, FieldContext) else int(context)
    return _Parser(text, d).parse()


def _render_rat(r):
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def render(x):
    """Canonical form "p/q + r/s*sqrt(d)" with zero terms suppressed."""
    p, q = x.p, x.q
    if q == 0:
        return _render_rat(p)
    aq = abs(q)
    root = f"sqrt({x.d})" if aq == 1 else f"{_render_rat(aq)}*sqrt({x.d})"
    if p == 0:
        return root if q > 0 else f"-{root}"
    op = "+" if q > 0 else "-"
    return f"{_render_rat(p)}{op}{root}"


class FieldContext:
    """A fixed non-square radicand d; all elements built here share it."""

    def __init__(self, d):
        _check_radicand(d)
        self.d = d

    def element(self, p, q=0):
        return QuadIrrational(Fraction(p), Fraction(q), self.d)

    def sqrt_d(self):
        return self.element(0, 1)

    def parse(self, text):
        return parse_expr(text, self)

    def __repr__(self):
        return f"FieldContext(d={self.d})"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.d == self.d

    def __hash__(self):
        return hash(("FieldContext", self.d))
