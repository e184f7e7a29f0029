"""Exact arithmetic in Q(sqrt(q)).

Every structure constant in the twisted algebras is an integer count times
an integer power of t = sqrt(q), so coefficients live in the quadratic
extension Q(t), t^2 = q. An element is stored as an exact pair (a, b) of
rationals meaning a + b*t. When q is a perfect square t is rational and
elements are canonicalized to b = 0, so equality is plain structural
equality in every case.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Union

RationalLike = Union[int, Fraction]


def _sqrt_int(q: int):
    r = math.isqrt(q)
    return r if r * r == q else None


class Coeff:
    """An element a + b*t of Q(sqrt(q)), exact and immutable."""

    __slots__ = ("a", "b", "q")

    def __init__(self, q: int, a: RationalLike = 0, b: RationalLike = 0):
        a = Fraction(a)
        b = Fraction(b)
        r = _sqrt_int(q)
        if r is not None and b:
            a += r * b
            b = Fraction(0)
        self.q = q
        self.a = a
        self.b = b

    def _check(self, other: "Coeff"):
        if self.q != other.q:
            raise ValueError(f"mixing coefficients over q={self.q} and q={other.q}")

    def __add__(self, other: "Coeff") -> "Coeff":
        self._check(other)
        return Coeff(self.q, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Coeff") -> "Coeff":
        self._check(other)
        return Coeff(self.q, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Coeff":
        return Coeff(self.q, -self.a, -self.b)

    def __mul__(self, other: "Coeff") -> "Coeff":
        self._check(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return Coeff(self.q, a * c + self.q * b * d, a * d + b * c)

    def inverse(self) -> "Coeff":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(sqrt(q))")
        a, b = self.a, self.b
        # (a + bt)(a - bt) = a^2 - q b^2, nonzero: for non-square q by
        # irrationality of t, for square q because b = 0 in canonical form
        n = a * a - self.q * b * b
        return Coeff(self.q, a / n, -b / n)

    def __truediv__(self, other: "Coeff") -> "Coeff":
        self._check(other)
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Coeff)
            and self.q == other.q
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __repr__(self):
        return f"Coeff({self.q}, {self.a}, {self.b})"

    def __str__(self):
        return render(self)


def render(c: Coeff) -> str:
    """Exact textual form like ``1/2 + 3*t``; used in JSON exports."""
    if c.is_zero():
        return "0"
    parts = []
    if c.a:
        parts.append(str(c.a))
    if c.b:
        if c.b == 1:
            tpart = "t"
        elif c.b == -1:
            tpart = "-t"
        else:
            tpart = f"{c.b}*t"
        if parts and c.b > 0:
            parts.append(f"+ {tpart}")
        elif parts:
            parts.append(f"- {tpart[1:]}" if tpart.startswith("-") else tpart)
        else:
            parts.append(tpart)
    return " ".join(parts)


class FormalSum:
    """Finitely supported map from hashable basis keys to Coeff.

    Zero coefficients are dropped eagerly, so structural equality of the
    underlying dict is equality of elements.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict = {}
        if terms:
            for key, c in terms.items() if isinstance(terms, dict) else terms:
                self.add_term(key, c)

    def add_term(self, key, c: Coeff):
        if c.is_zero():
            return
        cur = self.terms.get(key)
        if cur is None:
            self.terms[key] = c
        else:
            s = cur + c
            if s.is_zero():
                del self.terms[key]
            else:
                self.terms[key] = s

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(dict(self.terms))
        for k, c in other.terms.items():
            out.add_term(k, c)
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(dict(self.terms))
        for k, c in other.terms.items():
            out.add_term(k, -c)
        return out

    def scale(self, c: Coeff) -> "FormalSum":
        out = FormalSum()
        if c.is_zero():
            return out
        for k, v in self.terms.items():
            out.add_term(k, v * c)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def coefficient(self, key) -> Optional[Coeff]:
        return self.terms.get(key)

    def __repr__(self):
        return f"FormalSum({self.terms!r})"


class CoeffRing:
    """Factory for coefficients over a fixed q."""

    def __init__(self, q: int):
        self.q = q
        self.zero = Coeff(q)
        self.one = Coeff(q, 1)
        self.t = Coeff(q, 0, 1)

    def from_rational(self, a: RationalLike) -> Coeff:
        return Coeff(self.q, a)

    def tpow(self, k: int) -> Coeff:
        """t^k for any integer k, reduced via t^2 = q."""
        half, odd = divmod(k, 2)
        base = Fraction(self.q) ** half
        if odd:
            return Coeff(self.q, 0, base)
        return Coeff(self.q, base)

    def __repr__(self):
        return f"CoeffRing(q={self.q})"
