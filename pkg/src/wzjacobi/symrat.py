"""Sparse Laurent polynomials and rational functions in q, X, Y.

X stands for q^n and Y for q^k, so shifting n or k becomes a substitution on
exponents.  Rational functions are never gcd-reduced; equality is tested by
cross-multiplication.
"""
from __future__ import annotations

from math import gcd
from typing import Mapping

from .fps import NotInvertibleError, TruncatedSeries, invert, mul

Exps = tuple[int, int, int]

VARIABLES = ("q", "X", "Y")

SHIFTS = ("n+1", "k-1", "k+1")


class LaurentPoly:
    """Immutable sparse polynomial with signed exponents on (q, X, Y)."""

    __slots__ = ("terms", "_key")

    def __init__(self, terms: Mapping[Exps, int] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                clean[tuple(e)] = int(c)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_key", tuple(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "LaurentPoly":
        e = [0, 0, 0]
        e[VARIABLES.index(name)] = power
        return cls({tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Exps, coeff: int = 1) -> "LaurentPoly":
        return cls({tuple(exps): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[Exps, int] = {}
        for (a0, a1, a2), c in self.terms.items():
            for (b0, b1, b2), d in other.terms.items():
                e = (a0 + b0, a1 + b1, a2 + b2)
                out[e] = out.get(e, 0) + c * d
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent-polynomial inverses")
            ((x, c),) = self.terms.items()
            if c not in (1, -1):
                raise ValueError("monomial coefficient is not a unit")
            return LaurentPoly({(-x[0], -x[1], -x[2]): c}) ** (-e)
        result = LaurentPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def exact_div_int(self, d: int) -> "LaurentPoly":
        return LaurentPoly({e: c // d for e, c in self.terms.items()})

    def min_exponents(self) -> Exps:
        if not self.terms:
            return (0, 0, 0)
        return tuple(min(e[i] for e in self.terms) for i in range(3))

    def times_monomial(self, exps: Exps) -> "LaurentPoly":
        return LaurentPoly(
            {(e[0] + exps[0], e[1] + exps[1], e[2] + exps[2]): c for e, c in self.terms.items()}
        )

    def substitute(self, which: str) -> "LaurentPoly":
        """Apply an index shift: ``n+1`` is X -> qX, ``k-1`` is Y -> Y/q, ``k+1`` is Y -> qY."""
        if which == "n+1":
            f = lambda e: (e[0] + e[1], e[1], e[2])
        elif which == "k-1":
            f = lambda e: (e[0] - e[2], e[1], e[2])
        elif which == "k+1":
            f = lambda e: (e[0] + e[2], e[1], e[2])
        else:
            raise ValueError(f"unknown shift {which!r}; expected one of {SHIFTS}")
        return LaurentPoly({f(e): c for e, c in self.terms.items()})

    def at(self, n: int, k: int) -> dict[int, int]:
        """Substitute X = q^n, Y = q^k; returns a Laurent polynomial in q as {exponent: coeff}."""
        out: dict[int, int] = {}
        for (a, b, c), coeff in self.terms.items():
            e = a + n * b + k * c
            out[e] = out.get(e, 0) + coeff
        return {e: c for e, c in out.items() if c}

    def leading_term(self) -> tuple[Exps, int]:
        """Largest exponent triple in the canonical ordering (for reporting)."""
        return self._key[-1]

    def __repr__(self):
        return f"LaurentPoly({self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self._key):
            mono = "*".join(
                v if p == 1 else f"{v}^{p}" for v, p in zip(VARIABLES, e) if p
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


class ZeroDenominatorError(ZeroDivisionError):
    """Raised when a rational function would get a zero denominator."""


class RationalFn:
    """Quotient ``num/den`` of Laurent polynomials, not reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = LaurentPoly.const(num)
        if den is None:
            den = LaurentPoly.const(1)
        elif isinstance(den, int):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise ZeroDenominatorError("rational function with zero denominator")
        # content removal keeps coefficients small without changing the value
        g = gcd(num.content(), den.content())
        if den.leading_term()[1] < 0:
            g = -g
        if g not in (0, 1):
            num, den = num.exact_div_int(g), den.exact_div_int(g)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return RationalFn(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDenominatorError("division by the zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, e: int):
        if e >= 0:
            return RationalFn(self.num**e, self.den**e)
        if self.num.is_zero():
            raise ZeroDenominatorError("negative power of the zero rational function")
        return RationalFn(self.den ** (-e), self.num ** (-e))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return rat_equal(self, other)

    __hash__ = None

    def cleared(self) -> "RationalFn":
        """Same function with num and den shifted by a common monomial so every exponent is >= 0."""
        lo_n, lo_d = self.num.min_exponents(), self.den.min_exponents()
        if self.num.is_zero():
            lo_n = lo_d
        m = tuple(-min(a, b) for a, b in zip(lo_n, lo_d))
        return RationalFn(self.num.times_monomial(m), self.den.times_monomial(m))

    def shift(self, which: str) -> "RationalFn":
        return shift(self, which)

    def __repr__(self):
        return f"RationalFn(({self.num}) / ({self.den}))"

    __str__ = __repr__


def cross_difference(a: RationalFn, b: RationalFn) -> LaurentPoly:
    """``num_a*den_b - num_b*den_a``; zero exactly when a and b are equal."""
    a, b = a.cleared(), b.cleared()
    return a.num * b.den - b.num * a.den


def rat_equal(a: RationalFn, b: RationalFn) -> bool:
    return cross_difference(a, b).is_zero()


def shift(a: RationalFn, which: str) -> RationalFn:
    return RationalFn(a.num.substitute(which), a.den.substitute(which))


def laurent_to_series(poly: Mapping[int, int], offset: int, N: int) -> TruncatedSeries:
    """Series for ``q**offset * poly``; raises if a negative power survives."""
    c = [0] * N
    for e, coeff in poly.items():
        e += offset
        if e < 0:
            raise NotInvertibleError(f"term q^{e} is a pole at q = 0, not a power series")
        if e < N:
            c[e] += coeff
    return TruncatedSeries(c, N)


def specialize(a: RationalFn, n: int, k: int, N: int) -> TruncatedSeries:
    """Evaluate at X = q^n, Y = q^k as a series truncated at order N."""
    num, den = a.num.at(n, k), a.den.at(n, k)
    if not den:
        raise NotInvertibleError(f"denominator vanishes identically at n={n}, k={k}")
    lo = min(den)
    if den[lo] not in (1, -1):
        raise NotInvertibleError(
            f"specialized denominator has leading coefficient {den[lo]} at n={n}, k={k}"
        )
    return mul(laurent_to_series(num, -lo, N), invert(laurent_to_series(den, -lo, N)))
