"""Truncated formal power series in ``q`` with exact integer coefficients.

A :class:`TruncatedSeries` is known modulo ``q**order``.  Binary operations
truncate to the smaller order of their operands, so a result never claims
more precision than its inputs carry.
"""
from __future__ import annotations

from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence


class NotInvertibleError(ArithmeticError):
    """Raised when a series (or a specialized denominator) has no inverse
    over the integers, i.e. its constant term is not +1 or -1."""


class TruncationError(IndexError):
    """Raised when a coefficient at or beyond the truncation order is requested."""


class TruncatedSeries:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[int], order: int | None = None):
        coeffs = [int(c) for c in coeffs]
        if order is None:
            order = len(coeffs)
        if order < 1:
            raise ValueError(f"truncation order must be positive, got {order}")
        if len(coeffs) < order:
            coeffs.extend([0] * (order - len(coeffs)))
        object.__setattr__(self, "coeffs", tuple(coeffs[:order]))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((1,), order)

    @classmethod
    def monomial(cls, exponent: int, order: int, coeff: int = 1) -> "TruncatedSeries":
        """``coeff * q**exponent``; vanishes when the exponent is past the order."""
        if exponent < 0:
            raise ValueError("negative exponent is not a power series")
        c = [0] * order
        if exponent < order:
            c[exponent] = coeff
        return cls(c, order)

    # -- access -------------------------------------------------------

    def __getitem__(self, i: int) -> int:
        if not isinstance(i, int):
            raise TypeError("series index must be an integer")
        if i < 0:
            raise IndexError(f"negative power q^{i}")
        if i >= self.order:
            raise TruncationError(
                f"coefficient of q^{i} is unknown: series is truncated at order {self.order}"
            )
        return self.coeffs[i]

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise TruncationError(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[:order], order)

    def with_coefficient(self, i: int, value: int) -> "TruncatedSeries":
        """Copy with one coefficient replaced (used for fault injection)."""
        self[i]
        c = list(self.coeffs)
        c[i] = value
        return TruncatedSeries(c, self.order)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries((other,), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries((other,), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries([other * c for c in self.coeffs], self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return power(self, e)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"TruncatedSeries({list(self.coeffs)!r}, order={self.order})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}" if mono else str(abs(c))
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            s = "0"
        else:
            s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, body in terms[1:]:
                s += f" {sign} {body}"
        return f"{s} + O(q^{self.order})"


def _nonzero(coeffs: Sequence[int], limit: int):
    return [(i, c) for i, c in enumerate(coeffs[:limit]) if c]


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    return TruncatedSeries([x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])], n)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Truncated Cauchy product (schoolbook, skipping zero coefficients)."""
    n = min(a.order, b.order)
    na = _nonzero(a.coeffs, n)
    nb = _nonzero(b.coeffs, n)
    if len(na) > len(nb):
        na, nb = nb, na
    out = [0] * n
    for i, c in na:
        for j, d in nb:
            k = i + j
            if k >= n:
                break
            out[k] += c * d
    return TruncatedSeries(out, n)


def invert(a: TruncatedSeries) -> TruncatedSeries:
    a0 = a.coeffs[0]
    if a0 not in (1, -1):
        raise NotInvertibleError(
            f"series with constant term {a0} is not invertible over the integers"
        )
    n = a.order
    tail = [(j, c) for j, c in _nonzero(a.coeffs, n) if j > 0]
    b = [0] * n
    b[0] = a0
    for i in range(1, n):
        s = 0
        for j, c in tail:
            if j > i:
                break
            s += c * b[i - j]
        # a0 is its own inverse
        b[i] = -a0 * s
    return TruncatedSeries(b, n)


def power(a: TruncatedSeries, e: int) -> TruncatedSeries:
    if e < 0:
        raise ValueError("use invert() for negative powers")
    result = TruncatedSeries.one(a.order)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def shift(a: TruncatedSeries, s: int) -> TruncatedSeries:
    """Multiply by ``q**s`` (``s >= 0``), keeping the order."""
    if s < 0:
        raise ValueError("shift must be non-negative")
    return TruncatedSeries([0] * s + list(a.coeffs[: max(a.order - s, 0)]), a.order)


def substitute_neg_q(a: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries([-c if i & 1 else c for i, c in enumerate(a.coeffs)], a.order)


def expand_unit_factor(sign: int, m: int, e: int, N: int) -> TruncatedSeries:
    """Truncated expansion of ``(1 + sign*q**m)**e`` for any integer ``e``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if m < 1:
        raise ValueError("m must be at least 1")
    base = TruncatedSeries.one(N)
    if m < N:
        c = [0] * N
        c[0] = 1
        c[m] = sign
        base = TruncatedSeries(c, N)
    p = power(base, abs(e))
    return invert(p) if e < 0 else p


@lru_cache(maxsize=4096)
def h_series(n: int, N: int) -> TruncatedSeries:
    """``prod_{j=1..n} (1+q^j)/(1-q^j)`` mod ``q^N``; the zero series for ``n < 0``."""
    if n < 0:
        return TruncatedSeries.zero(N)
    c = [0] * N
    c[0] = 1
    # factors with j >= N are 1 mod q^N
    for j in range(1, min(n, N - 1) + 1):
        for i in range(N - 1, j - 1, -1):
            c[i] += c[i - j]
        for i in range(j, N):
            c[i] += c[i - j]
    return TruncatedSeries(c, N)


def theta_partial(n: int, N: int) -> TruncatedSeries:
    """``sum_{k=-n..n} (-q)^(k^2)`` mod ``q^N``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    c = [0] * N
    c[0] = 1
    for k in range(1, n + 1):
        if k * k >= N:
            break
        c[k * k] += 2 * (-1) ** k
    return TruncatedSeries(c, N)


def theta_full(N: int) -> TruncatedSeries:
    """``sum_{k in Z} q^(k^2)`` mod ``q^N``."""
    c = [0] * N
    c[0] = 1
    for k in range(1, isqrt(N - 1) + 1):
        c[k * k] += 2
    return TruncatedSeries(c, N)


def lambert_rhs(N: int) -> TruncatedSeries:
    """``1 + 8 sum_{k>=1} q^k / (1 + (-q)^k)^2`` mod ``q^N``."""
    total = TruncatedSeries.one(N)
    for k in range(1, N):
        sign = -1 if k & 1 else 1
        total = total + 8 * shift(expand_unit_factor(sign, k, -2, N), k)
    return total


def a_prime_lhs(N: int) -> TruncatedSeries:
    """``1 + 8 sum_{k>=1} (-q)^k / (1 + q^k)^2`` mod ``q^N``."""
    total = TruncatedSeries.one(N)
    for k in range(1, N):
        term = shift(expand_unit_factor(1, k, -2, N), k)
        total = total + (-8 if k & 1 else 8) * term
    return total


def expand_z_over_1pz2(sign: int, exponent: int, N: int) -> TruncatedSeries:
    """``z/(1+z)^2 = sum_{r>=1} (-1)^(r+1) r z^r`` with ``z = sign * q**exponent``.

    For ``z = (-q)^k`` pass ``sign=(-1)**k, exponent=k``.
    """
    if exponent < 1:
        raise ValueError("exponent must be at least 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = [0] * N
    r = 1
    while r * exponent < N:
        c[r * exponent] = (-1) ** (r + 1) * r * sign**r
        r += 1
    return TruncatedSeries(c, N)


def double_sum(N: int) -> TruncatedSeries:
    """``sum_{k,r>=1} (-1)^((k+1)(r+1)) r q^(kr)`` mod ``q^N``."""
    c = [0] * N
    for k in range(1, N):
        for r in range(1, (N - 1) // k + 1):
            c[k * r] += -r if (k & 1 == 0 and r & 1 == 0) else r
    return TruncatedSeries(c, N)
