"""Number-theoretic oracles: lattice-point counts and divisor sums.

Nothing here uses the q-series identities under test; ``r4`` comes from
counting lattice points, divisor sums from trial division.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from . import fps
from .report import FAIL, PASS, Discrepancy, VerificationReport


@lru_cache(maxsize=16)
def r2_table(n_max: int) -> tuple[int, ...]:
    """``r2[m]`` = number of integer pairs (x, y) with x^2 + y^2 = m, for m <= n_max."""
    counts = [0] * (n_max + 1)
    R = isqrt(n_max)
    for x in range(-R, R + 1):
        rest = n_max - x * x
        ymax = isqrt(rest)
        for y in range(-ymax, ymax + 1):
            counts[x * x + y * y] += 1
    return tuple(counts)


def r4_table(n_max: int) -> list[int]:
    """``r4`` for every m <= n_max, by convolving the 2-square counts."""
    r2 = r2_table(n_max)
    return [sum(r2[a] * r2[m - a] for a in range(m + 1)) for m in range(n_max + 1)]


def r4_enumerate(n: int) -> int:
    """Number of integer vectors (x1, x2, x3, x4) with squares summing to n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    r2 = r2_table(n)
    return sum(r2[a] * r2[n - a] for a in range(n + 1))


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError(f"divisors are defined for n >= 1, got {n}")
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def sigma(n: int) -> int:
    return sum(divisors(n))


def sigma_not4(n: int) -> int:
    """Sum of the divisors of n that are not multiples of 4."""
    return sum(d for d in divisors(n) if d % 4)


def weighted_divisor_sum(n: int) -> int:
    """``sum_{r | n} (-1)^((r+1)(n/r+1)) r``."""
    total = 0
    for r in divisors(n):
        both_even = r % 2 == 0 and (n // r) % 2 == 0
        total += -r if both_even else r
    return total


def divisor_chain(n: int) -> dict[str, int]:
    divs = divisors(n)
    s = sum(divs)
    return {
        "sigma-minus-2*even-pairs": s - 2 * sum(r for r in divs if r % 2 == 0 and (n // r) % 2 == 0),
        "sigma-minus-multiples-of-4": s - sum(d for d in divs if d % 4 == 0),
        "sigma_not4": sigma_not4(n),
        "weighted": weighted_divisor_sum(n),
    }


def divisor_chain_check(n: int) -> VerificationReport:
    values = divisor_chain(n)
    target = values["sigma_not4"]
    for name, v in values.items():
        if v != target:
            return VerificationReport(
                "divisor-chain", FAIL, n, Discrepancy(n, target, v), {"n": n}, note=name
            )
    return VerificationReport("divisor-chain", PASS, n, None, {"n": n})


def divisor_chain_sweep(n_max: int) -> VerificationReport:
    for n in range(1, n_max + 1):
        r = divisor_chain_check(n)
        if not r.passed:
            return VerificationReport(
                "divisor-chain", FAIL, n_max, r.first_discrepancy, {"n_max": n_max}, note=r.note
            )
    return VerificationReport("divisor-chain", PASS, n_max, None, {"n_max": n_max})


@dataclass(frozen=True)
class DivisorProfile:
    n: int
    r4: int
    sigma_not4: int
    weighted: int


def divisor_profile(n: int, r4: int | None = None) -> DivisorProfile:
    return DivisorProfile(
        n, r4_enumerate(n) if r4 is None else r4, sigma_not4(n), weighted_divisor_sum(n)
    )


def jacobi_check(n_max: int, N: int | None = None, series_max: int | None = None) -> VerificationReport:
    """``r4(n) = 8*sigma_not4(n)`` for ``1 <= n <= n_max``, and ``r4(n)`` equals the
    coefficient of ``q^n`` in ``theta^4`` for ``n <= series_max`` (default ``n_max``)."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if series_max is None:
        series_max = n_max
    if N is None:
        N = series_max + 1
    if N < series_max + 1:
        raise ValueError(f"order {N} is too small for n up to {series_max}")
    params = {"n_max": n_max, "N": N}
    r4 = r4_table(n_max)
    theta4 = fps.power(fps.theta_full(N), 4) if series_max else None
    for n in range(1, n_max + 1):
        if n <= series_max and theta4[n] != r4[n]:
            return VerificationReport(
                "jacobi", FAIL, n_max, Discrepancy(n, r4[n], theta4[n]), params,
                note="theta^4 coefficient vs lattice count",
            )
        if r4[n] != 8 * sigma_not4(n):
            return VerificationReport(
                "jacobi", FAIL, n_max, Discrepancy(n, 8 * sigma_not4(n), r4[n]), params,
                note="lattice count vs 8*sigma_not4",
            )
    return VerificationReport("jacobi", PASS, n_max, None, params)
