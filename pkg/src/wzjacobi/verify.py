"""Concrete summands and certificates of the four-square lemma, and the checks
built on them.

Conventions:

* ``H_m`` is the zero series for ``m < 0``, so ``f1`` vanishes
  for ``|k| > n`` and ``f2`` for ``k < 0``.
* ``g1`` is evaluated in the form where the factor ``(1+q^k)^2`` and the
  factor ``(1+q^(n+k+1))/(1-q^(n+k+1))`` have been absorbed into
  ``H_{n+k+1}``.  It agrees with ``prefactor * f1`` for ``|k| <= n`` and is the
  value that makes the telescoping relation hold at ``k = -n-1``.

Every ``check_*`` function takes an optional ``tamper`` callable, applied to
the computed side before comparison; tests use it for fault injection.
"""
from __future__ import annotations

from dataclasses import replace
from functools import lru_cache
from math import isqrt
from typing import Callable, Optional

from . import fps
from .certlang import CertificateSet
from .fps import NotInvertibleError, TruncatedSeries, expand_unit_factor, h_series, invert, shift
from .report import (
    FAIL,
    PASS,
    Discrepancy,
    VerificationReport,
    combine,
    compare_series,
)
from .symrat import cross_difference, specialize

Tamper = Optional[Callable[[TruncatedSeries], TruncatedSeries]]


def _apply(tamper: Tamper, s: TruncatedSeries) -> TruncatedSeries:
    return tamper(s) if tamper is not None else s


@lru_cache(maxsize=1024)
def _h_inverse(n: int, N: int) -> TruncatedSeries:
    return invert(h_series(n, N))


@lru_cache(maxsize=1024)
def _h_squared(n: int, N: int) -> TruncatedSeries:
    h = h_series(n, N)
    return h * h


def unit_factor(sign: int, m: int, e: int, N: int) -> tuple[int, TruncatedSeries]:
    """``(1 + sign*q^m)^e`` for any integer ``m`` as ``(s, series)`` meaning ``q^s * series``."""
    if m > 0:
        return 0, expand_unit_factor(sign, m, e, N)
    if m == 0:
        base = 1 + sign
        if base == 0 and e < 0:
            raise NotInvertibleError(f"factor (1 {'+' if sign > 0 else '-'} q^0) vanishes")
        if e < 0:
            if base not in (1, -1):
                raise NotInvertibleError(f"factor (1 + q^0) = {base} is not a unit")
            return 0, TruncatedSeries.monomial(0, N, base)
        return 0, TruncatedSeries.monomial(0, N, base**e)
    # 1 + sign*q^m = sign*q^m * (1 + sign*q^-m)
    return m * e, sign**e * expand_unit_factor(sign, -m, e, N)


def _mul_laurent(parts, N: int) -> TruncatedSeries:
    total_shift = 0
    out = TruncatedSeries.one(N)
    for s, series in parts:
        total_shift += s
        out = out * series
    if total_shift < 0:
        if not out.is_zero():
            raise NotInvertibleError(f"result has a pole q^{total_shift}")
        return out
    return shift(out, total_shift)


# -- summands and certificates ---------------------------------------


@lru_cache(maxsize=8192)
def f1(n: int, k: int, N: int) -> TruncatedSeries:
    """``4(-q)^k/(1+q^k)^2 * H_n^2 H_{n+k} H_{n-k}``."""
    if n < 0 or abs(k) > n:
        return TruncatedSeries.zero(N)
    m = abs(k)
    if m == 0:
        # 4/(1+1)^2
        base = TruncatedSeries.one(N)
    else:
        # (-q)^k/(1+q^k)^2 = (-1)^k q^|k| / (1+q^|k|)^2 for either sign of k
        base = shift(expand_unit_factor(1, m, -2, N), m) * (4 * (-1) ** m)
    return base * (_h_squared(n, N) * (h_series(n + k, N) * h_series(n - k, N)))


@lru_cache(maxsize=8192)
def f2(n: int, k: int, N: int) -> TruncatedSeries:
    """``2(-q^(n+1))^k/(1+q^k) * H_k/H_n``; zero for ``k < 0``."""
    if n < 0:
        raise ValueError("f2 is defined for n >= 0")
    if k < 0:
        return TruncatedSeries.zero(N)
    if k == 0:
        base = TruncatedSeries.one(N)
    else:
        base = shift(expand_unit_factor(1, k, -1, N), (n + 1) * k) * (2 * (-1) ** k)
    return base * (h_series(k, N) * _h_inverse(n, N))


@lru_cache(maxsize=8192)
def g1(n: int, k: int, N: int) -> TruncatedSeries:
    """``4(-1)^k q^(n+1) (1+q^(2n+2)) H_n^2 H_{n+k+1} H_{n-k} / ((1-q^(n+1))^3 (1+q^(n+1)))``."""
    if n < 0:
        raise ValueError("g1 is defined for n >= 0")
    if k + n + 1 < 0 or k > n:
        return TruncatedSeries.zero(N)
    m = n + 1
    pre = (
        expand_unit_factor(1, 2 * m, 1, N)
        * expand_unit_factor(-1, m, -3, N)
        * expand_unit_factor(1, m, -1, N)
    )
    pre = shift(pre, m) * (-4 if k & 1 else 4)
    return pre * (_h_squared(n, N) * (h_series(n + k + 1, N) * h_series(n - k, N)))


def g1_prefactor(n: int, k: int, N: int) -> TruncatedSeries:
    """``G1/F1`` evaluated literally; raises when a denominator factor vanishes."""
    parts = [(n - k + 1, TruncatedSeries.one(N))]
    parts.append(unit_factor(1, 2 * n + 2, 1, N))
    parts.append(unit_factor(1, k, 2, N))
    parts.append(unit_factor(1, n + k + 1, 1, N))
    for sign, m, e, label in (
        (-1, n + 1, -3, "(1 - q^(n+1))^3"),
        (-1, n + k + 1, -1, "(1 - q^(n+k+1))"),
        (1, n + 1, -1, "(1 + q^(n+1))"),
    ):
        try:
            parts.append(unit_factor(sign, m, e, N))
        except NotInvertibleError as exc:
            raise NotInvertibleError(
                f"denominator factor {label} is not invertible at n={n}, k={k}"
            ) from exc
    return _mul_laurent(parts, N)


@lru_cache(maxsize=8192)
def g2(n: int, k: int, N: int) -> TruncatedSeries:
    """``(-q^(n+1))(1+q^k)/(1+q^(n+1)) * f2(n,k)``."""
    if k < 0:
        return TruncatedSeries.zero(N)
    one_plus = TruncatedSeries.monomial(0, N, 2) if k == 0 else expand_unit_factor(1, k, 1, N)
    pre = shift(one_plus * expand_unit_factor(1, n + 1, -1, N), n + 1) * -1
    return pre * f2(n, k, N)


BUILDERS = {"lemma-a": (f1, g1), "lemma-b": (f2, g2)}


def builders_for(c: CertificateSet):
    try:
        return BUILDERS[c.name]
    except KeyError:
        raise KeyError(
            f"no concrete summand builder for certificate {c.name!r}; known: {sorted(BUILDERS)}"
        ) from None


# -- the two lemma sums -------------------------------------------------


def l1(n: int, N: int) -> TruncatedSeries:
    total = TruncatedSeries.zero(N)
    for k in range(-n, n + 1):
        total = total + f1(n, k, N)
    return total


def l2(n: int, N: int) -> TruncatedSeries:
    total = TruncatedSeries.zero(N)
    for k in range(0, n + 1):
        total = total + f2(n, k, N)
    return total


def check_l1(n: int, N: int, tamper: Tamper = None) -> VerificationReport:
    return compare_series("lemma-a", TruncatedSeries.one(N), _apply(tamper, l1(n, N)), n=n, N=N)


def check_l2(n: int, N: int, tamper: Tamper = None) -> VerificationReport:
    return compare_series(
        "lemma-b", fps.theta_partial(n, N), _apply(tamper, l2(n, N)), n=n, N=N
    )


def step_target(n: int, N: int) -> TruncatedSeries:
    """``2(-q)^((n+1)^2)``; the sign is the parity of ``(n+1)^2``."""
    e = (n + 1) ** 2
    return TruncatedSeries.monomial(e, N, -2 if e & 1 else 2) if e < N else TruncatedSeries.zero(N)


def check_steps(n: int, N: int, tamper: Tamper = None) -> VerificationReport:
    d1 = _apply(tamper, l1(n + 1, N) - l1(n, N))
    d2 = _apply(tamper, l2(n + 1, N) - l2(n, N))
    return combine(
        "lemma-steps",
        [
            compare_series("L1(n+1)-L1(n)", TruncatedSeries.zero(N), d1, n=n, N=N),
            compare_series("L2(n+1)-L2(n)", step_target(n, N), d2, n=n, N=N),
        ],
        n=n,
        N=N,
    )


# -- WZ checks -------------------------------------------------------------


def wz_sides(c: CertificateSet):
    """Both sides of the WZ relation divided by F(n,k), as rational functions."""
    lhs = c.rational("ratio_n") - 1
    rhs = c.rational("cert") - c.rational("cert").shift("k-1") / c.rational("ratio_k")
    return lhs, rhs


def check_wz_symbolic(c: CertificateSet) -> VerificationReport:
    lhs, rhs = wz_sides(c)
    diff = cross_difference(lhs, rhs)
    size = len(diff.terms) if diff.terms else len((lhs.num * rhs.den).terms)
    subject = f"wz-symbolic {c.name}"
    if diff.is_zero():
        return VerificationReport(subject, PASS, size)
    exps, coeff = diff.leading_term()
    # expected coefficient of the cross-multiplied difference is 0
    return VerificationReport(subject, FAIL, size, Discrepancy(exps, 0, coeff))


def check_wz_numeric(c: CertificateSet, n: int, N: int, tamper: Tamper = None) -> VerificationReport:
    f, g = builders_for(c)
    reports = []
    for k in range(c.k_min(n) - 1, c.k_max(n) + 2):
        lhs = _apply(tamper, f(n + 1, k, N) - f(n, k, N))
        rhs = g(n, k, N) - g(n, k - 1, N)
        reports.append(compare_series(f"k={k}", rhs, lhs, k=k))
    return combine(f"wz-numeric {c.name}", reports, n=n, N=N)


def telescoping_reconstruction(c: CertificateSet, n: int, N: int) -> VerificationReport:
    """Summing the relation over the extended k-range leaves two boundary G-terms."""
    f, g = builders_for(c)
    lo, hi = c.k_min(n) - 1, c.k_max(n) + 1
    total = TruncatedSeries.zero(N)
    for k in range(lo, hi + 1):
        total = total + (f(n + 1, k, N) - f(n, k, N))
    return compare_series(
        f"telescoping {c.name}", g(n, hi, N) - g(n, lo - 1, N), total, n=n, N=N
    )


def _laurent_times(poly: dict, s: int, series: TruncatedSeries) -> TruncatedSeries:
    N = series.order
    c = [0] * N
    for e, coeff in poly.items():
        e += s
        if e < N:
            c[e] += coeff
    return TruncatedSeries(c, N) * series


def ratio_matches(expr, n: int, k: int, top: TruncatedSeries, bottom: TruncatedSeries) -> Optional[Discrepancy]:
    """Check ``top/bottom == expr(q^n, q^k)`` by cross-multiplication."""
    num, den = expr.num.at(n, k), expr.den.at(n, k)
    if not den:
        return Discrepancy(0, 1, 0)
    s = -min(0, min(den), min(num, default=0))
    lhs = _laurent_times(den, s, top)
    rhs = _laurent_times(num, s, bottom)
    rep = compare_series("", lhs, rhs)
    return rep.first_discrepancy


def ratio_consistency(c: CertificateSet, n_max: int = 6, k_abs: int = 6, N: int = 60) -> VerificationReport:
    """Tie the certificate's ratio expressions to the concrete builders at
    every ``1 <= n <= n_max, |k| <= k_abs`` where the summands involved are nonzero."""
    f, g = builders_for(c)
    compared = 0
    for n in range(1, n_max + 1):
        for k in range(-k_abs, k_abs + 1):
            if k < 0 and f is f2:
                continue
            cases = (
                ("ratio_n", f(n + 1, k, N), f(n, k, N)),
                ("ratio_k", f(n, k, N), f(n, k - 1, N)),
                ("cert", g(n, k, N), f(n, k, N)),
            )
            for which, top, bottom in cases:
                if top.is_zero() or bottom.is_zero():
                    continue
                compared += 1
                bad = ratio_matches(c.rational(which), n, k, top, bottom)
                if bad is not None:
                    return VerificationReport(
                        f"ratio-consistency {c.name}", FAIL, N, bad,
                        {"n": n, "k": k, "N": N}, note=which,
                    )
    return VerificationReport(
        f"ratio-consistency {c.name}", PASS, N, None, {"n_max": n_max, "N": N},
        note=f"{compared} ratios compared",
    )


def check_certificate(c: CertificateSet, n_max: int = 6, N: int = 60) -> list[VerificationReport]:
    """Symbolic check, numeric spot checks for ``0 <= n <= n_max`` and ratio consistency."""
    out = [check_wz_symbolic(c)]
    out.extend(check_wz_numeric(c, n, N) for n in range(n_max + 1))
    out.append(ratio_consistency(c, n_max=n_max, N=N))
    return out


# -- limits, theta^4 identities -----------------------------------------


def check_limit_a(N: int, tamper: Tamper = None) -> VerificationReport:
    expected = fps.power(_h_inverse(N, N), 4)
    return compare_series("limit-a", expected, _apply(tamper, fps.a_prime_lhs(N)), N=N)


def check_limit_b(N: int, tamper: Tamper = None) -> VerificationReport:
    n = isqrt(N - 1) + 1
    got = fps.theta_partial(n, N)
    return compare_series("limit-b", _h_inverse(N, N), _apply(tamper, got), N=N)


def check_eq2(N: int, tamper: Tamper = None) -> VerificationReport:
    got = fps.power(fps.theta_full(N), 4)
    return compare_series("eq2", fps.lambert_rhs(N), _apply(tamper, got), N=N)


def eq3_lhs(n: int, N: int) -> TruncatedSeries:
    """Product of the two lemma sums rewritten so that it equals ``theta_partial(n)^4``."""
    first = TruncatedSeries.zero(N)
    for k in range(0, n + 1):
        if k == 0:
            term = TruncatedSeries.one(N)
        else:
            term = shift(expand_unit_factor(1, k, -1, N), (n + 1) * k) * (2 * (-1) ** k)
        first = first + term * h_series(k, N)
    hinv2 = _h_inverse(n, N) * _h_inverse(n, N)
    second = TruncatedSeries.zero(N)
    for k in range(-n, n + 1):
        m = abs(k)
        if m == 0:
            term = TruncatedSeries.one(N)
        else:
            term = shift(expand_unit_factor(1, m, -2, N), m) * (4 * (-1) ** m)
        second = second + term * (h_series(n + k, N) * h_series(n - k, N))
    return fps.power(first, 4) * (second * hinv2)


def check_eq3(n: int, N: int, tamper: Tamper = None) -> VerificationReport:
    expected = fps.power(fps.theta_partial(n, N), 4)
    return compare_series("eq3", expected, _apply(tamper, eq3_lhs(n, N)), n=n, N=N)


def check_eq3_mod(n: int, tamper: Tamper = None) -> VerificationReport:
    """After q -> -q, the fourth power of the partial theta sum agrees with the
    full ``theta^4`` on coefficients ``0..n``."""
    N = n + 1
    expected = fps.power(fps.theta_full(N), 4)
    got = _apply(tamper, fps.substitute_neg_q(fps.power(fps.theta_partial(n, N), 4)))
    r = compare_series("eq3-mod", expected, got, n=n)
    return replace(r, note="coefficients 0..n compared; the mod q^n reading needs only 0..n-1")


# -- sweeps ----------------------------------------------------------


def lemma_reports(n_max: int, N: int, steps_max: Optional[int] = None, tamper: Tamper = None):
    """Yield reports for both lemma sums and the step identities, ascending in n."""
    if steps_max is None:
        steps_max = n_max
    for n in range(n_max + 1):
        yield check_l1(n, N, tamper)
        yield check_l2(n, N, tamper)
        if n <= steps_max:
            yield check_steps(n, N, tamper)
