import pytest
from hypothesis import given, settings, strategies as st

from wzjacobi import fps
from wzjacobi.fps import NotInvertibleError, TruncatedSeries as S, TruncationError

from oracles import binomial_series, brute_r4


def series(coeffs, order=None):
    return S(coeffs, order)


# -- examples ---------------------------------------------------------------


def test_add_examples():
    assert series([1, 1], 5) + series([1, -1], 5) == series([2], 5)
    s = fps.h_series(3, 8)
    assert s + S.zero(8) == s
    h = fps.h_series(1, 5)
    assert (h + h).coeffs == tuple(2 * c for c in (1, 2, 2, 2, 2))


def test_mul_examples():
    assert series([1, 1], 6) * series([1, -1], 6) == series([1, 0, -1], 6)
    s = fps.h_series(4, 9)
    assert s * S.one(9) == s
    h = fps.h_series(2, 10)
    assert h * fps.invert(h) == S.one(10)


def test_binary_ops_truncate_to_min_order():
    a, b = series([1, 2, 3, 4], 4), series([1, 1], 2)
    assert (a + b).order == 2
    assert (a * b).order == 2
    assert (a * b).coeffs == (1, 3)


def test_invert_examples():
    assert fps.invert(series([1, -1], 4)) == series([1, 1, 1, 1])
    assert fps.invert(S.one(7)) == S.one(7)
    # (1-q)/(1+q) = 1 - 2q + 2q^2 - 2q^3 ...; cross-multiplied: (1+q)*r == (1-q)
    r = fps.invert(fps.h_series(1, 4))
    assert r.coeffs == (1, -2, 2, -2)
    assert series([1, 1], 4) * r == series([1, -1], 4)


@pytest.mark.parametrize("const", [0, 2, -3])
def test_invert_rejects_non_unit(const):
    with pytest.raises(NotInvertibleError):
        fps.invert(series([const, 1, 1], 5))


def test_invert_rejects_zero_series():
    with pytest.raises(NotInvertibleError):
        fps.invert(S.zero(3))


def test_pow_examples():
    assert fps.power(series([1, 1], 5), 2) == series([1, 2, 1], 5)
    s = fps.h_series(2, 7)
    assert s**1 == s
    assert s**0 == S.one(7)
    assert list(fps.power(fps.theta_full(6), 4).coeffs) == [brute_r4(n) for n in range(6)]
    assert fps.power(fps.theta_full(6), 4).coeffs == (1, 8, 24, 32, 24, 48)


def test_substitute_neg_q_examples():
    assert fps.substitute_neg_q(series([1, 1, 1])) == series([1, -1, 1])
    s = fps.h_series(5, 12)
    assert fps.substitute_neg_q(fps.substitute_neg_q(s)) == s
    assert fps.substitute_neg_q(fps.theta_partial(1, 5)) == series([1, 2], 5)


@pytest.mark.parametrize(
    "sign,m,e,N",
    [(-1, 1, -1, 3), (1, 2, -2, 5), (1, 1, 0, 4), (1, 3, 4, 20), (-1, 2, -3, 17), (1, 1, -2, 30)],
)
def test_expand_unit_factor_matches_binomial_series(sign, m, e, N):
    assert list(fps.expand_unit_factor(sign, m, e, N).coeffs) == binomial_series(sign, m, e, N)


def test_expand_unit_factor_examples():
    assert fps.expand_unit_factor(-1, 1, -1, 3) == series([1, 1, 1])
    assert fps.expand_unit_factor(1, 2, -2, 5) == series([1, 0, -2, 0, 3])
    assert fps.expand_unit_factor(1, 1, 0, 4) == S.one(4)
    # (1+q^2)^-2 is 1 - 2q^2 modulo q^3
    assert fps.expand_unit_factor(1, 2, -2, 3) == series([1, 0, -2])


def test_h_series_examples():
    assert fps.h_series(0, 5) == S.one(5)
    h1 = fps.h_series(1, 4)
    assert h1.coeffs == (1, 2, 2, 2)
    assert series([1, -1], 4) * h1 == series([1, 1], 4)
    assert fps.h_series(-1, 5) == S.zero(5)


def test_theta_examples():
    assert fps.theta_partial(0, 5) == S.one(5)
    assert fps.theta_partial(1, 5) == series([1, -2], 5)
    assert fps.theta_partial(2, 10) == series([1, -2, 0, 0, 2], 10)
    assert fps.theta_full(2) == series([1, 2])
    assert fps.theta_full(5) == series([1, 2, 0, 0, 2])
    assert fps.theta_full(10) == series([1, 2, 0, 0, 2, 0, 0, 0, 0, 2])


def test_lambert_rhs_examples():
    assert fps.lambert_rhs(1) == S.one(1)
    assert list(fps.lambert_rhs(4).coeffs) == [brute_r4(n) for n in range(4)] == [1, 8, 24, 32]
    assert fps.lambert_rhs(5)[4] == brute_r4(4) == 24


def test_a_prime_lhs_examples():
    assert fps.a_prime_lhs(1) == S.one(1)
    assert fps.a_prime_lhs(50) == fps.substitute_neg_q(fps.lambert_rhs(50))
    assert fps.a_prime_lhs(2)[1] == -8


def test_expand_z_over_1pz2_examples():
    # z = -q: z/(1+z)^2 = -q/(1-q)^2 = -sum r q^r; the k=1 Lambert term q/(1-q)^2 is its negative
    assert fps.expand_z_over_1pz2(-1, 1, 6).coeffs == (0, -1, -2, -3, -4, -5)
    assert (-fps.expand_z_over_1pz2(-1, 1, 6)).coeffs == (0, 1, 2, 3, 4, 5)
    # z = q^2: q^2 - 2q^4 + 3q^6
    assert fps.expand_z_over_1pz2(1, 2, 8).coeffs == (0, 0, 1, 0, -2, 0, 3, 0)
    assert fps.expand_z_over_1pz2(1, 5, 5) == S.zero(5)


def test_double_sum_examples():
    d = fps.double_sum(10)
    assert d[1] == 1
    # (k, r) = (1, 2) gives +2, (2, 1) gives +1
    assert d[2] == 3
    # (1,4): +4, (2,2): -2, (4,1): +1
    assert d[4] == 3


def test_coefficient_past_order_is_an_error():
    s = fps.h_series(3, 6)
    assert s[5] == s.coeffs[5]
    with pytest.raises(TruncationError):
        s[6]


def test_zero_series_at_any_order():
    for N in (1, 2, 17):
        z = S.zero(N)
        assert z.order == N and z.is_zero()


def test_series_is_immutable():
    s = S.one(3)
    with pytest.raises(AttributeError):
        s.order = 5


def test_order_must_be_positive():
    with pytest.raises(ValueError):
        S([], 0)


# -- properties -----------------------------------------------------------

coeff = st.integers(-9, 9)


@st.composite
def series_strategy(draw, order=None):
    N = order if order is not None else draw(st.integers(1, 64))
    return S(draw(st.lists(coeff, min_size=N, max_size=N)), N)


@st.composite
def same_order_triple(draw):
    N = draw(st.integers(1, 64))
    return tuple(draw(series_strategy(N)) for _ in range(3))


@pytest.mark.property
@given(same_order_triple())
def test_ring_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@pytest.mark.property
@settings(max_examples=200)
@given(st.integers(1, 64).flatmap(lambda N: st.tuples(st.sampled_from([1, -1]), st.lists(coeff, min_size=N - 1, max_size=N - 1))))
def test_invert_property(data):
    unit, tail = data
    s = S([unit] + tail)
    assert list((s * fps.invert(s)).coeffs) == [1] + [0] * (s.order - 1)


@pytest.mark.property
@given(same_order_triple())
def test_substitute_neg_q_involution_and_homomorphism(abc):
    a, b, _ = abc
    neg = fps.substitute_neg_q
    assert neg(neg(a)) == a
    assert neg(a + b) == neg(a) + neg(b)
    assert neg(a * b) == neg(a) * neg(b)


@pytest.mark.property
def test_truncation_stability():
    N = 40
    for m in range(31):
        hm = fps.h_series(m, N)
        for n in range(m):
            hn = fps.h_series(n, N)
            assert hn.coeffs[: n + 1] == hm.coeffs[: n + 1]


@pytest.mark.property
@pytest.mark.parametrize("k", range(1, 21))
def test_two_expansions_of_z_over_1pz2(k):
    N = 90
    sign = -1 if k % 2 else 1
    direct = fps.expand_z_over_1pz2(sign, k, N)
    via_factor = S.monomial(k, N, sign) * fps.expand_unit_factor(sign, k, -2, N)
    assert direct == via_factor


def test_double_sum_matches_lambert():
    N = 200
    assert 8 * fps.double_sum(N) + 1 == fps.lambert_rhs(N)
