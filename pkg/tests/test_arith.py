import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixedgoldbach import arith
from mixedgoldbach.arith import ArgumentError


_F40K = arith.Factorizer(40_000)
_F1M = arith.Factorizer(10**6)


def _is_prime(p):
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def trial_division_primes(n):
    return [k for k in range(2, n + 1) if all(k % q for q in range(2, math.isqrt(k) + 1))]


# -- sieve ------------------------------------------------------------------


def test_sieve_small_limits():
    assert list(arith.sieve_primes(10)) == [2, 3, 5, 7]
    assert list(arith.sieve_primes(2)) == [2]
    assert list(arith.sieve_primes(3)) == [2, 3]


def test_sieve_rejects_tiny_limit():
    with pytest.raises(ArgumentError):
        arith.sieve_primes(1)


def test_prime_count_million(primes_1e5):
    assert len(arith.sieve_primes(10**6)) == 78498
    assert primes_1e5.count(10**4) == 1229


@pytest.mark.parametrize("limit", [2, 9, 10, 11, 100, 1001, 4097])
def test_sieve_matches_trial_division(limit):
    assert list(arith.sieve_primes(limit)) == trial_division_primes(limit)


def test_sieve_across_segment_boundaries():
    # two full segments plus a ragged tail
    limit = 2 * 2 * arith.SEGMENT_ODDS + 12345
    t = arith.sieve_primes(limit)
    ref = np.ones(limit + 1, dtype=bool)
    ref[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if ref[p]:
            ref[p * p :: p] = False
    assert np.array_equal(t.mask(), ref)


def test_prime_table_queries(primes_1e5):
    assert 97 in primes_1e5 and 91 not in primes_1e5
    assert primes_1e5.primes(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ArgumentError):
        primes_1e5.is_prime(10**6)


# -- characters, multiplicative functions -------------------------------------


def test_chi4_values():
    assert (arith.chi4(1), arith.chi4(2), arith.chi4(7), arith.chi4(5)) == (1, 0, -1, 1)
    with pytest.raises(ArgumentError):
        arith.chi4(0)


@given(st.integers(1, 10_000))
def test_chi4_period_cancels(k):
    assert sum(arith.chi4(d) for d in range(1, 4 * k + 1)) == 0


def test_mobius_phi_examples(factorizer_1e5):
    f = factorizer_1e5
    assert [arith.mobius(f(n)) for n in (1, 4, 6, 30)] == [1, 0, 1, -1]
    assert [arith.euler_phi(f(n)) for n in (1, 12, 97)] == [1, 4, 96]


@settings(max_examples=300)
@given(st.integers(1, 1000), st.integers(1, 1000))
def test_multiplicativity(a, b):
    if math.gcd(a, b) != 1:
        return
    f = _F1M
    assert arith.euler_phi(f(a * b)) == arith.euler_phi(f(a)) * arith.euler_phi(f(b))
    assert arith.mobius(f(a * b)) == arith.mobius(f(a)) * arith.mobius(f(b))


def test_factorization_beyond_table(factorizer_1e5):
    fac = factorizer_1e5(99_991 * 1_000_003)
    assert fac.primes == (99_991, 1_000_003)
    # a cofactor above limit^2 cannot be certified prime by trial division
    with pytest.raises(arith.IncompleteFactorizationError):
        factorizer_1e5(999_983 * 1_000_003)


@given(st.integers(1, 10**9))
def test_factorization_multiplies_back(n):
    fac = _F40K(n)
    assert math.prod(p**e for p, e in fac.factors) == n
    assert all(_is_prime(p) for p in fac.primes)


# -- r(n) ---------------------------------------------------------------------


def test_r_examples(factorizer_1e5):
    f = factorizer_1e5
    assert [arith.r_two_squares(f(n)) for n in (1, 3, 25, 5, 2)] == [4, 0, 12, 8, 4]


def test_r_identity_against_lattice_count(factorizer_1e5):
    brute = arith.r_two_squares_bruteforce(100_000)
    n = np.arange(1, 100_001)
    fast = arith.r_two_squares_array(n, factorizer_1e5.spf)
    assert np.array_equal(fast, brute[1:])


def test_r_as_character_sum(factorizer_1e5):
    for n in range(1, 2000):
        divs = factorizer_1e5(n).divisors()
        assert arith.r_two_squares(factorizer_1e5(n)) == 4 * sum(arith.chi4(d) for d in divs)


@given(st.integers(1, 100_000))
def test_r_nonnegative_multiple_of_four(n):
    r = arith.r_two_squares(_F40K(n))
    assert r >= 0 and r % 4 == 0


# -- psi, theta0 --------------------------------------------------------------


def test_psi_examples():
    assert arith.psi_frac(0.0) == -0.5
    assert arith.psi_frac(2.75) == 0.25
    assert arith.psi_frac(-0.25) == 0.25
    with pytest.raises(ArgumentError):
        arith.psi_frac(float("nan"))


@given(st.integers(-10**9, 10**9))
def test_psi_periodic(k):
    # dyadic t keeps t + 1 exact, away from rounding across the jump
    t = k / 1024
    assert arith.psi_frac(t + 1) == arith.psi_frac(t)
    assert -0.5 <= arith.psi_frac(t) < 0.5


def test_psi_mean_zero():
    k = 10_000
    mids = (np.arange(k) + 0.5) / k
    assert abs(math.fsum(arith.psi_frac(t) for t in mids) / k) < 1e-6


def test_theta0():
    v = arith.theta0()
    assert 0 < v < 0.03
    mpmath.mp.dps = 40
    ref = mpmath.mpf(1) / 2 - mpmath.e * mpmath.log(2) / 4
    assert abs(v - float(ref)) < 1e-15
    assert math.floor(v * 1e4) == 289  # 0.0289...


# -- theta(y; h, l) deviation -------------------------------------------------


def _scan_ap_error(t, h, primes):
    """Independent scan over all integers y <= t and the left limits y - 0."""
    phi = sum(1 for l in range(h) if math.gcd(l, h) == 1)
    best = 0.0
    for l in range(h):
        if math.gcd(l, h) != 1:
            continue
        theta = 0.0
        for y in range(1, t + 1):
            before = theta
            if primes.is_prime(y) and y % h == l % h:
                theta += math.log(y)
            best = max(best, abs(before - y / phi), abs(theta - y / phi))
    return best


@pytest.mark.parametrize("t,h", [(10, 1), (2, 2), (100, 4), (500, 3), (300, 10)])
def test_ap_prime_error_matches_scan(t, h, primes_1e5):
    rep = arith.ap_prime_error(t, h, primes_1e5)
    assert rep.delta == pytest.approx(_scan_ap_error(t, h, primes_1e5), rel=1e-12, abs=1e-12)


def test_ap_prime_error_rejects_bad_args(primes_1e5):
    with pytest.raises(ArgumentError):
        arith.ap_prime_error(1, 1, primes_1e5)
    with pytest.raises(ArgumentError):
        arith.ap_prime_error(10, 0, primes_1e5)
