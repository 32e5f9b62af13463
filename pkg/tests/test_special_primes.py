import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from mixedgoldbach import arith, special_primes as sp
from mixedgoldbach.arith import ArgumentError
from mixedgoldbach.special_primes import RationalExponent


def test_exponent_validation():
    c = RationalExponent.parse("11/10")
    assert c.value == Fraction(11, 10) and c.gamma == Fraction(10, 11)
    with pytest.raises(ArgumentError):
        RationalExponent(22, 20)  # not lowest terms
    with pytest.raises(ArgumentError):
        RationalExponent.parse("73/64")  # boundary excluded
    with pytest.raises(ArgumentError):
        RationalExponent.parse("6/5")
    assert RationalExponent.parse("6/5", exploration=True).value == Fraction(6, 5)
    assert RationalExponent.parse("1", exploration=True).gamma == 1
    with pytest.raises(ArgumentError):
        RationalExponent.parse("9/10", exploration=True)


@given(st.integers(0, 10**40), st.integers(1, 12))
def test_iroot_bracket(x, k):
    r = sp.iroot(x, k)
    assert r**k <= x < (r + 1) ** k


def test_floor_pow_examples(c11):
    assert sp.floor_pow(1, c11) == 1
    assert sp.floor_pow(2, c11) == 2
    assert sp.floor_pow(6, c11) == 7
    assert [sp.floor_pow(n, c11) for n in range(1, 9)] == [1, 2, 3, 4, 5, 7, 8, 9]
    with pytest.raises(ArgumentError):
        sp.floor_pow(0, c11)


@given(st.integers(1, 10**7), st.sampled_from(["11/10", "21/20", "9117/8000"]))
def test_floor_pow_exact_and_monotone(n, cs):
    c = RationalExponent.parse(cs)
    m = sp.floor_pow(n, c)
    assert m**c.den <= n**c.num < (m + 1) ** c.den
    assert sp.floor_pow(n + 1, c) > m  # c > 1 makes n -> [n^c] strictly increasing


@given(st.integers(1, 10**6))
def test_ceil_pow_gamma(x):
    c = RationalExponent(11, 10)
    n = sp.ceil_pow_gamma(x, c)
    assert n**11 >= x**10 and (n == 1 or (n - 1) ** 11 < x**10)


def test_ps_and_linnik_examples(c11, factorizer_1e5):
    assert sp.is_ps_prime(2, c11) and sp.is_ps_prime(7, c11)
    image = {sp.floor_pow(n, c11) for n in range(1, 20)}
    assert sp.is_ps_prime(11, c11) == (11 in image)
    assert sp.is_linnik_prime(2, factorizer_1e5)
    assert sp.is_linnik_prime(5, factorizer_1e5)
    assert not sp.is_linnik_prime(7, factorizer_1e5)
    with pytest.raises(ArgumentError):
        sp.is_ps_prime(9, c11)
    with pytest.raises(ArgumentError):
        sp.is_linnik_prime(15, factorizer_1e5)


def test_weights(c11):
    assert sp.ps_weight(2, c11) == pytest.approx(2 ** (1 / 11) * math.log(2), rel=1e-15)
    c1 = RationalExponent(1, 1, exploration=True)
    assert sp.ps_weight(3, c1) == pytest.approx(math.log(3), rel=1e-15)
    mpmath.mp.dps = 40
    ref = mpmath.mpf(10007) ** (mpmath.mpf(1) / 11) * mpmath.log(10007)
    assert abs(sp.ps_weight(10007, c11) - float(ref)) <= 10 * math.ulp(float(ref))
    ps = np.array([2, 3, 10007])
    assert np.allclose(sp.ps_weights(ps, c11), [sp.ps_weight(p, c11) for p in ps], rtol=1e-15)


def test_classify_small(c11):
    primes = arith.sieve_primes(10)
    t = sp.classify_all(10, c11, primes)
    assert t.ps_primes().tolist() == [2, 3, 5, 7]
    assert t.linnik_primes().tolist() == [2, 3, 5]


@pytest.mark.parametrize("cs", ["11/10", "21/20"])
def test_forward_backward_agree(cs, primes_1e5, factorizer_1e5):
    c = RationalExponent.parse(cs)
    t = sp.classify_all(100_000, c, primes_1e5, factorizer_1e5)
    fwd = t.ps_mask()[primes_1e5.primes()]
    bwd = [sp.is_ps_prime(int(p), c, primes_1e5) for p in primes_1e5.primes()]
    assert np.array_equal(fwd, bwd)


def test_ps_count_million(c11):
    primes = arith.sieve_primes(10**6)
    t = sp.classify_all(10**6, c11, primes)
    assert t.ps_primes().size == 22527


def test_linnik_vs_lattice(primes_1e5, factorizer_1e5, c11):
    t = sp.classify_all(100_000, c11, primes_1e5, factorizer_1e5)
    brute = arith.r_two_squares_bruteforce(100_000)
    ps = primes_1e5.primes()
    assert np.array_equal(t.linnik_mask()[ps], brute[ps - 1] > 0)


def test_flags_only_on_primes(primes_1e5, factorizer_1e5, c11):
    t = sp.classify_all(100_000, c11, primes_1e5, factorizer_1e5)
    pm = primes_1e5.mask()
    assert not (t.ps_mask() & ~pm).any()
    assert not (t.linnik_mask() & ~pm).any()


def test_exploration_c_one_marks_every_prime():
    c1 = RationalExponent(1, 1, exploration=True)
    primes = arith.sieve_primes(5000)
    t = sp.classify_all(5000, c1, primes)
    assert np.array_equal(t.ps_primes(), primes.primes())


@pytest.mark.parametrize("N", [10**4, 10**5, 10**6])
def test_ps_density_corridor(N, c11):
    primes = arith.sieve_primes(N)
    t = sp.classify_all(N, c11, primes)
    expected = N ** float(c11.gamma) / math.log(N)
    assert 0.5 <= t.ps_primes().size / expected <= 2.0


def test_ceil_gamma_from_sequence(c11):
    t = sp.classify_all(5000, c11, arith.sieve_primes(5000))
    x = np.arange(1, 5002)
    assert t.ceil_gamma(x).tolist() == [sp.ceil_pow_gamma(int(v), c11) for v in x]
    with pytest.raises(ArgumentError):
        t.ceil_gamma([5003])
