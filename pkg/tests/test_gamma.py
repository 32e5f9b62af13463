import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixedgoldbach import gamma as gm
from mixedgoldbach.arith import ArgumentError, chi4
from mixedgoldbach.special_primes import RationalExponent


def oracle_p1_outer(N, tables):
    """Plain triple loop with p1 outermost (the library oracle iterates p2 first)."""
    ps = [int(p) for p in tables.prime_list if p <= N]
    is_p = tables.prime_mask
    ps_set = set(int(p) for p in tables.ps_list)
    r = dict(zip(tables.prime_list.tolist(), tables.r_at_primes.tolist()))
    w2 = tables.weights("ps_weighted").values
    terms = []
    for p1 in ps:
        for p2 in ps:
            p3 = N - p1 - p2
            if p3 < 2:
                break
            if p2 in ps_set and is_p[p3]:
                terms.append(r[p1] * math.log(p1) * w2[p2] * math.log(p3))
    return math.fsum(terms)


def test_gamma_six_and_five(tables_small):
    assert gm.gamma_oracle(6, tables_small) == pytest.approx(4 * 2 ** (1 / 11) * math.log(2) ** 3, rel=1e-14)
    assert gm.gamma_fast(6, tables_small) == pytest.approx(gm.gamma_oracle(6, tables_small), rel=1e-12)
    assert gm.gamma_oracle(5, tables_small) == 0.0
    assert all(gm.gamma_oracle(N, tables_small) == 0.0 for N in range(0, 6))


@pytest.mark.parametrize("N", [9, 31, 100, 501])
def test_oracle_loop_order(N, tables_small):
    assert gm.gamma_oracle(N, tables_small) == pytest.approx(oracle_p1_outer(N, tables_small), rel=1e-12)


def test_pair_sum_examples():
    delta = np.zeros(51)
    delta[2] = 1.5
    w = gm.WeightedPrimeArray(50, delta, "log")
    out = gm.pair_sum_convolution(w, w).values
    assert out[4] == pytest.approx(2.25, rel=1e-14)
    assert np.abs(np.delete(out, 4)).max() < 1e-14
    zero = gm.WeightedPrimeArray(50, np.zeros(51), "log")
    assert not gm.pair_sum_convolution(zero, zero).values.any()


def test_pair_sum_fft_vs_direct(tables_small):
    w = tables_small.weights("log")
    fft = gm.pair_sum_convolution(w, w).values
    direct = gm.pair_sum_convolution(w, w, method="direct").values
    assert np.abs(fft[:60] - direct[:60]).max() <= 1e-10
    assert np.allclose(fft, direct, rtol=1e-12, atol=1e-9)


def test_slot_swap_symmetry(tables_small):
    a, b = tables_small.weights("r_log"), tables_small.weights("log")
    assert np.allclose(gm.pair_sum_convolution(a, b).values, gm.pair_sum_convolution(b, a).values,
                       rtol=1e-13, atol=1e-9)


def test_fast_equals_oracle_10001(tables_1e4):
    N = 10_001
    t = gm.GammaTables(N, RationalExponent(11, 10))
    assert gm.gamma_fast(N, t) == pytest.approx(gm.gamma_oracle(N, t), rel=1e-9)


@pytest.mark.parametrize("cs", ["11/10", "21/20", "9117/8000"])
def test_fast_equals_oracle_across_c(cs):
    t = gm.GammaTables(3000, RationalExponent.parse(cs))
    rng = np.random.default_rng(7)
    for N in rng.choice(np.arange(7, 3000), 10, replace=False):
        assert gm.gamma_fast(int(N), t) == pytest.approx(gm.gamma_oracle(int(N), t), rel=1e-9)


_SMALL = gm.GammaTables(2000, RationalExponent(11, 10))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2000))
def test_gamma_nonnegative(N):
    assert gm.gamma_fast(N, _SMALL) >= 0.0


def test_size_errors(tables_small):
    with pytest.raises(gm.SizeError):
        gm.gamma_fast(10**6, tables_small)
    big = gm.GammaTables(gm.ORACLE_MAX + 10, RationalExponent(11, 10))
    with pytest.raises(gm.SizeError):
        gm.gamma_oracle(gm.ORACLE_MAX + 1, big)


def test_decomposition_identity(tables_1e4):
    for N in (1001, 4999, 9999):
        for A in (0.5, 1.0, 2.0):
            br = gm.gamma_decomposed(N, tables_1e4, A)
            assert br.identity_gap <= 1e-9


def test_divisor_split_counts():
    for M in (12, 360, 9999, 65536):
        lo, hi = 3.3, M / 3.3
        s1, s2, s3 = gm.divisor_chi_split(M, lo, hi)
        for n in range(1, M + 1, max(1, M // 97)):
            divs = [d for d in range(1, n + 1) if n % d == 0]
            assert s1[n] == sum(chi4(d) for d in divs if d <= lo)
            assert s2[n] == sum(chi4(d) for d in divs if lo < d < hi)
            assert s3[n] == sum(chi4(d) for d in divs if d >= hi)


def test_cut_independence(tables_1e5):
    N = 10**5 + 3
    a, b = gm.gamma_decomposed(N, tables_1e5, 1.5), gm.gamma_decomposed(N, tables_1e5, 2.5)
    assert a.gamma_total == b.gamma_total
    assert (a.gamma1, a.gamma3) != (b.gamma1, b.gamma3)
    assert abs(a.gamma_total - 4 * (a.gamma1 + a.gamma2 + a.gamma3)) / a.gamma_total < 1e-9


def test_degenerate_cut(tables_small, monkeypatch):
    # D >= N/D needs (log N)^(2A) <= 1, so only a forced cut can reach the guard
    monkeypatch.setattr(gm, "divisor_cut", lambda N, A: math.sqrt(N) + 1)
    with pytest.raises(gm.DegenerateCutError):
        gm.gamma_decomposed(1001, tables_small, 1.0)


def test_decomposition_argument_errors(tables_small):
    with pytest.raises(ArgumentError):
        gm.gamma_decomposed(5, tables_small, 1.0)
    with pytest.raises(ArgumentError):
        gm.gamma_decomposed(1001, tables_small, 0.0)


def test_restricted_sum(tables_small):
    N = 999
    full = gm.restricted_sum_I(N, 1, 1, 1, N, tables_small)
    assert full == pytest.approx(gm.restricted_sum_I(N, 1, 1, 1, N, tables_small, method="direct"), rel=1e-12)
    assert gm.restricted_sum_I(N, 8, 3, 400, 410, tables_small) == 0.0  # 401, 409 are 1 mod 8
    assert gm.restricted_sum_I(N, 12, 5, 2, 500, tables_small) == pytest.approx(
        gm.restricted_sum_I(N, 12, 5, 2, 500, tables_small, method="direct"), rel=1e-12)
    with pytest.raises(ArgumentError):
        gm.restricted_sum_I(N, 4, 2, 1, N, tables_small)


def test_gamma3_reconstruction(tables_1e4):
    for N in (2001, 7777, 9999):
        for A in (0.5, 1.0):
            g3 = gm.gamma_decomposed(N, tables_1e4, A).gamma3
            assert gm.gamma3_reconstruction(N, tables_1e4, A) == pytest.approx(g3, rel=1e-9, abs=1e-6)


def test_main_term(c11):
    assert gm.main_term(10**6, c11) == 0.0
    N = 10**6 + 3
    mt = gm.main_term(N, c11)
    from mixedgoldbach.singular_series import sigma_gamma

    assert mt > 0
    assert mt / N**2 == pytest.approx(float(c11.gamma) / 2 * sigma_gamma(N, 10**6).value, rel=1e-15)


def test_even_breakdown(tables_small):
    br = gm.gamma_decomposed(1000, tables_small, 0.5)
    assert br.even and br.main_term == 0.0 and br.ratio is None


def test_ratio_at_moderate_N(tables_1e5):
    br = gm.gamma_decomposed(99_999, tables_1e5, 2.0)
    assert 0.3 < br.ratio < 3.0


def test_individual_formulas(tables_1e5):
    out = gm.individual_formulas(99_999, tables_1e5)
    assert 0.3 < out["ternary_r_ratio"] < 3.0
    assert out["ps_density"] > 0
