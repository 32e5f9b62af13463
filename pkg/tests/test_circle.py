import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixedgoldbach import circle as cm
from mixedgoldbach.arith import ArgumentError
from mixedgoldbach.gamma import GammaTables
from mixedgoldbach.special_primes import RationalExponent

C11 = RationalExponent(11, 10)
_T = GammaTables(2000, C11)


def specs(N):
    return [
        cm.ExpSumSpec("plain", N),
        cm.ExpSumSpec("ps_weighted", N, c=C11),
        cm.ExpSumSpec("residue_window", N, d=12, l=5, J_lo=10, J_hi=N // 2),
        cm.ExpSumSpec("integer_M", N),
        cm.ExpSumSpec("window_M_J", N, J_lo=7, J_hi=N // 3),
    ]


def test_plain_examples(tables_small):
    s = cm.ExpSumSpec("plain", 10)
    assert cm.eval_exp_sum(s, 0.0, tables_small) == pytest.approx(math.log(210), rel=1e-15)
    half = cm.eval_exp_sum(s, Fraction(1, 2), tables_small)
    assert half.real == pytest.approx(math.log(2) - math.log(105), rel=1e-14)
    assert abs(half.imag) < 1e-14


def test_spec_validation():
    with pytest.raises(ArgumentError):
        cm.ExpSumSpec("bogus", 10)
    with pytest.raises(ArgumentError):
        cm.ExpSumSpec("residue_window", 100, d=4, l=2)
    with pytest.raises(ArgumentError):
        cm.ExpSumSpec("ps_weighted", 100)


@settings(max_examples=40, deadline=None)
@given(st.integers(-3 * 2**20, 3 * 2**20))
def test_periodicity_and_conjugation(k):
    alpha = k / 2**20  # dyadic, so alpha + 1 and -alpha are exact
    for s in specs(1500):
        f = cm.eval_exp_sum(s, alpha, _T)
        scale = max(1.0, abs(cm.eval_exp_sum(s, 0.0, _T)))
        assert abs(cm.eval_exp_sum(s, alpha + 1, _T) - f) <= 1e-12 * scale
        assert abs(cm.eval_exp_sum(s, -alpha, _T) - f.conjugate()) <= 1e-12 * scale
        assert abs(f) <= cm.eval_exp_sum(s, 0.0, _T).real * (1 + 1e-12)


def test_m_sum_closed_form():
    for alpha in (0.0, 1e-12, 1e-9, 0.1234, 0.5, Fraction(2, 7)):
        for lo, hi in ((1, 1000), (17, 350)):
            ref = sum(cmath.exp(2j * math.pi * float(alpha) * m) for m in range(lo, hi + 1))
            assert abs(cm.m_sum(alpha, lo, hi) - ref) < 1e-9
    assert cm.m_sum(0.0, 1, 100) == 100


def test_omega_sigma_identity(tables_1e4):
    N = 10_000
    s = cm.ExpSumSpec("ps_weighted", N, c=C11)
    om, si = cm.omega_sigma_split(0.0, 100, tables_1e4)
    assert abs(om + si - cm.eval_exp_sum(cm.ExpSumSpec("ps_weighted", 100, c=C11), 0.0, tables_1e4)) < 1e-10
    for a in np.random.default_rng(3).random(25):
        om, si = cm.omega_sigma_split(float(a), N, tables_1e4)
        sc = cm.eval_exp_sum(s, float(a), tables_1e4)
        assert abs(om + si - sc) <= 1e-10 * abs(sc)


def test_omega_tracks_gamma_S(tables_1e5):
    # |Omega(0) - gamma S(0)| stays within a fitted C log^2 N over an N grid
    g = float(C11.gamma)
    ratios = []
    for N in (1000, 10_000, 100_000):
        om, _ = cm.omega_sigma_split(0.0, N, tables_1e5)
        s0 = cm.eval_exp_sum(cm.ExpSumSpec("plain", N), 0.0, tables_1e5).real
        ratios.append(abs(om.real - g * s0) / math.log(N) ** 2)
    C = max(ratios)
    assert C < 1.0


def test_build_arcs_million():
    arcs = cm.build_arcs(10**6, 1.0)
    assert arcs.Q == pytest.approx(math.log(10**6))
    assert arcs.tau == pytest.approx(10**6 / math.log(10**6))
    assert {(a.a, a.q) for a in arcs.major} == {(a, q) for q in range(1, 14) for a in range(q) if math.gcd(a, q) == 1}
    assert arcs.disjoint
    assert arcs.major_measure == pytest.approx(sum(2 / (a.q * arcs.tau) for a in arcs.major), rel=1e-12)
    assert arcs.contains(1 / 3 + 0.5 / (3 * arcs.tau)) and not arcs.contains(0.2071)


def test_arc_errors():
    with pytest.raises(cm.DegeneratePartitionError):
        cm.build_arcs(1000, 5.0)
    with pytest.raises(ArgumentError):
        cm.build_arcs(50, 1.0)


def test_minor_samples_avoid_major():
    arcs = cm.build_arcs(10**5, 1.0)
    pts = arcs.sample_minor(500, np.random.default_rng(1))
    lo = 1 / arcs.tau
    assert np.all((pts >= lo) & (pts < 1 + lo))
    assert not any(arcs.contains(float(x)) for x in pts)


def test_major_arc_examples(tables_1e4):
    N = 10_000
    act, model, err = cm.major_arc_error_S(N, 0, 1, 0.0, tables_1e4)
    theta = cm.eval_exp_sum(cm.ExpSumSpec("plain", N), 0.0, tables_1e4).real
    assert model == pytest.approx(N) and err == pytest.approx(abs(theta - N), rel=1e-12)
    _, model4, err4 = cm.major_arc_error_S(N, 1, 4, 1e-5, tables_1e4)
    assert model4 == 0 and err4 == pytest.approx(abs(cm.eval_exp_sum(cm.ExpSumSpec("plain", N), 0.25 + 1e-5, tables_1e4)))
    act, model, _ = cm.major_arc_error_Sc(N, 0, 1, 0.0, tables_1e4)
    assert model == pytest.approx(float(C11.gamma) * N)
    assert 0.5 < act.real / model.real < 2
    assert cm.major_arc_error_Sc(N, 3, 4, 0.0, tables_1e4)[1] == 0
    with pytest.raises(ArgumentError):
        cm.major_arc_error_S(N, 2, 4, 0.0, tables_1e4)


def test_Sc_trend(tables_1e5):
    r = [cm.major_arc_error_Sc(N, 0, 1, 0.0, tables_1e5) for N in (1000, 100_000)]
    assert abs(r[1][0].real / r[1][1].real - 1) < abs(r[0][0].real / r[0][1].real - 1) + 0.05


@pytest.mark.parametrize("N,M", [(9, 32), (21, 64), (45, 256), (101, 512)])
def test_dft_representation(N, M, tables_small):
    via, direct = cm.dft_representation_check(N, M, tables_small)
    assert abs(via - direct) <= 1e-8


def test_dft_details(tables_small):
    assert cm.dft_representation_check(9, 32, tables_small)[0] == pytest.approx(
        cm.dft_representation_check(9, 64, tables_small)[0], abs=1e-12)
    via, direct = cm.dft_representation_check(5, 16, tables_small)
    assert direct == 0 and abs(via) < 1e-12
    from mixedgoldbach.gamma import gamma_oracle

    via, direct = cm.dft_representation_check(101, 512, tables_small, variant="gamma")
    assert via == pytest.approx(gamma_oracle(101, tables_small), rel=1e-10)
    with pytest.raises(cm.AliasingError):
        cm.dft_representation_check(21, 63, tables_small)


def test_parseval(tables_small):
    lhs, rhs = cm.parseval_check(1000, 4096, tables_small)
    assert abs(lhs - rhs) <= 1e-8


def test_k_second_moment(tables_small):
    out = cm.k_second_moment(2000, 0.5, 4096, tables_small)
    assert out["dft"] == pytest.approx(out["exact"], rel=1e-10)
    assert out["single_sum_absolute"] >= abs(out["single_sum_signed"])


def test_grid_fft_path_matches_direct(tables_small, monkeypatch):
    s = cm.ExpSumSpec("plain", 1500)
    direct = cm.exp_sum_grid(s, 4096, tables_small)
    monkeypatch.setattr(cm, "_DIRECT_GRID_MAX", 0)
    fft = cm.exp_sum_grid(s, 4096, tables_small)
    assert np.abs(direct - fft).max() < 1e-9


def test_minor_arc_sup_shrinks(tables_1e5):
    a = cm.minor_arc_sup(10_000, 1.0, tables_1e5, samples=100)
    b = cm.minor_arc_sup(100_000, 1.0, tables_1e5, samples=100)
    assert b[0] < a[0] and b[1] < a[1]
