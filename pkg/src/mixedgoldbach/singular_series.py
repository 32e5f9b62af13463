"""Truncated Euler products for the singular series, with tail envelopes.

Each product is evaluated over primes p <= P plus, explicitly, any larger
prime dividing N, N - 1 or d (their local factors are special and known).
The remaining factors all have the form 1 + x_p with |x_p| <= K / p^2 (or
1/(p-1)^3), and their product is bracketed by ``tail_low``/``tail_high``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import (
    ArgumentError,
    Factorizer,
    PrimeTable,
    chi4,
    chi4_array,
    euler_phi,
    sieve_primes,
)

__all__ = [
    "EulerProductEstimate",
    "SeriesCoefficient",
    "sigma_N",
    "sigma_dl",
    "sigma_gamma",
    "sigma_star_d1",
    "f_coeff",
    "f_coefficients",
    "script_N_at_zero",
    "partial_sum_vs_F0",
    "decade_median_gaps",
    "fit_decay_constant",
]


@dataclass(frozen=True)
class EulerProductEstimate:
    value: float
    tail_low: float
    tail_high: float
    prime_bound: int

    @property
    def low(self) -> float:
        return min(self.value * self.tail_low, self.value * self.tail_high)

    @property
    def high(self) -> float:
        return max(self.value * self.tail_low, self.value * self.tail_high)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.low - slack <= x <= self.high + slack


@dataclass(frozen=True)
class SeriesCoefficient:
    d: int
    f_value: float


@lru_cache(maxsize=8)
def _table(P: int) -> PrimeTable:
    return sieve_primes(max(P, 2))


@lru_cache(maxsize=4)
def _factorizer(limit: int) -> Factorizer:
    return Factorizer(limit, _table(limit))


def _prime_divisors(n: int, P: int) -> tuple[int, ...]:
    if n <= 1:
        return ()
    f = _factorizer(max(P, 1000))
    return f.factorize(n).primes


def _primes_upto(P: int, primes: PrimeTable | None) -> np.ndarray:
    if primes is not None:
        if P > primes.limit:
            raise ArgumentError("prime bound exceeds the prime table")
        return primes.primes(P)
    return _table(P).primes(P)


def _tail_cubic(P: int) -> tuple[float, float]:
    # prod_{p>P} (1 + 1/(p-1)^3), and sum_{m>=P} m^-3 < 1/(2(P-1)^2)
    return 1.0, math.exp(1.0 / (2.0 * (P - 1) ** 2))


def _tail_square(P: int) -> tuple[float, float]:
    # factors 1 + x with |x| <= 1/p^2, sum_{p>P} p^-2 < 1/P;
    # log(1 + x) >= x / (1 + x) >= -|x| / (1 - 1/P^2)
    s = 1.0 / P
    return math.exp(-s / (1.0 - 1.0 / P**2)), math.exp(s)


def _log_product(factors: np.ndarray) -> float:
    if np.any(factors == 0.0):
        return 0.0
    if np.any(factors < 0.0):
        raise ArgumentError("negative Euler factor")
    return math.exp(math.fsum(np.log(factors)))


def _sigma_dl_factors(ps: np.ndarray, N: int, d: int, l: int) -> np.ndarray:
    pf = ps.astype(np.float64)
    div_d = (d % ps) == 0
    div_N = (N % ps) == 0
    div_Nl = ((N - l) % ps) == 0
    out = 1.0 + 1.0 / (pf - 1.0) ** 3
    minus = (~div_d & div_N) | (div_d & ~div_Nl)
    out = np.where(minus, 1.0 - 1.0 / (pf - 1.0) ** 2, out)
    out = np.where(div_d & div_Nl, 1.0 + 1.0 / (pf - 1.0), out)
    return out


def _support(P: int, primes: PrimeTable | None, *numbers: int) -> np.ndarray:
    ps = _primes_upto(P, primes)
    extra = sorted({q for n in numbers for q in _prime_divisors(abs(n), P) if q > P})
    if extra:
        ps = np.concatenate([ps, np.array(extra, dtype=np.int64)])
    return ps


def sigma_dl(N: int, d: int, l: int, P: int, primes: PrimeTable | None = None) -> EulerProductEstimate:
    """Singular series with the extra condition p1 = l (mod d)."""
    N, d, l, P = int(N), int(d), int(l), int(P)
    if N < 1 or d < 1:
        raise ArgumentError("need N, d >= 1")
    if P < 3:
        raise ArgumentError("prime bound must be >= 3")
    ps = _support(P, primes, N, d, N - l)
    value = _log_product(_sigma_dl_factors(ps, N, d, l))
    lo, hi = _tail_cubic(P)
    return EulerProductEstimate(value, lo, hi, P)


def sigma_N(N: int, P: int, primes: PrimeTable | None = None) -> EulerProductEstimate:
    """The ternary Goldbach singular series; exactly 0 for even N."""
    if int(N) < 3:
        raise ArgumentError("need N >= 3")
    return sigma_dl(N, 1, 1, P, primes)


def _chi_twist(p: np.ndarray, N: int) -> np.ndarray:
    pf = p.astype(np.float64)
    ch = chi4_array(p).astype(np.float64)
    q = pf * pf - 3.0 * pf + 3.0
    e = (pf - 3.0) / (pf * q)
    e = np.where(N % p == 0, 1.0 / (pf * (pf - 1.0)), e)
    e = np.where((N - 1) % p == 0, (2.0 * pf - 3.0) / (pf * q), e)
    return 1.0 + ch * e


def script_N_at_zero(N: int, P: int, primes: PrimeTable | None = None) -> EulerProductEstimate:
    """The chi-twisted product N(s) at s = 0."""
    N, P = int(N), int(P)
    if N < 3:
        raise ArgumentError("need N >= 3")
    ps = _support(P, primes, N, N - 1)
    lo, hi = _tail_square(P)
    return EulerProductEstimate(_log_product(_chi_twist(ps, N)), lo, hi, P)


def sigma_gamma(N: int, P: int, primes: PrimeTable | None = None) -> EulerProductEstimate:
    """pi * S(N) * (chi-twisted local factors): the constant of the main term."""
    N, P = int(N), int(P)
    if N < 3:
        raise ArgumentError("need N >= 3")
    ps = _support(P, primes, N, N - 1)
    pf = ps.astype(np.float64)
    base = np.where(N % ps == 0, 1.0 - 1.0 / (pf - 1.0) ** 2, 1.0 + 1.0 / (pf - 1.0) ** 3)
    value = math.pi * _log_product(base * _chi_twist(ps, N))
    c_lo, c_hi = _tail_cubic(P)
    s_lo, s_hi = _tail_square(P)
    return EulerProductEstimate(value, c_lo * s_lo, c_hi * s_hi, P)


def _star_local(p: int, N: int) -> float:
    inv = 1.0 / (p - 1)
    fac = 1.0
    if N % p == 0:
        if p == 2:
            raise ArgumentError("local factor (1 - 1/(p-1)^2)^-1 is undefined at p = 2 | N")
        fac /= 1.0 - inv * inv
    if (N - 1) % p != 0:
        fac *= 1.0 - inv * inv
    if N % p != 0:
        fac /= 1.0 + inv**3
    if (N - 1) % p == 0:
        fac *= 1.0 + inv
    return fac


def sigma_star_d1(N: int, d: int, factorizer: Factorizer | None = None) -> float:
    """Finite product over the primes dividing d (four cases)."""
    N, d = int(N), int(d)
    if d < 1:
        raise ArgumentError("need d >= 1")
    fz = factorizer or _factorizer(max(1000, math.isqrt(d) + 1))
    out = 1.0
    for p in fz.factorize(d).primes:
        out *= _star_local(p, N)
    return out


def f_coeff(N: int, d: int, factorizer: Factorizer | None = None) -> SeriesCoefficient:
    """f(d) = chi(d) S*_{d,1}(N) / phi(d)."""
    d = int(d)
    ch = chi4(d)
    if ch == 0:
        return SeriesCoefficient(d, 0.0)
    fz = factorizer or _factorizer(max(1000, math.isqrt(d) + 1))
    fac = fz.factorize(d)
    star = 1.0
    for p in fac.primes:
        star *= _star_local(p, int(N))
    return SeriesCoefficient(d, ch * star / euler_phi(fac))


def f_coefficients(N: int, D: int) -> np.ndarray:
    """Array ``f`` with f[d] for 0 <= d <= D (f[0] = 0), by a multiplicative sieve."""
    N, D = int(N), int(D)
    if D < 1:
        raise ArgumentError("need D >= 1")
    star = np.ones(D + 1)
    phi = np.arange(D + 1, dtype=np.float64)
    for p in _table(max(D, 2)).primes(D):
        p = int(p)
        if p == 2:
            continue  # even d are killed by chi
        star[p::p] *= _star_local(p, N)
        phi[p::p] *= 1.0 - 1.0 / p
    d = np.arange(D + 1)
    f = np.zeros(D + 1)
    odd = d % 2 == 1
    f[odd] = chi4_array(d[odd]) * star[odd] / np.rint(phi[odd])
    return f


def partial_sum_vs_F0(
    N: int, D: int, P: int, primes: PrimeTable | None = None
) -> tuple[float, float, float]:
    """(sum_{d<=D} f(d), (pi/4) N(0), |difference|)."""
    partial = math.fsum(f_coefficients(N, D))
    limit_value = math.pi / 4.0 * script_N_at_zero(N, P, primes).value
    return partial, limit_value, abs(partial - limit_value)


def decade_median_gaps(
    N: int, decades: list[int], P: int, primes: PrimeTable | None = None, points: int = 200
) -> dict[int, float]:
    """Median gap |sum_{d<=D} f(d) - F(0)| over log-spaced D in (10^(k-1), 10^k].

    The partial sums oscillate with the sign of chi, so single-D gaps are
    noisy; medians per decade carry the trend.
    """
    top = 10 ** max(decades)
    f = f_coefficients(N, top)
    # cumsum is fine here: |f| < 1 and the tolerance of interest is >> 1e-12
    cum = np.cumsum(f)
    target = math.pi / 4.0 * script_N_at_zero(N, P, primes).value
    out = {}
    for k in decades:
        Ds = np.unique(np.geomspace(10 ** (k - 1) + 1, 10**k, points).astype(np.int64))
        out[k] = float(np.median(np.abs(cum[Ds] - target)))
    return out


def fit_decay_constant(N: int, D: int) -> float:
    """Smallest C with |f(d)| <= C (log log 10d)^2 / d for all d <= D."""
    f = f_coefficients(N, D)[1:]
    d = np.arange(1, D + 1, dtype=np.float64)
    return float(np.max(np.abs(f) * d / np.log(np.log(10.0 * d)) ** 2))
