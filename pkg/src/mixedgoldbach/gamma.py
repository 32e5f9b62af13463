"""The weighted representation count Gamma(N) and its pieces.

Gamma(N) sums r(p1 - 1) p2^(1-gamma) log p1 log p2 log p3 over ordered prime
triples p1 + p2 + p3 = N with p2 = [n^c].  Three routes are provided:

* ``gamma_oracle``: the direct triple enumeration (small N only);
* ``gamma_fast``: a real FFT convolution of the (r log) and (log) arrays,
  then a sum over PS primes p2;
* ``gamma_decomposed``: the divisor sum r(p1-1)/4 = sum_{d | p1-1} chi(d)
  split at D and N/D, each piece summed against the (PS, log) convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as sfft

from .arith import ArgumentError, Factorizer, PrimeTable, chi4_array, r_two_squares_array, sieve_primes
from .singular_series import sigma_gamma
from .special_primes import RationalExponent, SpecialPrimeTable, classify_all, ps_weights

__all__ = [
    "ORACLE_MAX",
    "set_workers",
    "DegenerateCutError",
    "SizeError",
    "WeightedPrimeArray",
    "PairSumTable",
    "GammaBreakdown",
    "GammaTables",
    "pair_sum_convolution",
    "gamma_oracle",
    "gamma_fast",
    "divisor_cut",
    "divisor_chi_split",
    "gamma_decomposed",
    "restricted_sum_I",
    "gamma3_reconstruction",
    "main_term",
    "individual_formulas",
]

ORACLE_MAX = 200_000
CONV_MAX = 100_000_000

_workers = 1


def set_workers(n: int) -> None:
    """Thread count handed to the FFT backend."""
    global _workers
    _workers = max(1, int(n))


class SizeError(ArgumentError):
    pass


class DegenerateCutError(ArgumentError):
    pass


WEIGHT_KINDS = ("r_log", "log", "ps_weighted")


@dataclass(frozen=True)
class WeightedPrimeArray:
    limit: int
    values: np.ndarray
    weight_kind: str


@dataclass(frozen=True)
class PairSumTable:
    length: int
    values: np.ndarray


class GammaTables:
    """Primes, special-prime flags and weight arrays up to ``limit`` for one c.

    Convolutions are built lazily and cached; everything is read-only once
    built.
    """

    def __init__(
        self,
        limit: int,
        c: RationalExponent,
        primes: PrimeTable | None = None,
        factorizer: Factorizer | None = None,
        special: SpecialPrimeTable | None = None,
    ):
        self.limit = int(limit)
        if self.limit < 10:
            raise ArgumentError("tables need limit >= 10")
        self.c = c
        self.primes = primes if primes is not None and primes.limit >= self.limit else sieve_primes(self.limit)
        self.factorizer = (
            factorizer if factorizer is not None and factorizer.limit >= self.limit
            else Factorizer(self.limit, self.primes)
        )
        if special is None or special.limit < self.limit or special.c != c:
            special = classify_all(self.limit, c, self.primes, self.factorizer)
        self.special = special

    @cached_property
    def prime_list(self) -> np.ndarray:
        return self.primes.primes(self.limit)

    @cached_property
    def prime_mask(self) -> np.ndarray:
        return self.primes.mask(self.limit)

    @cached_property
    def r_at_primes(self) -> np.ndarray:
        """r(p - 1) aligned with ``prime_list``."""
        return r_two_squares_array(self.prime_list - 1, self.factorizer.spf)

    @cached_property
    def ps_list(self) -> np.ndarray:
        return self.special.ps_primes(self.limit)

    def weights(self, kind: str) -> WeightedPrimeArray:
        return self._weights[kind]

    @cached_property
    def _weights(self) -> dict[str, WeightedPrimeArray]:
        ps = self.prime_list
        logs = np.log(ps.astype(np.float64))
        out = {}
        for kind in WEIGHT_KINDS:
            v = np.zeros(self.limit + 1)
            if kind == "log":
                v[ps] = logs
            elif kind == "r_log":
                v[ps] = self.r_at_primes * logs
            else:
                v[self.ps_list] = ps_weights(self.ps_list, self.c)
            v.setflags(write=False)
            out[kind] = WeightedPrimeArray(self.limit, v, kind)
        return out

    @cached_property
    def pair_rlog_log(self) -> PairSumTable:
        """sum over p1 + p3 = M of r(p1-1) log p1 log p3."""
        return pair_sum_convolution(self.weights("r_log"), self.weights("log"))

    @cached_property
    def pair_ps_log(self) -> PairSumTable:
        """sum over p2 + p3 = M of p2^(1-gamma) log p2 log p3, p2 PS."""
        return pair_sum_convolution(self.weights("ps_weighted"), self.weights("log"))

    @cached_property
    def pair_log_log(self) -> PairSumTable:
        return pair_sum_convolution(self.weights("log"), self.weights("log"))

    def check_N(self, N: int) -> int:
        N = int(N)
        if N > self.limit:
            raise SizeError(f"N = {N} exceeds table limit {self.limit}")
        return N


def pair_sum_convolution(
    w1: WeightedPrimeArray, w3: WeightedPrimeArray, method: str = "fft"
) -> PairSumTable:
    """values[M] = sum_{a + b = M} w1[a] w3[b] for 0 <= M <= 2 * limit."""
    if w1.limit != w3.limit:
        raise ArgumentError("weight arrays must share a limit")
    n = w1.limit + 1
    out_len = 2 * n - 1
    if out_len > 2 * CONV_MAX:
        raise SizeError("convolution length too large")
    if method == "direct":
        vals = np.convolve(w1.values, w3.values)
    elif method == "fft":
        size = sfft.next_fast_len(out_len, real=True)
        f1 = sfft.rfft(w1.values, size, workers=_workers)
        f3 = f1 if w3 is w1 else sfft.rfft(w3.values, size, workers=_workers)
        f1 = f1 * f3
        del f3
        vals = sfft.irfft(f1, size, workers=_workers)[:out_len]
        del f1
        # outputs that must vanish: M < 4 (no two primes sum below 4)
        vals[: min(4, out_len)] = 0.0
    else:
        raise ArgumentError(f"unknown method {method!r}")
    vals.setflags(write=False)
    return PairSumTable(out_len, vals)


def gamma_oracle(N: int, tables: GammaTables) -> float:
    """Direct enumeration over ordered triples (p1, p2, p3)."""
    N = int(N)
    if N > ORACLE_MAX:
        raise SizeError(f"oracle refuses N > {ORACLE_MAX}")
    N = tables.check_N(N)
    if N < 6:
        return 0.0
    mask = tables.prime_mask
    ps = tables.prime_list
    rr = tables.r_at_primes.astype(np.float64)
    logs = np.log(ps.astype(np.float64))
    terms = []
    for p2 in tables.ps_list[tables.ps_list <= N - 4]:
        p2 = int(p2)
        w2 = p2 ** float(1 - tables.c.gamma) * math.log(p2)
        k = np.searchsorted(ps, N - p2 - 2, side="right")
        p1 = ps[:k]
        p3 = N - p2 - p1
        ok = mask[p3]
        if not ok.any():
            continue
        inner = rr[:k][ok] * logs[:k][ok] * np.log(p3[ok].astype(np.float64))
        terms.append(w2 * math.fsum(inner))
    return math.fsum(terms)


def gamma_fast(N: int, tables: GammaTables) -> float:
    """Gamma(N) from the (r log) * (log) pair sums and the PS weights."""
    N = tables.check_N(N)
    if N < 6:
        return 0.0
    p2 = tables.ps_list[tables.ps_list <= N - 4]
    w = tables.weights("ps_weighted").values[p2]
    return math.fsum(w * tables.pair_rlog_log.values[N - p2])


def divisor_cut(N: int, A_param: float) -> float:
    """D = sqrt(N) / (log N)^A."""
    return math.sqrt(N) / math.log(N) ** A_param


def divisor_chi_split(M: int, lo_cut: float, hi_cut: float) -> tuple[np.ndarray, ...]:
    """Partial character divisor sums for every 0 <= m <= M.

    Returns (s1, s2, s3) with s1[m] = sum of chi(d) over d | m, d <= lo_cut;
    s2 over lo_cut < d < hi_cut; s3 over d >= hi_cut.  Only odd d matter.
    """
    out = [np.zeros(M + 1, dtype=np.int64) for _ in range(3)]
    if M < 1:
        return tuple(out)
    s = math.isqrt(M)

    def which(d):
        d = np.asarray(d, dtype=np.float64)
        return np.where(d <= lo_cut, 0, np.where(d < hi_cut, 1, 2))

    # small divisors: stride over multiples
    for d in range(1, s + 1, 2):
        out[int(which(d))][d::d] += 1 if d % 4 == 1 else -1
    # large divisors d > s: the cofactor k = m/d is < sqrt(M)
    first = s + 1 if (s + 1) % 2 else s + 2
    for k in range(1, M // first + 1):
        ds = np.arange(first, M // k + 1, 2, dtype=np.int64)
        if ds.size == 0:
            break
        ch = chi4_array(ds)
        b = which(ds)
        for i in range(3):
            sel = b == i
            out[i][k * ds[sel]] += ch[sel]
    return tuple(out)


@dataclass(frozen=True)
class GammaBreakdown:
    N: int
    c: RationalExponent
    gamma_total: float
    gamma1: float
    gamma2: float
    gamma3: float
    main_term: float
    ratio: float | None
    D: float
    A_param: float

    @property
    def identity_gap(self) -> float:
        """Relative size of gamma_total - 4 (gamma1 + gamma2 + gamma3)."""
        rebuilt = 4.0 * math.fsum([self.gamma1, self.gamma2, self.gamma3])
        scale = abs(self.gamma_total) or 1.0
        return abs(self.gamma_total - rebuilt) / scale

    @property
    def even(self) -> bool:
        return self.N % 2 == 0


def _pieces(N: int, tables: GammaTables, D: float) -> tuple[float, float, float]:
    p1 = tables.prime_list[tables.prime_list <= N - 4]
    s1, s2, s3 = divisor_chi_split(N - 1, D, N / D)
    base = np.log(p1.astype(np.float64)) * tables.pair_ps_log.values[N - p1]
    return tuple(math.fsum(s[p1 - 1] * base) for s in (s1, s2, s3))


def main_term(N: int, c: RationalExponent, P: int = 10**6) -> float:
    """(gamma/2) S_Gamma(N) N^2; 0 for even N."""
    N = int(N)
    if N % 2 == 0:
        return 0.0
    return float(c.gamma) / 2.0 * sigma_gamma(N, P).value * float(N) ** 2


def gamma_decomposed(N: int, tables: GammaTables, A_param: float = 2.0, P: int = 10**6) -> GammaBreakdown:
    """Gamma = 4 (Gamma_1 + Gamma_2 + Gamma_3) with the divisor cuts D, N/D."""
    N = tables.check_N(N)
    if N < 7:
        raise ArgumentError("decomposition needs N >= 7")
    if A_param <= 0:
        raise ArgumentError("A_param must be positive")
    D = divisor_cut(N, A_param)
    if D >= N / D:
        raise DegenerateCutError(f"D = {D:.3g} >= N/D; increase A_param")
    g1, g2, g3 = _pieces(N, tables, D)
    total = gamma_fast(N, tables)
    mt = main_term(N, tables.c, P)
    ratio = total / mt if mt > 0 else None
    return GammaBreakdown(N, tables.c, total, g1, g2, g3, mt, ratio, D, float(A_param))


def restricted_sum_I(
    N: int,
    d: int,
    l: int,
    J_lo: float,
    J_hi: float,
    tables: GammaTables,
    method: str = "pairsum",
) -> float:
    """Sum of p2^(1-gamma) log p1 log p2 log p3 over p1 + p2 + p3 = N, p2 PS,
    p1 = l (mod d) and J_lo <= p1 <= J_hi."""
    N, d, l = tables.check_N(N), int(d), int(l)
    if d < 1 or math.gcd(d, l) != 1:
        raise ArgumentError("need d >= 1 and gcd(d, l) = 1")
    if not (1 <= J_lo <= J_hi <= N):
        raise ArgumentError("need 1 <= J_lo <= J_hi <= N")
    ps = tables.prime_list
    p1 = ps[(ps >= J_lo) & (ps <= min(J_hi, N - 4)) & (ps % d == l % d)]
    if p1.size == 0:
        return 0.0
    if method == "pairsum":
        return math.fsum(np.log(p1.astype(np.float64)) * tables.pair_ps_log.values[N - p1])
    if method == "direct":
        if N > ORACLE_MAX:
            raise SizeError("direct restricted sum is for small N")
        mask = tables.prime_mask
        w2 = tables.weights("ps_weighted").values
        terms = []
        for a in p1.tolist():
            b = tables.ps_list[tables.ps_list <= N - a - 2]
            cc = N - a - b
            ok = mask[cc]
            if ok.any():
                terms.append(math.log(a) * math.fsum(w2[b[ok]] * np.log(cc[ok].astype(np.float64))))
        return math.fsum(terms)
    raise ArgumentError(f"unknown method {method!r}")


def gamma3_reconstruction(N: int, tables: GammaTables, A_param: float = 2.0) -> float:
    """Gamma_3 rebuilt as sum_{m < D, m even} sum_{j = +-1} chi(j) I_{4m, 1+jm; J_m}."""
    N = tables.check_N(N)
    D = divisor_cut(N, A_param)
    terms = []
    m = 2
    while m < D:
        lo = 1.0 + m * N / D
        if lo <= N:
            for j in (1, -1):
                terms.append(j * restricted_sum_I(N, 4 * m, (1 + j * m) % (4 * m), lo, N, tables))
        m += 2
    return math.fsum(terms)


def individual_formulas(N: int, tables: GammaTables, P: int = 10**6) -> dict[str, float]:
    """The two factor asymptotics whose product gives the main term.

    Returns the ratio of sum r(p1-1) log p1 log p2 log p3 to (1/2) S_Gamma N^2,
    and (1/N) sum_{PS p <= N} p^(1-gamma) log p divided by gamma.
    """
    N = tables.check_N(N)
    p2 = tables.prime_list[tables.prime_list <= N - 4]
    binary = math.fsum(np.log(p2.astype(np.float64)) * tables.pair_rlog_log.values[N - p2])
    ps = tables.ps_list[tables.ps_list <= N]
    density = math.fsum(tables.weights("ps_weighted").values[ps]) / N
    sg = sigma_gamma(N, P).value if N % 2 else 0.0
    out = {
        "ternary_r_sum": binary,
        "ternary_r_ratio": binary / (0.5 * sg * N * N) if sg else float("nan"),
        "ps_density": density,
        "ps_density_ratio": density / float(tables.c.gamma),
    }
    return out
