"""Integer and arithmetic-function primitives.

Everything else in the package is built on these: a bit-packed prime
sieve, factorizations (smallest-prime-factor table plus trial division),
the character chi mod 4, mu, phi, the two-squares count r(n), the sawtooth
psi and the Chebyshev-theta error in progressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator

import numpy as np

__all__ = [
    "ArgumentError",
    "IncompleteFactorizationError",
    "PrimeTable",
    "Factorization",
    "Factorizer",
    "ApErrorReport",
    "sieve_primes",
    "chi4",
    "chi4_array",
    "mobius",
    "euler_phi",
    "r_two_squares",
    "r_two_squares_array",
    "r_two_squares_bruteforce",
    "psi_frac",
    "theta0",
    "ap_prime_error",
]

# odd numbers per segment; 2**18 bools is 256 KiB, roughly an L2 slice
SEGMENT_ODDS = 1 << 18


class ArgumentError(ValueError):
    """Invalid argument to an arithmetic primitive."""


class IncompleteFactorizationError(ArgumentError):
    """A number could not be fully factored with the primes at hand."""


# ---------------------------------------------------------------------------
# Sieve
# ---------------------------------------------------------------------------


def _small_primes(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


@dataclass(frozen=True)
class PrimeTable:
    """Primality flags for 2..limit, stored odd-only and bit-packed.

    Bit ``i`` of ``bits`` (little-endian bit order) marks the odd number
    ``2*i + 1``; 2 is handled separately.
    """

    limit: int
    bits: np.ndarray = field(repr=False)
    _primes: np.ndarray = field(repr=False, compare=False)

    def __contains__(self, n: int) -> bool:
        return self.is_prime(n)

    def is_prime(self, n: int) -> bool:
        n = int(n)
        if n > self.limit:
            raise ArgumentError(f"{n} exceeds table limit {self.limit}")
        if n == 2:
            return True
        if n < 2 or n % 2 == 0:
            return False
        i = n >> 1
        return bool((self.bits[i >> 3] >> (i & 7)) & 1)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self._primes)

    def __len__(self) -> int:
        return int(self._primes.size)

    def count(self, upto: int | None = None) -> int:
        """pi(upto), defaulting to pi(limit)."""
        if upto is None:
            return len(self)
        return int(np.searchsorted(self._primes, upto, side="right"))

    def primes(self, upto: int | None = None) -> np.ndarray:
        """Sorted int64 array of primes <= upto (read-only view)."""
        if upto is None:
            return self._primes
        return self._primes[: self.count(upto)]

    def mask(self, upto: int | None = None) -> np.ndarray:
        """Dense boolean array ``m`` with ``m[n]`` true iff n is prime."""
        upto = self.limit if upto is None else min(upto, self.limit)
        out = np.zeros(upto + 1, dtype=bool)
        out[self.primes(upto)] = True
        return out


def sieve_primes(limit: int) -> PrimeTable:
    """Segmented odd-only sieve of Eratosthenes up to ``limit`` inclusive."""
    limit = int(limit)
    if limit < 2:
        raise ArgumentError("sieve limit must be >= 2")
    n_odds = limit // 2 + 1  # index i <-> 2i+1, covers 1..limit(+1)
    base = _small_primes(math.isqrt(limit) + 1)[1:]  # odd base primes
    packed = np.zeros((n_odds + 7) // 8, dtype=np.uint8)
    found = [np.array([2], dtype=np.int64)]

    for lo in range(0, n_odds, SEGMENT_ODDS):
        hi = min(lo + SEGMENT_ODDS, n_odds)
        seg = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            seg[0] = False  # 1 is not prime
        low_val = 2 * lo + 1
        high_val = 2 * (hi - 1) + 1
        for p in base:
            p = int(p)
            p2 = p * p
            if p2 > high_val:
                break
            start = max(p2, ((low_val + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            seg[(start - low_val) // 2 :: p] = False
        # odd index n_odds-1 may overshoot limit when limit is even
        if hi == n_odds and 2 * (hi - 1) + 1 > limit:
            seg[-1] = False
        idx = np.flatnonzero(seg)
        found.append(2 * (idx + lo) + 1)
        # segments start on multiples of 8 so byte packing lines up
        packed[lo // 8 : lo // 8 + (hi - lo + 7) // 8] = np.packbits(seg, bitorder="little")

    primes = np.concatenate(found).astype(np.int64)
    primes.setflags(write=False)
    packed.setflags(write=False)
    return PrimeTable(limit=limit, bits=packed, _primes=primes)


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if e < 1 or p <= last:
                raise ArgumentError(f"malformed factorization of {self.n}: {self.factors}")
            prod *= p**e
            last = p
        if prod != self.n:
            raise ArgumentError(f"factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


class Factorizer:
    """Factor integers using a smallest-prime-factor table.

    Numbers above the table limit are trial-divided by the sieved primes;
    a cofactor that survives and is below ``limit**2`` is prime.
    """

    def __init__(self, limit: int, primes: PrimeTable | None = None):
        self.limit = int(limit)
        if primes is None or primes.limit < self.limit:
            primes = sieve_primes(max(self.limit, 2))
        self.primes = primes
        spf = np.zeros(self.limit + 1, dtype=np.int32)
        for p in primes.primes(math.isqrt(self.limit)):
            p = int(p)
            view = spf[p * p :: p]
            view[view == 0] = p
        spf[spf == 0] = np.arange(self.limit + 1, dtype=np.int32)[spf == 0]
        spf.setflags(write=False)
        self.spf = spf

    def factorize(self, n: int) -> Factorization:
        n = int(n)
        if n < 1:
            raise ArgumentError(f"cannot factor {n}")
        out: list[tuple[int, int]] = []
        m = n
        if m > self.limit:
            for p in self.primes.primes():
                p = int(p)
                if p * p > m:
                    break
                if m % p == 0:
                    e = 0
                    while m % p == 0:
                        m //= p
                        e += 1
                    out.append((p, e))
                    if m <= self.limit:
                        break
            if m > self.limit:
                if m >= self.primes.limit**2:
                    raise IncompleteFactorizationError(
                        f"cofactor {m} of {n} needs primes beyond {self.primes.limit}"
                    )
                out.append((m, 1))
                return Factorization(n, tuple(out))
        spf = self.spf
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return Factorization(n, tuple(out))

    __call__ = factorize


# ---------------------------------------------------------------------------
# Arithmetic functions
# ---------------------------------------------------------------------------


def chi4(d: int) -> int:
    """The non-principal character mod 4."""
    d = int(d)
    if d <= 0:
        raise ArgumentError("chi4 is defined here for d >= 1")
    if d % 2 == 0:
        return 0
    return 1 if d % 4 == 1 else -1


def chi4_array(d) -> np.ndarray:
    d = np.asarray(d, dtype=np.int64)
    return np.where(d % 2 == 0, 0, np.where(d % 4 == 1, 1, -1)).astype(np.int64)


def mobius(f: Factorization) -> int:
    if any(e >= 2 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def euler_phi(f: Factorization) -> int:
    return reduce(lambda acc, pe: acc * (pe[0] - 1) * pe[0] ** (pe[1] - 1), f.factors, 1)


def r_two_squares(f: Factorization) -> int:
    """r(n) = 4 * sum_{d|n} chi(d), evaluated multiplicatively.

    The divisor sum of chi is multiplicative with local factor 1 at p=2,
    e+1 at p = 1 mod 4, and [e even] at p = 3 mod 4.
    """
    total = 4
    for p, e in f.factors:
        if p % 4 == 1:
            total *= e + 1
        elif p % 4 == 3 and e % 2:
            return 0
    return total


def r_two_squares_array(values, spf: np.ndarray) -> np.ndarray:
    """Vectorized r(n) for an array of n >= 1, all within the spf table."""
    rem = np.array(values, dtype=np.int64, copy=True)
    if rem.size and rem.min() < 1:
        raise ArgumentError("r(n) needs n >= 1")
    result = np.full(rem.shape, 4, dtype=np.int64)
    prev = np.ones(rem.shape, dtype=np.int64)
    run = np.zeros(rem.shape, dtype=np.int64)

    def settle(mask):
        p, e = prev[mask], run[mask]
        fac = np.where(p % 4 == 1, e + 1, np.where((p % 4 == 3) & (e % 2 == 1), 0, 1))
        result[mask] *= fac

    active = rem > 1
    while active.any():
        idx = np.flatnonzero(active)
        p = spf[rem[idx]].astype(np.int64)
        fresh = p != prev[idx]
        settle(idx[fresh])
        run[idx[fresh]] = 0
        prev[idx] = p
        run[idx] += 1
        rem[idx] //= p
        active = rem > 1
    settle(np.ones(rem.shape, dtype=bool))
    return result


def r_two_squares_bruteforce(limit: int) -> np.ndarray:
    """Lattice-point count of m1^2 + m2^2 = n for all 0 <= n <= limit."""
    s = math.isqrt(limit)
    m = np.arange(-s, s + 1, dtype=np.int64)
    sq = m * m
    tot = (sq[:, None] + sq[None, :]).ravel()
    return np.bincount(tot[tot <= limit], minlength=limit + 1)


def psi_frac(t: float) -> float:
    """Sawtooth {t} - 1/2, in [-1/2, 1/2)."""
    t = float(t)
    if not math.isfinite(t):
        raise ArgumentError("psi needs a finite argument")
    return t - math.floor(t) - 0.5


def theta0() -> float:
    return 0.5 - math.e * math.log(2.0) / 4.0


# ---------------------------------------------------------------------------
# Prime number theorem error in progressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ApErrorReport:
    t: int
    h: int
    delta: float
    argmax_y: float
    argmax_l: int
    left_limit: bool  # maximum attained as y -> argmax_y from below


def ap_prime_error(t: int, h: int, primes: PrimeTable) -> ApErrorReport:
    """max over real y <= t and residues (l, h) = 1 of |theta(y; h, l) - y/phi(h)|.

    Between jumps the error is linear with slope -1/phi(h), so it suffices to
    look at each prime (after and just before its jump) and at y = t.
    """
    t, h = int(t), int(h)
    if h < 1 or t < 2:
        raise ArgumentError("need h >= 1 and t >= 2")
    if t > primes.limit:
        raise ArgumentError("t exceeds the prime table")
    phi_h = sum(1 for l in range(h) if math.gcd(l, h) == 1)
    ps = primes.primes(t)
    best = (-1.0, 0.0, 0, False)
    for l in range(h):
        if math.gcd(l, h) != 1:
            continue
        sel = ps[ps % h == l] if h > 1 else ps
        logs = np.log(sel.astype(float))
        theta_at = np.cumsum(logs)
        theta_before = theta_at - logs
        y = sel.astype(float)
        cands = [
            (np.abs(theta_at - y / phi_h), False),
            (np.abs(theta_before - y / phi_h), True),
        ]
        for err, left in cands:
            if err.size:
                k = int(np.argmax(err))
                if err[k] > best[0]:
                    best = (float(err[k]), float(y[k]), l, left)
        end = abs(float(theta_at[-1] if theta_at.size else 0.0) - t / phi_h)
        if end > best[0]:
            best = (end, float(t), l, False)
    return ApErrorReport(t=t, h=h, delta=best[0], argmax_y=best[1], argmax_l=best[2], left_limit=best[3])
