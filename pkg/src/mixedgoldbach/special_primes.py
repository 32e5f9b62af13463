"""Piatetski-Shapiro primes [n^c] and Linnik primes x^2 + y^2 + 1.

The exponent c is kept as an exact fraction num/den so that floor(n^c) is
decided by integer comparisons m^den <= n^num < (m+1)^den.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import ArgumentError, Factorizer, PrimeTable, r_two_squares, r_two_squares_array

__all__ = [
    "THEOREM_C_MAX",
    "RationalExponent",
    "SpecialPrimeTable",
    "iroot",
    "floor_pow",
    "ceil_pow_gamma",
    "is_ps_prime",
    "is_linnik_prime",
    "ps_weight",
    "ps_weights",
    "ps_sequence",
    "classify_all",
]

THEOREM_C_MAX = Fraction(73, 64)


@dataclass(frozen=True)
class RationalExponent:
    """c = num/den in lowest terms, with gamma = 1/c.

    Outside 1 < c < 73/64 construction fails unless ``exploration`` is set;
    even then c >= 1 is required so that n -> [n^c] stays injective.
    """

    num: int
    den: int
    exploration: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.num < 1 or self.den < 1:
            raise ArgumentError("c needs a positive numerator and denominator")
        if math.gcd(self.num, self.den) != 1:
            raise ArgumentError(f"{self.num}/{self.den} is not in lowest terms")
        c = Fraction(self.num, self.den)
        if c < 1:
            raise ArgumentError("c < 1 is not supported")
        if not self.exploration and not (1 < c < THEOREM_C_MAX):
            raise ArgumentError(f"c = {c} outside (1, 73/64); pass exploration=True to override")

    @classmethod
    def parse(cls, text: str | Fraction, exploration: bool = False) -> "RationalExponent":
        c = Fraction(text)
        return cls(c.numerator, c.denominator, exploration)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.den, self.num)

    @property
    def gamma_num(self) -> int:
        return self.den

    @property
    def gamma_den(self) -> int:
        return self.num

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for integers x >= 0, k >= 1."""
    if x < 0 or k < 1:
        raise ArgumentError("iroot needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    try:
        g = int(math.exp(math.log(x) / k)) + 2
    except OverflowError:
        g = 1 << (x.bit_length() // k + 1)
    while g**k <= x:
        g *= 2
    # Newton from above decreases monotonically to the floor root
    while True:
        h = ((k - 1) * g + x // g ** (k - 1)) // k
        if h >= g:
            break
        g = h
    while g**k > x:
        g -= 1
    while (g + 1) ** k <= x:
        g += 1
    return g


def floor_pow(n: int, c: RationalExponent) -> int:
    """[n^c] in exact integer arithmetic."""
    n = int(n)
    if n < 1:
        raise ArgumentError("floor_pow needs n >= 1")
    return iroot(n**c.num, c.den)


def ceil_pow_gamma(x: int, c: RationalExponent) -> int:
    """Smallest integer n with n^c >= x, i.e. ceil(x^gamma)."""
    x = int(x)
    target = x**c.den
    r = iroot(target, c.num)
    return r if r**c.num == target else r + 1


def _is_prime_int(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % q for q in range(3, math.isqrt(p) + 1, 2))


def _check_prime(p: int, primes: PrimeTable | None) -> int:
    p = int(p)
    ok = primes.is_prime(p) if primes is not None and p <= primes.limit else _is_prime_int(p)
    if not ok:
        raise ArgumentError(f"{p} is not prime")
    return p


def is_ps_prime(p: int, c: RationalExponent, primes: PrimeTable | None = None) -> bool:
    """Is the prime p equal to [n^c] for some n >= 1?

    The only candidate is n = ceil(p^gamma); it works iff n^c < p + 1.
    """
    p = _check_prime(p, primes)
    n = ceil_pow_gamma(p, c)
    return n**c.num < (p + 1) ** c.den


def is_linnik_prime(p: int, factorizer: Factorizer) -> bool:
    """Is p - 1 a sum of two squares (p = x^2 + y^2 + 1)?"""
    p = _check_prime(p, factorizer.primes)
    return r_two_squares(factorizer.factorize(p - 1)) > 0


def ps_weight(p: int, c: RationalExponent) -> float:
    """p^(1 - gamma) * log p."""
    p = int(p)
    if p < 2:
        raise ArgumentError("weight needs p >= 2")
    return p ** float(1 - c.gamma) * math.log(p)


def ps_weights(ps: np.ndarray, c: RationalExponent) -> np.ndarray:
    ps = np.asarray(ps, dtype=np.float64)
    return np.power(ps, float(1 - c.gamma)) * np.log(ps)


def ps_sequence(limit: int, c: RationalExponent) -> np.ndarray:
    """All values [n^c] <= limit for n = 1, 2, ..., strictly increasing.

    Floats give [n^c] directly except when n^c sits within a certified
    rounding margin of an integer; those n are redone in exact arithmetic.
    """
    limit = int(limit)
    cf = c.num / c.den
    n_hi = iroot((limit + 1) ** c.den, c.num) + 1  # (limit+1)^gamma, plus slack
    n = np.arange(1, n_hi + 1, dtype=np.float64)
    y = np.power(n, cf)
    # |error| of pow plus the error from rounding c itself
    margin = 1e-12 * np.maximum(y, 1.0) * (1.0 + np.log(n))
    fl = np.floor(y)
    risky = np.flatnonzero((y - fl < margin) | (fl + 1.0 - y < margin))
    vals = fl.astype(np.int64)
    for i in risky:
        vals[i] = floor_pow(i + 1, c)
    vals = vals[vals <= limit]
    if vals.size > 1 and not np.all(np.diff(vals) > 0):
        raise AssertionError("n -> [n^c] is not injective on the enumerated range")
    return vals


def _pack(mask: np.ndarray) -> np.ndarray:
    out = np.packbits(mask, bitorder="little")
    out.setflags(write=False)
    return out


def _unpack(bits: np.ndarray, limit: int) -> np.ndarray:
    return np.unpackbits(bits, bitorder="little", count=limit + 1).astype(bool)


@dataclass(frozen=True)
class SpecialPrimeTable:
    """PS and Linnik flags for primes up to ``limit`` (bit n <-> integer n)."""

    limit: int
    c: RationalExponent
    ps_bits: np.ndarray = field(repr=False)
    linnik_bits: np.ndarray = field(repr=False)
    sequence: np.ndarray = field(repr=False, compare=False)  # the [n^c] values <= limit

    def ps_mask(self) -> np.ndarray:
        return _unpack(self.ps_bits, self.limit)

    def linnik_mask(self) -> np.ndarray:
        return _unpack(self.linnik_bits, self.limit)

    def ps_primes(self, upto: int | None = None) -> np.ndarray:
        out = np.flatnonzero(self.ps_mask())
        return out if upto is None else out[out <= upto]

    def linnik_primes(self, upto: int | None = None) -> np.ndarray:
        out = np.flatnonzero(self.linnik_mask())
        return out if upto is None else out[out <= upto]

    def is_ps(self, p: int) -> bool:
        return bool((self.ps_bits[p >> 3] >> (p & 7)) & 1)

    def is_linnik(self, p: int) -> bool:
        return bool((self.linnik_bits[p >> 3] >> (p & 7)) & 1)

    def ceil_gamma(self, x) -> np.ndarray:
        """ceil(x^gamma) for integers 1 <= x <= limit + 1, from the stored sequence."""
        x = np.asarray(x, dtype=np.int64)
        if x.size and (x.min() < 1 or x.max() > self.limit + 1):
            raise ArgumentError("ceil_gamma argument outside the enumerated range")
        # n^c < x  <=>  [n^c] < x for integer x
        return np.searchsorted(self.sequence, x, side="left") + 1


def classify_all(
    limit: int,
    c: RationalExponent,
    primes: PrimeTable,
    factorizer: Factorizer | None = None,
) -> SpecialPrimeTable:
    """Mark PS primes by forward enumeration of [n^c] and Linnik primes via r(p-1)."""
    limit = int(limit)
    if limit > primes.limit:
        raise ArgumentError("classification limit exceeds the prime table")
    if factorizer is None or factorizer.limit < limit:
        factorizer = Factorizer(limit, primes)
    prime_mask = primes.mask(limit)

    seq = ps_sequence(limit + 1, c)  # one past limit so ceil_gamma covers limit + 1
    ps = np.zeros(limit + 1, dtype=bool)
    inner = seq[seq <= limit]
    ps[inner] = prime_mask[inner]

    ps_list = primes.primes(limit)
    linnik = np.zeros(limit + 1, dtype=bool)
    linnik[ps_list] = r_two_squares_array(ps_list - 1, factorizer.spf) > 0

    seq.setflags(write=False)
    return SpecialPrimeTable(limit, c, _pack(ps), _pack(linnik), seq)
