"""Numerical companion for the ternary problem p1 + p2 + p3 = N with p1 a
Linnik prime (p1 - 1 a sum of two squares) and p2 a Piatetski-Shapiro
prime [n^c].

Modules: ``arith`` (sieve, factoring, r(n)), ``special_primes``,
``singular_series``, ``gamma`` (Gamma(N) and its divisor split),
``circle`` (exponential sums and arcs), ``verify`` and ``report``.
"""

from .arith import ArgumentError, sieve_primes, theta0
from .gamma import GammaTables, gamma_decomposed, gamma_fast, gamma_oracle, main_term
from .special_primes import RationalExponent, classify_all

__all__ = [
    "ArgumentError",
    "GammaTables",
    "RationalExponent",
    "classify_all",
    "gamma_decomposed",
    "gamma_fast",
    "gamma_oracle",
    "main_term",
    "sieve_primes",
    "theta0",
]
__version__ = "0.1.0"
