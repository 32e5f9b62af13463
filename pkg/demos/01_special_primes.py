"""Piatetski-Shapiro and Linnik primes up to a million.

Run: python3 demos/01_special_primes.py
"""

# %% Sieve and classify
import math

import numpy as np

from mixedgoldbach import arith, special_primes as sp
from mixedgoldbach.special_primes import RationalExponent

limit = 10**6
c = RationalExponent.parse("11/10")
primes = arith.sieve_primes(limit)
table = sp.classify_all(limit, c, primes)
print(f"pi({limit}) = {len(primes)}")

# %% The first few [n^c] and which of them are prime
seq = table.sequence[:20]
print("[n^c], n = 1..20:", seq.tolist())
print("PS primes below 100:", table.ps_primes(100).tolist())
print("Linnik primes below 100:", table.linnik_primes(100).tolist())

# %% Counts against the heuristic N^gamma / log N
for N in (10**4, 10**5, 10**6):
    n_ps = table.ps_primes(N).size
    print(f"N={N:>8d}  PS primes {n_ps:6d}  ratio to N^gamma/log N {n_ps / (N ** float(c.gamma) / math.log(N)):.3f}")

# %% Linnik primes: p - 1 a sum of two squares, density ~ C N / log^{3/2} N
lin = table.linnik_primes()
for N in (10**4, 10**5, 10**6):
    k = np.count_nonzero(lin <= N)
    print(f"N={N:>8d}  Linnik primes {k:6d}  k log^1.5 N / N = {k * math.log(N) ** 1.5 / N:.3f}")

# %% Both at once
both = np.intersect1d(table.ps_primes(), lin)
print(f"primes that are both: {both.size}; first ten {both[:10].tolist()}")
