"""Exponential sums, the arc partition, and exact discrete identities.

Run: python3 demos/04_circle_method.py
"""

# %% Tables and the arc partition at desk-scale B = 1
from fractions import Fraction

import numpy as np

from mixedgoldbach import circle as cm
from mixedgoldbach.gamma import GammaTables
from mixedgoldbach.special_primes import RationalExponent

c = RationalExponent.parse("11/10")
tables = GammaTables(10**6, c)
arcs = cm.build_arcs(10**6, 1.0)
print(f"Q={arcs.Q:.2f} tau={arcs.tau:.0f} arcs={len(arcs.major)} disjoint={arcs.disjoint} "
      f"major measure={arcs.major_measure:.2e}")

# %% Major arcs: S(a/q + b) against mu(q)/phi(q) M(b)
N = 10**6
for a, q in ((0, 1), (1, 2), (1, 3), (1, 4), (2, 5)):
    for off in (0.0, 0.5 / (q * arcs.tau)):
        _, _, e = cm.major_arc_error_S(N, a, q, off, tables)
        _, _, ec = cm.major_arc_error_Sc(N, a, q, off, tables)
        print(f"{a}/{q} + {off:.1e}:  |S - model|/N = {e / N:.2e}   |S_c - model|/N = {ec / N:.2e}")

# %% Omega + Sigma = S_c exactly; Sigma is the small part
for alpha in (0.0, Fraction(1, 3), 0.123456):
    om, si = cm.omega_sigma_split(alpha, N, tables)
    sc = cm.eval_exp_sum(cm.ExpSumSpec("ps_weighted", N, c=c), alpha, tables)
    print(f"alpha={float(alpha):.6f}  |Omega+Sigma-S_c|/|S_c|={abs(om + si - sc) / abs(sc):.1e}  |Sigma|/N={abs(si) / N:.2e}")

# %% Discrete orthogonality reproduces the triple count
small = GammaTables(5000, c)
for n in (9, 21, 45, 101, 1001):
    M = 1 << (3 * n).bit_length()
    via, direct = cm.dft_representation_check(n, M, small)
    print(f"N={n:5d} M={M:5d}  dft={via:.10f}  direct={direct:.10f}")

# %% Second moment of K: exact value versus the two single-sum forms
print(cm.k_second_moment(5000, 0.5, 16384, small))

# %% Minor arcs get relatively smaller as N grows
for n in (10**4, 10**5, 10**6):
    s, sc = cm.minor_arc_sup(n, 1.0, tables, samples=200)
    print(f"N={n:8d}  sup|S|/N={s:.4f}  sup|S_c|/N={sc:.4f}")
