"""The singular series and the identity F(0) = (pi/4) N(0).

Run: python3 demos/03_singular_series.py
"""

# %% Euler products with tail envelopes
import math

import numpy as np

from mixedgoldbach import singular_series as ss

for N in (3, 15, 10**5 + 3, 10**6 + 3):
    s, g = ss.sigma_N(N, 10**5), ss.sigma_gamma(N, 10**5)
    print(f"N={N:8d}  S(N) in [{s.low:.8f}, {s.high:.8f}]  S_Gamma(N) in [{g.low:.8f}, {g.high:.8f}]")
print("S(even) =", ss.sigma_N(10**6, 10**5).value)

# %% Partial sums of f(d) approach F(0), with chi-driven oscillation
N = 10**5 + 3
f = ss.f_coefficients(N, 10**5)
cum = np.cumsum(f)
target = math.pi / 4 * ss.script_N_at_zero(N, 10**6).value
for D in (10, 100, 1000, 10**4, 10**5):
    print(f"D={D:6d}  sum={cum[D]:.8f}  gap={abs(cum[D] - target):.2e}")
print("decade medians:", ss.decade_median_gaps(N, [3, 4, 5], 10**6))

# %% Coefficient decay |f(d)| <= C (loglog 10d)^2 / d
print(f"fitted C = {ss.fit_decay_constant(N, 10**5):.3f}")

# %% The j-independence behind Gamma* = 0
m = 6
print(ss.sigma_dl(N, 4 * m, 1 + m, 10**4).value, ss.sigma_dl(N, 4 * m, 1 - m, 10**4).value)
