# %% [markdown]
# # Sieving B-free numbers and measuring densities
#
# The square-free numbers are the numbers free of all prime squares.  We sieve
# them, compare their share of [1, N] with an Euler product, and look at the
# two monotone traces the library offers for infinite sets.

# %%
import math

import numpy as np

from bfree.arith import primes_up_to
from bfree.bset import PrimeSquaresBSet
from bfree.density import davenport_erdos_trace, interval_density, light_tails_trace
from bfree.sieve import sieve_eta

B = PrimeSquaresBSet()
block = sieve_eta(B, 1, 40)
print("eta on [1, 40]:", "".join("1" if v else "0" for v in block.bits))

# %% Counting on growing horizons
for N in (10**3, 10**5, 10**7):
    est = interval_density(B, "free", N)
    euler = math.prod(1 - 1 / p**2 for p in primes_up_to(math.isqrt(N)).tolist())
    print(f"N = {N:>9}: free share {est.value:.6f}   Euler product up to sqrt(N) {euler:.6f}")
print(f"limit 6/pi^2 = {6 / math.pi**2:.6f}")

# %% Exact densities of truncations increase towards the density of multiples
trace = davenport_erdos_trace(B, [10, 100, 1000, 10**4])
for K, v in trace.monotone_trace:
    print(f"d(M of B ∩ [1, {K:>5}]) = {float(v):.6f}")

# %% Tails: the share of [1, N] hit only through large elements shrinks
for K, share in light_tails_trace(B, [10, 100, 1000, 10**4], N=10**6):
    print(f"K = {K:>5}: share of multiples of some b > K is {share:.6f}")

# %% Where the free numbers sit modulo 36
free = sieve_eta(B, 1, 10**6).support()
counts = np.bincount(free % 36, minlength=36)
print("classes mod 36 that never contain a free number:", np.flatnonzero(counts == 0).tolist())
