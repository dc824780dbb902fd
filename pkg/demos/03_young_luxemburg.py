"""Young functions: Luxemburg norms, conjugates, and integral-condition verdicts.

The log-power scale t log^k(1+t) sits strictly between the powers; which k
is admissible for a given exponent p is decided by a tail integral, and the
verdict machinery reproduces the textbook answers.
"""

import numpy as np

from mmfs import TorusGrid, complementary, condition_1_10_check, luxemburg_norm
from mmfs.grid import CellInterval, GridFunction
from mmfs.young import holder_defect, logpow, power

grid = TorusGrid(5)
full = CellInterval(0, grid.ncells)
rng = np.random.default_rng(1)
f = GridFunction(grid, np.abs(rng.standard_normal(grid.ncells)) + 0.1)

print("Luxemburg norms of one sample function:")
for A in (power(1.0), logpow(1), power(1.5), power(2.0), power(3.0)):
    print(f"  {A.name:10s}: {luxemburg_norm(A, f, full):.6f}")

B = power(3.0)
Bbar = complementary(B)
ts = np.logspace(-2, 2, 5)
print(f"\nconjugate of {B.name} sampled against the sandwich t <= B^-1 Bbar^-1 <= 2t:")
for t in ts:
    prod = float(np.atleast_1d(B.inverse(t))[0] * np.atleast_1d(Bbar.inverse(t))[0])
    print(f"  t = {t:8.2f}:  product/t = {prod / t:.6f}")

g = GridFunction(grid, np.abs(rng.standard_normal(grid.ncells)) + 0.1)
print(f"\ngeneralized-Hoelder defect (<= 1): {holder_defect(f, g, full, B):.6f}")

print("\ntail-integral verdicts at p = 2:")
for A in (power(1.0), power(2.0), logpow(1), logpow(2)):
    v = condition_1_10_check(A, 2.0)
    print(f"  {A.name:10s}: {v.verdict:12s} ({v.tail_evidence})")
