"""The partial-sum maximal operators: Fourier (Carleson) and Walsh flavors.

A signal with well-separated modes has a Carleson function close to the
worst partial sum; the Walsh analogue shows its martingale structure at
powers of two.
"""

import numpy as np

from mmfs import TorusGrid, carleson, hilbert_transform, modulated_sup, walsh_carleson
from mmfs.grid import GridFunction
from mmfs.operators import walsh_partial_sum

grid = TorusGrid(8)
n = grid.ncells
x = np.arange(n) / n

f = GridFunction(grid, np.cos(2 * np.pi * 3 * x) + 0.5 * np.cos(2 * np.pi * 40 * x))
cf = carleson(f)
print("two-mode signal: sup_x Cf = %.4f, sup_x |f| = %.4f" % (cf.values.max(), np.abs(f.values).max()))

hf = hilbert_transform(f)
print("Hilbert transform:  H(cos 3x part) contributes sin; max |Hf| =", f"{np.abs(hf.values).max():.4f}")

# the modulated supremum over a lacunary set is squeezed between |Hf| and Cf
lams = [1, 2, 4, 8, 16, 32, 64]
msup = modulated_sup(f, lams)
print("lacunary modulated sup within [max|Hf|, ~Cf]: max =", f"{msup.values.max():.4f}")

# Walsh partial sums at powers of two are dyadic block averages
g = GridFunction(grid, np.where(x < 0.5, 1.0, 0.0) + 0.1 * np.sin(2 * np.pi * 5 * x))
for k in (1, 2, 3):
    terms = 1 << k
    w = walsh_partial_sum(g, terms)
    blocks = np.unique(np.round(w.values, 12)).size
    print(f"W_{terms} takes {blocks} distinct values (= {terms} dyadic blocks)")

wf = walsh_carleson(g)
print("Walsh-Carleson max:", f"{wf.values.max():.4f}")
