"""Tour of the grid model and the maximal-operator zoo.

The torus is a uniform grid of 2**J cells; functions are their cell values,
and every average is an exact sum.  All maximal operators take the true
supremum over every wrapped interval.
"""

import numpy as np

from mmfs import (
    CellInterval,
    TorusGrid,
    Weight,
    dilate,
    hl_maximal,
    interval_average,
    iterated_maximal,
    orlicz_maximal,
    power_maximal,
)
from mmfs.grid import GridFunction
from mmfs.young import logpow

grid = TorusGrid(6)
print(f"grid: {grid.ncells} cells of width {grid.cell_width}")

# a one-cell spike of unit mass
spike = np.zeros(grid.ncells)
spike[0] = grid.ncells
w = Weight(grid, spike)

mw = hl_maximal(w)
print("\nM of a unit spike decays like 1/distance:")
for cell in (0, 1, 2, 4, 8, 16, 32):
    print(f"  cell {cell:3d}: Mw = {mw.values[cell]:9.3f}")

# iterating M picks up logarithmic factors
m2 = iterated_maximal(w, 2)
m3 = iterated_maximal(w, 3)
print("\ncell 16:  Mw = %.3f   M^2 w = %.3f   M^3 w = %.3f"
      % (mw.values[16], m2.values[16], m3.values[16]))

# the power and Orlicz variants dominate M pointwise
ms = power_maximal(w, 1.5)
ma = orlicz_maximal(w, logpow(1))
print("\npointwise domination on the whole grid:")
print("  min(M_s w / M w)   =", np.min(ms.values / mw.values))
print("  min(M_A w / M w)   =", np.min(ma.values / mw.values))

# interval averages are exact, including wrapped intervals
f = GridFunction(grid, np.arange(grid.ncells, dtype=float))
wrapped = CellInterval(grid.ncells - 2, 4)
print("\nwrapped-interval average:", interval_average(f, wrapped))
print("dilating it by 2:", dilate(wrapped, 2.0, grid))
