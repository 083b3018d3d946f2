"""
Feasibility of a level and negative cycles
==========================================

Asking for every deviation to be at most ``z`` is a system of difference
constraints on ``w = log v``. It is solvable exactly when the network with
arc lengths ``l_ij(z)`` has no negative cycle. Below the optimum the
shortest-path engine returns such a cycle; above it, the distances are a
valid weight vector.
"""

# %%
import numpy as np

import pcmflow as pf

A = pf.complete_upper_triangle({(1, 2): 2, (1, 3): 6, (2, 3): 2}, 3)

for z in (0.2, 0.3, 0.37, 0.38, 0.5):
    res = pf.check_feasible(A, z)
    if res.feasible:
        print(f"z = {z:.2f}  feasible, v = {np.round(res.weights.v, 6)}, worst deviation {pf.gp_error(A, res.weights.v, np.inf):.6f}")
    else:
        cyc = res.cycle
        print(f"z = {z:.2f}  negative cycle {[k + 1 for k in cyc]} of length {pf.cycle_length(A, cyc, z):+.6f}")

# %%
# The cycle length is strictly increasing in z; its root is the optimum.
f = pf.CycleLengthFn(A, (0, 2, 1))
z_star = pf.anderson_bjorck(f, (0.0, 1.0), 1e-12)
print("root of the cycle length:", z_star)

# %%
# Arc lengths change shape at a_ij - a_ji: convex before, concave after.
a = 6.0
for z in np.linspace(0, 8, 9):
    print(f"z = {z:.0f}  l(z) = {pf.arc_length(a, 1 / a, z):+.5f}")
print("inflexion point:", pf.inflexion_point(a, 1 / a))
