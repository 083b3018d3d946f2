"""
Priorities from pairwise judgments
==================================

Three variants compared pairwise: the first is twice as good as the second
and six times as good as the third, the second twice as good as the third.
The judgments are not consistent (2 * 2 != 6), so no weight vector
reproduces them exactly. We compare the usual estimates with the vector
that minimizes the worst absolute deviation ``|a_ij - v_i / v_j|``.
"""

# %%
import numpy as np

import pcmflow as pf

A = pf.complete_upper_triangle({(1, 2): 2, (1, 3): 6, (2, 3): 2}, 3)
print(A.entries)
print("consistent:", pf.is_consistent(A))

# %%
# Geometric means of the rows and the principal eigenvector.
gm = pf.geometric_mean_vector(A)
ev, lam = pf.principal_eigenvector(A)
print("geometric mean  ", gm.v, " worst deviation", pf.gp_error(A, gm.v, np.inf))
print("eigenvector     ", ev.v, " worst deviation", pf.gp_error(A, ev.v, np.inf))
print("lambda_max = %.6f, Saaty index = %.6f" % (lam, pf.saaty_index(A, lam)))

# %%
# The minimax vector. Both outer loops land on (sqrt(33) - 5) / 2.
for method in ("bisection", "cycle-cancel"):
    rep = pf.solve(A, 1e-9, method)
    print(f"{method:13s} z = {rep.z_opt:.10f}  checks = {rep.subproblems_solved}  v = {rep.v.v}")
print("closed form     z = %.10f" % ((33**0.5 - 5) / 2))

# %%
# Every deviation, sorted. Three of them sit at the optimum level.
v = pf.solve(A).v.v
dev = pf.deviations(A, v)
for i, j in sorted(zip(*np.nonzero(dev)), key=lambda p: -dev[p]):
    print(f"({i + 1},{j + 1})  a = {A[i, j]:.4f}  v_i/v_j = {v[i] / v[j]:.4f}  dev = {dev[i, j]:.6f}")
