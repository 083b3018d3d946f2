"""
When the minimax vector is not unique
=====================================

For the four-variant matrix below the best achievable worst deviation is
0.5, but the fourth weight can move along a whole segment without changing
it. The binding constraints form one strong component {1, 2, 3}, plus the
isolated vertex 4, so the optimal set has dimension 1. Refinement freezes
the component, minimizes the remaining deviations and ends at a single
Pareto-optimal vector.
"""

# %%
import numpy as np

import pcmflow as pf

A = pf.validate_pcm(
    [
        [1, 3, 2 / 7, 11 / 10],
        [1 / 3, 1, 1 / 7, 9 / 10],
        [7 / 2, 7, 1, 5],
        [10 / 11, 10 / 9, 1 / 5, 1],
    ]
)
rep = pf.solve(A)
print("optimum level:", rep.z_opt)

# %%
for t in (0.625, 0.635, 29 / 45):
    v = np.array([1, 0.4, 3, t])
    print(f"v4 = {t:.5f}  worst deviation = {pf.gp_error(A, v, np.inf):.9f}")

# %%
D = pf.binding_digraph(A, [1, 0.4, 3, 0.625], 0.5)
print("binding arcs:", sorted((i + 1, j + 1) for i, j in D.arcs))
print("components:", [[k + 1 for k in c] for c in D.scc_partition])
print("dimension:", pf.solution_dimension(D), " unique:", pf.is_unique(D))

# %%
ref = pf.refine_to_unique(A)
print("levels:", ref.levels)
print("final v:", ref.final_v.v)

# %%
# No perturbation improves one deviation without worsening another.
audit = pf.verify_pareto(A, ref.final_v, trials=20_000, rng=0)
print("Pareto audit passed:", audit.passed, " largest pair gap:", audit.max_pair_gap)
