"""
Timing on random matrices
=========================

Random matrices draw each upper entry from {1/a_max, ..., 1/2, 1, 2, ...,
a_max}. For every (n, a_max) cell we time both outer loops, alone and as
the first stage of refinement, and count the minimax problems the
refinement needs. The command-line ``pcmflow bench`` runs the same thing.
"""

# %%
from pcmflow import bench

summaries, records = bench.run_bench([10, 20], [3, 5, 10], trials=20, seed=0)
print(bench.format_table(summaries))

# %%
for s in summaries:
    ratio = s.time_cancel.avg / s.time_bisect.avg
    print(f"n = {s.n:2d}  a_max = {s.a_max:2d}  cycle cancel / bisection time = {ratio:.2f}  refinement problems = {s.lw.avg:.2f}")
