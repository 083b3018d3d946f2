"""Single-source shortest paths with negative arc lengths on a complete digraph.

The production engine is the shortest-path specialization of the network
simplex method: keep a spanning tree rooted at node 0 with node potentials
equal to tree-path lengths, and pivot in any arc with negative reduced cost
``d_i + l_ij - d_j``. If the entering arc closes a cycle with the tree path
from ``j`` down to ``i``, that cycle has length equal to the reduced cost and
is negative. Otherwise ``j`` is re-hung under ``i`` and its whole subtree
shifts by the reduced cost. Each pivot strictly lowers the sum of
potentials, so no tree repeats and the method terminates.

:func:`bellman_ford_oracle` solves the same problem by label correcting and
is kept as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arclen import arc_length_matrix, canonical_cycle

NEG_TOL = 1e-12


@dataclass(frozen=True)
class ParametricNetwork:
    """The complete digraph N(z) with its arc lengths evaluated at ``z``."""

    z: float
    lengths: np.ndarray

    @property
    def n(self) -> int:
        return self.lengths.shape[0]

    def cycle_length(self, cycle) -> float:
        src = np.asarray(cycle)
        return float(self.lengths[src, np.roll(src, -1)].sum())


def build_network(A, z: float) -> ParametricNetwork:
    if z < 0:
        raise ValueError("z must be nonnegative")
    return ParametricNetwork(float(z), arc_length_matrix(A, z))


@dataclass(frozen=True)
class SpOutcome:
    """Either shortest distances from node 0 or a negative cycle, never both."""

    distances: np.ndarray | None = None
    cycle: tuple | None = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.cycle is None


def shortest_paths_or_cycle(N: ParametricNetwork, tol: float = NEG_TOL) -> SpOutcome:
    """Network simplex for shortest paths from node 0.

    Starts from the star tree of arcs ``(0, j)`` and always enters the first
    arc, in row-major order, whose reduced cost is below ``-tol``.
    """
    L = N.lengths
    n = N.n
    parent = np.zeros(n, dtype=np.intp)
    parent[0] = -1
    d = L[0].copy()
    d[0] = 0.0
    off_diag = ~np.eye(n, dtype=bool)
    pivots = 0
    while True:
        reduced = d[:, None] + L - d[None, :]
        violating = (reduced < -tol) & off_diag
        flat = int(np.argmax(violating))
        if not violating.flat[flat]:
            return SpOutcome(distances=d, pivots=pivots)
        i, j = divmod(flat, n)
        pivots += 1

        # is j an ancestor of i?  then the tree path j ~> i plus (i, j) is a cycle
        path = [i]
        u = i
        while u != j and parent[u] >= 0:
            u = int(parent[u])
            path.append(u)
        if u == j:
            cycle = path[::-1]
            return SpOutcome(cycle=canonical_cycle(cycle), pivots=pivots)

        delta = reduced[i, j]
        subtree = _subtree_mask(parent, j)
        d[subtree] += delta
        parent[j] = i


def _subtree_mask(parent: np.ndarray, root: int) -> np.ndarray:
    n = parent.shape[0]
    state = np.zeros(n, dtype=np.int8)  # 0 unknown, 1 in, 2 out
    state[root] = 1
    for v in range(n):
        chain = []
        u = v
        while state[u] == 0:
            chain.append(u)
            p = parent[u]
            if p < 0:
                break
            u = p
        verdict = state[u] if state[u] != 0 else 2
        for c in chain:
            state[c] = verdict
    return state == 1


def bellman_ford_oracle(N: ParametricNetwork, tol: float = NEG_TOL) -> SpOutcome:
    """Label-correcting shortest paths from node 0 with cycle extraction."""
    L = N.lengths
    n = N.n
    dist = np.full(n, np.inf)
    dist[0] = 0.0
    pred = np.full(n, -1, dtype=np.intp)
    last = -1
    for _ in range(n):
        last = -1
        for u in range(n):
            if not np.isfinite(dist[u]):
                continue
            for v in range(n):
                if u == v:
                    continue
                cand = dist[u] + L[u, v]
                if cand < dist[v] - tol:
                    dist[v] = cand
                    pred[v] = u
                    last = v
        if last == -1:
            return SpOutcome(distances=dist)

    # still relaxing after n passes: walk back n steps to land on the cycle
    x = last
    for _ in range(n):
        x = int(pred[x])
    cycle = [x]
    u = int(pred[x])
    while u != x:
        cycle.append(u)
        u = int(pred[u])
    cycle.reverse()
    return SpOutcome(cycle=canonical_cycle(cycle))
