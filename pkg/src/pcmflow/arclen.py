"""Parametric arc lengths of the log-space constraint network.

For a deviation level ``z >= 0`` the ratio bound
``v_i / v_j >= max(a_ij - z, 1 / (a_ji + z))`` becomes the difference
constraint ``w_j - w_i <= l_ij(z)`` with

    l_ij(z) = -ln max(a_ij - z, 1 / (a_ji + z)).

Every ``l_ij`` is continuous and strictly increasing on ``[0, inf)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pcm import entries_of


def arc_multiplier(a_ij, a_ji, z):
    """``L_ij(z) = max(a_ij - z, 1 / (a_ji + z))``; equals ``a_ij`` at ``z = 0``."""
    return np.maximum(np.subtract(a_ij, z), 1.0 / np.add(a_ji, z))


def arc_length(a_ij, a_ji, z):
    # max-then-log needs no branch on the breakpoint a_ij - a_ji
    return -np.log(arc_multiplier(a_ij, a_ji, z))


def inflexion_point(a_ij, a_ji) -> float | None:
    """Breakpoint between the convex and concave pieces, or None if ``a_ij <= 1``."""
    if a_ij > 1:
        return float(a_ij - a_ji)
    return None


def arc_length_matrix(A, z: float) -> np.ndarray:
    """All ``l_ij(z)`` at once; the diagonal is zero."""
    a = entries_of(A)
    lengths = arc_length(a, a.T, z)
    np.fill_diagonal(lengths, 0.0)
    return lengths


@dataclass(frozen=True)
class ArcLengthFn:
    a_ij: float
    a_ji: float

    def __call__(self, z):
        return arc_length(self.a_ij, self.a_ji, z)

    def multiplier(self, z):
        return arc_multiplier(self.a_ij, self.a_ji, z)

    def inflexion_point(self):
        return inflexion_point(self.a_ij, self.a_ji)


def canonical_cycle(cycle) -> tuple[int, ...]:
    """Rotate a vertex cycle so that its smallest vertex comes first."""
    cycle = tuple(int(c) for c in cycle)
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


def cycle_arcs(cycle):
    return list(zip(cycle, cycle[1:] + cycle[:1]))


def cycle_length(A, cycle, z) -> float:
    """Sum of ``l_ij(z)`` over the arcs of a vertex cycle (0-based vertices)."""
    a = entries_of(A)
    cycle = tuple(cycle)
    src = np.array(cycle)
    dst = np.roll(src, -1)
    return float(np.sum(arc_length(a[src, dst], a[dst, src], z)))


@dataclass(frozen=True)
class CycleLengthFn:
    """``z -> l_C(z)`` for a fixed simple cycle of the complete digraph."""

    A: object
    cycle: tuple

    def __post_init__(self):
        cyc = tuple(int(c) for c in self.cycle)
        if len(cyc) < 2 or len(set(cyc)) != len(cyc):
            raise ValueError(f"not a simple cycle: {self.cycle}")
        object.__setattr__(self, "cycle", cyc)

    def __call__(self, z) -> float:
        return cycle_length(self.A, self.cycle, z)

    @property
    def key(self):
        return canonical_cycle(self.cycle)
