"""Least-worst-absolute-error priorities via parametric shortest paths.

Minimizing ``max |a_ij - v_i / v_j|`` is a search over the level ``z``: the
constraint system at ``z`` is feasible exactly when the network N(z) has no
negative cycle, and then the shortest distances from node 0 are a feasible
log-weight vector. Two outer loops are provided, plain bisection on ``z``
and successive cancellation of negative cycles.

Both loops are written against a *length family*, any object with an ``n``
attribute, ``lengths(z) -> (n, n) array`` and ``upper_bound()`` returning a
level known to be feasible. :class:`PCMLengths` is the family of a matrix;
the refinement module supplies families for reduced problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .arclen import arc_length, arc_length_matrix
from .netflow import NEG_TOL, ParametricNetwork, shortest_paths_or_cycle
from .pcm import WeightVector, entries_of, geometric_mean_vector, gp_error
from .rootfind import Bracket, anderson_bjorck

DEFAULT_EPSILON = 1e-6


class PCMLengths:
    """Arc-length family ``l_ij(z)`` of a pairwise comparison matrix."""

    def __init__(self, A):
        self.a = entries_of(A)
        self.n = self.a.shape[0]

    def lengths(self, z: float) -> np.ndarray:
        return arc_length_matrix(self.a, z)

    def cycle_length(self, cycle, z: float) -> float:
        src = np.asarray(cycle)
        dst = np.roll(src, -1)
        return float(np.sum(arc_length(self.a[src, dst], self.a[dst, src], z)))

    def start_vector(self) -> np.ndarray:
        return geometric_mean_vector(self.a).w

    def upper_bound(self) -> float:
        return gp_error(self.a, np.exp(self.start_vector()), np.inf)


def _cycle_length(family, cycle, z):
    if hasattr(family, "cycle_length"):
        return family.cycle_length(cycle, z)
    L = family.lengths(z)
    src = np.asarray(cycle)
    return float(L[src, np.roll(src, -1)].sum())


@dataclass(frozen=True)
class Feasibility:
    """Outcome of testing one level ``z``.

    ``w`` holds the log-weights (shortest distances) when feasible, ``cycle``
    the negative cycle otherwise.
    """

    z: float
    w: np.ndarray | None = None
    cycle: tuple | None = None

    @property
    def feasible(self) -> bool:
        return self.cycle is None

    @property
    def weights(self) -> WeightVector | None:
        return None if self.w is None else WeightVector.from_log(self.w)


def _check(family, z: float, engine=shortest_paths_or_cycle) -> Feasibility:
    net = ParametricNetwork(float(z), family.lengths(z))
    out = engine(net)
    if out.feasible:
        return Feasibility(float(z), w=out.distances - out.distances[0])
    return Feasibility(float(z), cycle=out.cycle)


def check_feasible(A, z: float, engine=shortest_paths_or_cycle) -> Feasibility:
    """Is there a weight vector with every deviation at most ``z``?"""
    if z < 0:
        raise ValueError("z must be nonnegative")
    family = A if hasattr(A, "lengths") else PCMLengths(A)
    return _check(family, z, engine)


@dataclass
class SolveReport:
    z_opt: float
    w: np.ndarray = field(repr=False)
    method: str
    iterations: int
    subproblems_solved: int
    epsilon: float
    cycle_trace: list = field(default_factory=list)
    z_trace: list = field(default_factory=list)
    z_initial: float = 0.0
    z_lower: float = 0.0

    @property
    def v(self) -> WeightVector:
        return WeightVector.from_log(self.w)


def solve_bisection(A, epsilon: float = DEFAULT_EPSILON, engine=shortest_paths_or_cycle) -> SolveReport:
    """Halve ``[0, G_inf(geometric means)]`` until narrower than ``epsilon``.

    The reported level is the upper, feasible end of the final interval and
    the weights are the last feasible shortest-path solution.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    family = A if hasattr(A, "lengths") else PCMLengths(A)
    w = family.start_vector()
    z_max = family.upper_bound()
    z_min = 0.0
    z_initial = z_max
    iterations = 0
    cycles = []
    trace = [z_max]
    while z_max - z_min > epsilon:
        z = 0.5 * (z_max + z_min)
        res = _check(family, z, engine)
        iterations += 1
        if res.feasible:
            z_max, w = z, res.w
        else:
            z_min = z
            cycles.append(res.cycle)
        trace.append(z)
    return SolveReport(
        z_opt=z_max,
        w=w,
        method="bisection",
        iterations=iterations,
        # the starting level is certified by the geometric-mean vector
        subproblems_solved=iterations + 1,
        epsilon=epsilon,
        cycle_trace=cycles,
        z_trace=trace,
        z_initial=z_initial,
        z_lower=z_min,
    )


def _bracket_above(h, z_lo, h_lo, z_hi):
    """Sign bracket for increasing ``h``, pushing ``z_hi`` out if roundoff bites."""
    h_hi = h(z_hi)
    step = max(z_hi - z_lo, 1e-12)
    while h_hi < 0:
        z_hi += step
        step *= 2
        h_hi = h(z_hi)
    return Bracket(z_lo, z_hi, h_lo, h_hi)


def _cancel_cycles(family, z, z_ub, epsilon, engine):
    """Cycle-cancel loop from level ``z``; returns (z, w, cycles, trace, checks)."""
    cycles = []
    trace = [z]
    checks = 0
    while True:
        res = _check(family, z, engine)
        checks += 1
        if res.feasible:
            return z, res.w, cycles, trace, checks
        cycle = res.cycle
        cycles.append(cycle)

        def h(t, cycle=cycle):
            return _cycle_length(family, cycle, t)

        h_lo = h(z)
        if h_lo >= 0:
            # the engine saw a cycle below -NEG_TOL; only roundoff lands here
            h_lo = -NEG_TOL
        bracket = _bracket_above(h, z, h_lo, max(z_ub, z + epsilon))
        z = anderson_bjorck(h, bracket, epsilon)
        trace.append(z)


def solve_cycle_cancel(A, epsilon: float = DEFAULT_EPSILON, engine=shortest_paths_or_cycle) -> SolveReport:
    """Raise ``z`` to the root of each negative cycle until N(z) is feasible.

    Every root is located with the Anderson-Bjorck method on
    ``[z, upper_bound]``; the returned point has nonnegative cycle length so
    a canceled cycle never comes back.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    family = A if hasattr(A, "lengths") else PCMLengths(A)
    z_ub = family.upper_bound()
    z, w, cycles, trace, checks = _cancel_cycles(family, 0.0, z_ub, epsilon, engine)
    return SolveReport(
        z_opt=z,
        w=w,
        method="cycle-cancel",
        iterations=len(cycles),
        subproblems_solved=checks,
        epsilon=epsilon,
        cycle_trace=cycles,
        z_trace=trace,
        z_initial=z_ub,
        z_lower=trace[-2] if len(trace) > 1 else 0.0,
    )


def polish(A, report: SolveReport, rtol: float = 1e-12, engine=shortest_paths_or_cycle) -> SolveReport:
    """Tighten a solved level to near machine precision.

    Cancellation restarts at the last level known to be infeasible, with the
    reported level as the upper bracket. Binding constraints of the result
    hold to roundoff, not merely to ``epsilon``.
    """
    if report.z_opt <= 0:
        return report
    family = A if hasattr(A, "lengths") else PCMLengths(A)
    tol = rtol * max(1.0, report.z_opt)
    z, w, cycles, trace, checks = _cancel_cycles(family, report.z_lower, report.z_opt, tol, engine)
    return replace(
        report,
        z_opt=z,
        w=w,
        subproblems_solved=report.subproblems_solved + checks,
        z_lower=trace[-2] if len(trace) > 1 else report.z_lower,
    )


METHODS = {"bisection": solve_bisection, "cycle-cancel": solve_cycle_cancel}


def solve(A, epsilon: float = DEFAULT_EPSILON, method: str = "cycle-cancel", **kwargs) -> SolveReport:
    try:
        solver = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return solver(A, epsilon, **kwargs)


def bisection_iteration_bound(z_initial: float, epsilon: float) -> int:
    if z_initial <= 0:
        return 0
    return max(0, math.ceil(math.log2(z_initial / epsilon)))
