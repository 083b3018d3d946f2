"""Structure of the optimal set and selection of its Pareto-optimal point.

At an optimum ``(w, z)`` the binding constraints ``w_j - w_i = l_ij(z)``
form a digraph whose strongly connected components fix the ratios inside
each component. The optimal set has dimension ``#components - 1``; it is a
single point exactly when the digraph is strongly connected.

:func:`refine_to_unique` freezes every component at its current ratios,
collapses it to one node and minimizes the worst remaining deviation on the
reduced network, repeating until the binding digraph is strongly connected.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .lwae import DEFAULT_EPSILON, PCMLengths, SolveReport, polish, solve
from .pcm import WeightVector, _as_generator, deviations, entries_of


class NotFeasible(ValueError):
    pass


class NoCycleCore(ValueError):
    pass


class AlreadyConnected(ValueError):
    pass


class OffsetMismatch(RuntimeError):
    pass


def default_tau(epsilon: float) -> float:
    return max(1e-7, 10.0 * epsilon)


def _family(A):
    return A if hasattr(A, "lengths") else PCMLengths(A)


def _log_weights(v) -> np.ndarray:
    if isinstance(v, WeightVector):
        return v.w
    return np.log(np.asarray(v, dtype=float))


@dataclass(frozen=True)
class BindingDigraph:
    """Binding arcs of a feasible ``(w, z)`` and their strong components.

    ``labels[k]`` is the component of vertex ``k``; components are numbered
    in order of their smallest vertex.
    """

    z: float
    w: np.ndarray = field(repr=False)
    lengths: np.ndarray = field(repr=False)
    adjacency: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def arcs(self) -> set:
        return {(int(i), int(j)) for i, j in np.argwhere(self.adjacency)}

    @property
    def scc_partition(self) -> list:
        return [tuple(int(k) for k in np.flatnonzero(self.labels == c)) for c in range(self.labels.max() + 1)]

    @property
    def cycle_core_arcs(self) -> set:
        return {(i, j) for i, j in self.arcs if self.labels[i] == self.labels[j]}

    @property
    def n_components(self) -> int:
        return int(self.labels.max()) + 1

    @property
    def strongly_connected(self) -> bool:
        return self.n_components == 1

    def has_two_cycle(self) -> bool:
        adj = self.adjacency
        return bool(np.any(adj & adj.T))


def _strong_components(adj: np.ndarray) -> np.ndarray:
    _, raw = connected_components(csr_matrix(adj), directed=True, connection="strong")
    # renumber by first appearance so component 0 contains vertex 0
    order = {}
    for lab in raw:
        order.setdefault(lab, len(order))
    return np.array([order[lab] for lab in raw])


def binding_from_lengths(lengths: np.ndarray, w, z: float, tau_bind: float) -> BindingDigraph:
    w = np.asarray(w, dtype=float)
    slack = lengths - (w[None, :] - w[:, None])
    np.fill_diagonal(slack, np.inf)
    if np.any(slack < -tau_bind):
        i, j = np.unravel_index(np.argmin(slack), slack.shape)
        raise NotFeasible(
            f"constraint ({i + 1},{j + 1}) violated by {-slack[i, j]:.3g} at z = {z}"
        )
    adj = slack <= tau_bind
    return BindingDigraph(float(z), w, lengths, adj, _strong_components(adj))


def binding_digraph(A, v, z: float, tau_bind: float = 1e-7) -> BindingDigraph:
    """Binding digraph D(v, z) of the constraint network of ``A``.

    ``A`` may also be any length family (see :mod:`pcmflow.lwae`), which is
    how reduced problems are analyzed.
    """
    return binding_from_lengths(_family(A).lengths(z), _log_weights(v), z, tau_bind)


def _require_cycle(D: BindingDigraph):
    if D.z > 0 and not D.cycle_core_arcs:
        raise NoCycleCore(f"no directed cycle among binding arcs at z = {D.z}; not optimal")


def solution_dimension(D: BindingDigraph) -> int:
    _require_cycle(D)
    return D.n_components - 1


def is_unique(D: BindingDigraph) -> bool:
    _require_cycle(D)
    return D.strongly_connected


def component_offsets(D: BindingDigraph, component, reference_vertex: int) -> dict:
    """Log-ratios ``c_k = w_k - w_ref`` inside one strong component.

    The same offsets are rebuilt by walking binding arcs out of the reference
    vertex and summing their lengths; disagreement beyond the binding
    tolerance along the walk raises :class:`OffsetMismatch`.
    """
    members = set(int(k) for k in component)
    ref = int(reference_vertex)
    if ref not in members:
        raise ValueError("reference vertex must belong to the component")
    w = D.w
    offsets = {k: float(w[k] - w[ref]) for k in sorted(members)}

    walked = {ref: 0.0}
    hops = {ref: 0}
    queue = deque([ref])
    while queue:
        p = queue.popleft()
        for q in np.flatnonzero(D.adjacency[p]):
            q = int(q)
            if q in members and q not in walked:
                walked[q] = walked[p] + D.lengths[p, q]
                hops[q] = hops[p] + 1
                queue.append(q)
    if set(walked) != members:
        raise OffsetMismatch("component is not reachable from its reference vertex along binding arcs")
    bound = _binding_slack_bound(D)
    for k, c in walked.items():
        if abs(c - offsets[k]) > 2 * bound * max(hops[k], 1):
            raise OffsetMismatch(f"offset of vertex {k + 1}: walk {c:.12g} vs solution {offsets[k]:.12g}")
    return offsets


def _binding_slack_bound(D: BindingDigraph) -> float:
    slack = D.lengths - (D.w[None, :] - D.w[:, None])
    bound = np.abs(slack[D.adjacency]).max(initial=0.0)
    return max(bound, 1e-12)


@dataclass
class ComponentRegistry:
    """Partition of the original vertices into frozen groups.

    Each group is a sorted tuple whose first vertex is its reference;
    ``offsets[k]`` is ``w_k - w_ref`` for the group holding ``k``.
    """

    groups: list
    offsets: np.ndarray

    @classmethod
    def singletons(cls, n: int) -> ComponentRegistry:
        return cls([(k,) for k in range(n)], np.zeros(n))

    def group_index(self) -> np.ndarray:
        idx = np.empty(self.offsets.shape[0], dtype=np.intp)
        for g, members in enumerate(self.groups):
            idx[list(members)] = g
        return idx

    def expand(self, w_reduced) -> np.ndarray:
        """Log-weights of the original vertices from one value per group."""
        w_full = self.offsets + np.asarray(w_reduced)[self.group_index()]
        return w_full - w_full[0]


class ReducedProblem:
    """Length family of the network whose nodes are frozen groups.

    The length of arc ``(I, J)`` is ``min l_pq(z) + c_p - c_q`` over ``p`` in
    group ``I`` and ``q`` in group ``J``; constraints inside a group are gone.
    """

    def __init__(self, A, registry: ComponentRegistry, frozen_level: float, w_start=None):
        self.a = entries_of(A)
        self.registry = registry
        self.frozen_level = float(frozen_level)
        self.n = len(registry.groups)
        self._base = PCMLengths(self.a)
        self._order = np.concatenate([np.array(g, dtype=np.intp) for g in registry.groups])
        sizes = [len(g) for g in registry.groups]
        self._starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.intp)
        self._w_start = None if w_start is None else np.asarray(w_start, dtype=float)

    def lengths(self, z: float) -> np.ndarray:
        c = self.registry.offsets
        full = self._base.lengths(z) + c[:, None] - c[None, :]
        full = full[np.ix_(self._order, self._order)]
        red = np.minimum.reduceat(full, self._starts, axis=0)
        red = np.minimum.reduceat(red, self._starts, axis=1)
        np.fill_diagonal(red, 0.0)
        return red

    def upper_bound(self) -> float:
        return self.frozen_level

    def start_vector(self) -> np.ndarray:
        if self._w_start is None:
            raise ValueError("reduced problem was built without a starting vector")
        return self._w_start


def reduce_network(problem, D: BindingDigraph, registry: ComponentRegistry):
    """Merge every strong component of ``D`` into one node.

    ``D`` is taken over the nodes of ``problem`` (one per registry group).
    Returns the new registry and the reduced length family.
    """
    if D.strongly_connected:
        raise AlreadyConnected("binding digraph is strongly connected; nothing to reduce")
    if D.n != len(registry.groups):
        raise ValueError("digraph and registry disagree on the node count")
    offsets = registry.offsets.copy()
    groups = []
    w_start = []
    for comp in D.scc_partition:
        ref = comp[0]
        rel = component_offsets(D, comp, ref)
        members = []
        for node in comp:
            for k in registry.groups[node]:
                offsets[k] += rel[node]
                members.append(k)
        groups.append(tuple(sorted(members)))
        w_start.append(D.w[ref])
    new_registry = ComponentRegistry(groups, offsets)
    w_start = np.array(w_start) - w_start[0]
    return new_registry, ReducedProblem(entries_of(getattr(problem, "a", problem)), new_registry, D.z, w_start)


@dataclass
class RefinementReport:
    levels: list
    final_v: WeightVector
    dimension_at_first_level: int
    unique_at_first_level: bool
    iterations: int
    first_solve: SolveReport = field(repr=False)
    digraphs: list = field(default_factory=list, repr=False)
    registries: list = field(default_factory=list, repr=False)
    subproblems_solved: int = 0


def refine_to_unique(
    A,
    epsilon: float = DEFAULT_EPSILON,
    tau_bind: float | None = None,
    method: str = "cycle-cancel",
) -> RefinementReport:
    """Lexicographically refine an LWAE optimum down to a unique point.

    The first level is solved with ``method``; reduced problems always use
    cycle cancellation.
    """
    a = entries_of(A)
    n = a.shape[0]
    tau = default_tau(epsilon) if tau_bind is None else tau_bind
    problem = PCMLengths(a)
    registry = ComponentRegistry.singletons(n)

    # binding arcs are detected at tau; the level must be far tighter than that
    first = polish(problem, solve(problem, epsilon, method))
    rep = first
    levels = [first.z_opt]
    digraphs = []
    registries = [registry]
    subproblems = first.subproblems_solved
    dimension = None
    unique = None
    while True:
        D = binding_from_lengths(problem.lengths(rep.z_opt), rep.w, rep.z_opt, tau)
        digraphs.append(D)
        if dimension is None:
            dimension = solution_dimension(D)
            unique = D.strongly_connected
        if D.strongly_connected or problem.n == 1:
            break
        if D.n_components == D.n:
            raise NoCycleCore(f"binding digraph at z = {rep.z_opt} has no directed cycle")
        registry, problem = reduce_network(problem, D, registry)
        registries.append(registry)
        rep = polish(problem, solve(problem, epsilon, "cycle-cancel"))
        subproblems += rep.subproblems_solved
        levels.append(rep.z_opt)

    w_final = registry.expand(rep.w)
    return RefinementReport(
        levels=levels,
        final_v=WeightVector.from_log(w_final),
        dimension_at_first_level=dimension,
        unique_at_first_level=unique,
        iterations=len(levels),
        first_solve=first,
        digraphs=digraphs,
        registries=registries,
        subproblems_solved=subproblems,
    )


@dataclass
class ParetoAudit:
    """Result of :func:`verify_pareto`.

    ``dominator`` is a weight vector that weakly improves every deviation and
    strictly improves one, if the random search found any. ``pair_gaps``
    maps each ordered pair to how far its deviation could still drop with
    all other deviations held at their current values.
    """

    trials: int
    dominator: np.ndarray | None = None
    improvement: float = 0.0
    pair_gaps: dict | None = None
    gap_tol: float = 1e-9

    @property
    def max_pair_gap(self) -> float:
        if not self.pair_gaps:
            return 0.0
        return max(self.pair_gaps.values())

    @property
    def passed(self) -> bool:
        return self.dominator is None and self.max_pair_gap <= self.gap_tol


def _dominates(dev_u, dev_v, strict_tol):
    n = dev_v.shape[-1]
    flat_u = dev_u.reshape(dev_u.shape[0], n * n)
    flat_v = dev_v.reshape(n * n)
    weak = np.all(flat_u <= flat_v + 1e-14, axis=1)
    gain = np.max(flat_v - flat_u, axis=1)
    return weak & (gain > strict_tol), gain


def _batch_deviations(a, W):
    ratios = np.exp(W[:, :, None] - W[:, None, :])
    return np.abs(a[None] - ratios)


def pair_reduction_gaps(A, v) -> dict:
    """For each ordered pair, the drop in its deviation still available
    when every other deviation may not grow.

    All other deviations become difference constraints on the log-weights,
    so the reachable range of ``w_k - w_l`` comes from shortest paths.
    """
    a = entries_of(A)
    w = _log_weights(v)
    n = a.shape[0]
    eps = deviations(a, np.exp(w))
    gaps = {}
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            G = np.full((n, n), np.inf)
            np.fill_diagonal(G, 0.0)
            for i in range(n):
                for j in range(n):
                    if i == j or (i, j) == (k, l):
                        continue
                    # a_ij - e_ij <= exp(w_i - w_j) <= a_ij + e_ij
                    G[j, i] = min(G[j, i], np.log(a[i, j] + eps[i, j]))
                    lower = a[i, j] - eps[i, j]
                    if lower > 0:
                        G[i, j] = min(G[i, j], -np.log(lower))
            for m in range(n):
                G = np.minimum(G, G[:, m, None] + G[None, m, :])
            t_hi = G[l, k]
            t_lo = -G[k, l]
            t_best = np.clip(np.log(a[k, l]), t_lo, t_hi)
            best = abs(a[k, l] - np.exp(t_best))
            gaps[(k, l)] = float(max(0.0, eps[k, l] - best))
    return gaps


def verify_pareto(A, v, trials: int = 10_000, rng=None, strict_tol: float = 1e-9, pair_check: bool | None = None) -> ParetoAudit:
    """Search for a weight vector that Pareto-dominates ``v``.

    Random log-space perturbations at scales 1e-1 down to 1e-4 and
    single-coordinate line searches are tried. For ``n <= 4`` (or when
    ``pair_check`` is set) the per-pair criterion is evaluated as well.
    Finding a dominator is reported, not raised.
    """
    a = entries_of(A)
    n = a.shape[0]
    gen = _as_generator(rng)
    w = _log_weights(v)
    w = w - w[0]
    dev_v = deviations(a, np.exp(w))
    audit = ParetoAudit(trials=trials, gap_tol=strict_tol)

    scales = np.array([1e-1, 1e-2, 1e-3, 1e-4])
    batch = 2048
    done = 0
    while done < trials and audit.dominator is None:
        m = min(batch, trials - done)
        sigma = scales[gen.integers(0, scales.size, size=m)]
        W = w + sigma[:, None] * gen.standard_normal((m, n))
        W[:, 0] = 0.0
        hits, gain = _dominates(_batch_deviations(a, W), dev_v, strict_tol)
        if hits.any():
            best = int(np.argmax(np.where(hits, gain, -np.inf)))
            audit.dominator = np.exp(W[best])
            audit.improvement = float(gain[best])
        done += m

    if audit.dominator is None and n > 1:
        steps = np.concatenate([np.logspace(-1, -8, 15), -np.logspace(-1, -8, 15)])
        for k in range(1, n):
            W = np.repeat(w[None, :], steps.size, axis=0)
            W[:, k] += steps
            hits, gain = _dominates(_batch_deviations(a, W), dev_v, strict_tol)
            if hits.any():
                best = int(np.argmax(np.where(hits, gain, -np.inf)))
                audit.dominator = np.exp(W[best])
                audit.improvement = float(gain[best])
                break

    if pair_check or (pair_check is None and n <= 4):
        audit.pair_gaps = pair_reduction_gaps(a, np.exp(w))
    return audit
