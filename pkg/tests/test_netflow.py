import numpy as np
import pytest

from pcmflow.arclen import arc_length_matrix
from pcmflow.netflow import (
    ParametricNetwork,
    SpOutcome,
    bellman_ford_oracle,
    build_network,
    shortest_paths_or_cycle,
)
from pcmflow.pcm import consistent_pcm, random_pcm, validate_pcm

from conftest import Z_STAR_A3
from oracles import bellman_ford, plain_lengths


def assert_triangle(N, d, tol=1e-12):
    L = N.lengths
    slack = d[:, None] + L - d[None, :]
    np.fill_diagonal(slack, 0)
    assert slack.min() >= -tol
    assert d[0] == 0


def test_build_network(a3):
    N = build_network(a3, 0.3)
    assert N.n == 3
    assert N.z == 0.3
    np.testing.assert_array_equal(N.lengths, arc_length_matrix(a3, 0.3))
    assert np.count_nonzero(~np.eye(3, dtype=bool)) == 6
    with pytest.raises(ValueError):
        build_network(a3, -1)


def test_two_node_network():
    N = build_network(validate_pcm([[1, 4], [0.25, 1]]), 0.5)
    assert N.lengths[0, 1] == pytest.approx(-np.log(3.5))
    assert N.lengths[1, 0] == pytest.approx(np.log(4.5))


def test_consistent_network_at_zero():
    v = np.array([1.0, 2.0, 4.0, 0.5])
    A = consistent_pcm(v)
    N = build_network(A, 0.0)
    L = N.lengths
    assert np.allclose(L + L.T, 0, atol=1e-15)
    out = shortest_paths_or_cycle(N)
    assert out.feasible
    # v_j = a_j1
    np.testing.assert_allclose(np.exp(out.distances), A.entries[:, 0], rtol=1e-12)


def test_negative_cycle_a3(a3):
    out = shortest_paths_or_cycle(build_network(a3, 0.3))
    assert not out.feasible
    assert out.distances is None
    assert out.cycle == (0, 2, 1)
    assert build_network(a3, 0.3).cycle_length(out.cycle) == pytest.approx(-0.07464792897029645, rel=1e-12)
    assert bellman_ford_oracle(build_network(a3, 0.3)).cycle == (0, 2, 1)


def test_feasible_a3(a3):
    N = build_network(a3, 0.38)
    out = shortest_paths_or_cycle(N)
    assert out.feasible
    assert_triangle(N, out.distances)
    ref, _ = bellman_ford(plain_lengths(a3.entries, 0.38))
    np.testing.assert_allclose(out.distances, ref, atol=1e-12)


def test_just_above_optimum_is_feasible(a3):
    assert shortest_paths_or_cycle(build_network(a3, Z_STAR_A3 + 1e-9)).feasible
    assert not shortest_paths_or_cycle(build_network(a3, Z_STAR_A3 - 1e-9)).feasible


def test_differential_against_bellman_ford(rng):
    agree = 0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        A = random_pcm(n, int(rng.choice([3, 5, 9])), rng)
        z = float(rng.uniform(0, 3))
        N = build_network(A, z)
        eng = shortest_paths_or_cycle(N)
        orc = bellman_ford_oracle(N)
        assert eng.feasible == orc.feasible
        if eng.feasible:
            assert_triangle(N, eng.distances)
            np.testing.assert_allclose(eng.distances, orc.distances, atol=1e-9)
        else:
            assert N.cycle_length(eng.cycle) < -1e-12
            assert N.cycle_length(orc.cycle) < -1e-12
            assert len(set(eng.cycle)) == len(eng.cycle) >= 2
        agree += 1
    assert agree == 1000


def test_engine_is_deterministic(rng):
    A = random_pcm(10, 9, rng)
    N = build_network(A, 0.5)
    first = shortest_paths_or_cycle(N)
    for _ in range(3):
        again = shortest_paths_or_cycle(N)
        assert again.cycle == first.cycle
        assert again.pivots == first.pivots


def test_arbitrary_lengths():
    # a hand-made network where the cheapest route to node 2 goes through 3
    L = np.array(
        [
            [0.0, 5.0, 9.0, 1.0],
            [1.0, 0.0, 1.0, 9.0],
            [9.0, 9.0, 0.0, 9.0],
            [9.0, 1.0, 9.0, 0.0],
        ]
    )
    out = shortest_paths_or_cycle(ParametricNetwork(0.0, L))
    np.testing.assert_array_equal(out.distances, [0, 2, 3, 1])
    L[2, 0] = -3.5
    out = shortest_paths_or_cycle(ParametricNetwork(0.0, L))
    assert out.cycle == (0, 3, 1, 2)


def test_spoutcome_kind():
    assert SpOutcome(distances=np.zeros(2)).feasible
    assert not SpOutcome(cycle=(0, 1)).feasible
