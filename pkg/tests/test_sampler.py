import random
from fractions import Fraction as F

import pytest

from mcenter import generators
from mcenter.isometry import enumerate_isometries, orbits
from mcenter.sampler import (
    canonical_metric,
    canonical_orbit_sequence,
    embeddings,
    extend,
    initial_state,
    representations,
)
from helpers import random_spaces
from oracles import brute_embeddings, brute_extend


def test_embeddings_of_short_prefixes(grid3, triangle):
    assert embeddings(grid3, [[0]]) == [(0,), (1,), (2,)]
    rho = [[0, 1], [1, 0]]
    assert embeddings(grid3, rho) == brute_embeddings(grid3.dist, rho) == [(0, 2), (2, 0)]
    assert len(embeddings(triangle, rho)) == 6
    with pytest.raises(AssertionError):
        embeddings(grid3, [[0, 2], [2, 0]])


def test_grid3_steps(grid3):
    row, state = extend(grid3, initial_state(grid3))
    assert row == (1, 0)
    rows, _ = brute_extend(grid3.dist, [[0]])
    assert rows == {(1,)}
    row, state = extend(grid3, state)
    assert row == (F(1, 2), F(1, 2), 0)
    rows, _ = brute_extend(grid3.dist, [[0, 1], [1, 0]])
    assert rows == {(F(1, 2), F(1, 2))}


def test_grid5_third_step_both_mirrors_survive(grid5):
    rho = [[0, 1, F(1, 2)], [1, 0, F(1, 2)], [F(1, 2), F(1, 2), 0]]
    rows, survivors = brute_extend(grid5.dist, rho)
    assert rows == {(F(3, 4), F(1, 4), F(1, 4))}
    assert sorted(t + (x,) for t, x in survivors) == [(0, 4, 2, 3), (4, 0, 2, 1)]
    state = initial_state(grid5)
    for _ in range(3):
        row, state = extend(grid5, state)
    assert row == (F(3, 4), F(1, 4), F(1, 4), 0)
    assert state.tuples == ((0, 4, 2, 3), (4, 0, 2, 1))


def test_canonical_metric_examples(two_point, grid3, triangle):
    assert canonical_metric(two_point).rho == ((0, 1), (1, 0))
    order = canonical_metric(grid3)
    assert order.rho == ((0, 1, F(1, 2)), (1, 0, F(1, 2)), (F(1, 2), F(1, 2), 0))
    assert order.representation == (0, 2, 1)
    assert order.phi(7) == 1
    order = canonical_metric(triangle)
    assert all(order.rho[i][j] == (i != j) for i in range(3) for j in range(3))


def test_representation_counts(grid3, triangle, generic4):
    assert len(representations(generic4, canonical_metric(generic4))) == 1
    assert len(representations(grid3, canonical_metric(grid3))) == 2
    assert len(representations(triangle, canonical_metric(triangle))) == 6


def test_orbit_sequences(grid3):
    part = orbits(enumerate_isometries(grid3))
    seq = canonical_orbit_sequence(grid3)
    assert [part.orbits[k] for k in seq] == [(0, 2), (0, 2), (1,)]
    assert set(canonical_orbit_sequence(generators.cycle(5))) == {0}
    assert canonical_orbit_sequence(generators.equilateral(1)) == [0]


def test_carried_state_equals_full_reenumeration():
    for X in random_spaces(30, 40, n_min=2, n_max=6):
        state = initial_state(X)
        rho = [[F(0)]]
        while state.prefix_length < X.n:
            row, state = extend(X, state)
            rho = [r + [row[i]] for i, r in enumerate(rho)] + [list(row)]
            assert list(state.tuples) == brute_embeddings(X.dist, rho)


def test_invariance_bijection_and_greedy_radius():
    rng = random.Random(41)
    for X in random_spaces(30, 42, n_min=1, n_max=6):
        order = canonical_metric(X)
        assert sorted(order.representation) == list(range(X.n))
        assert len(representations(X, order)) == len(enumerate_isometries(X))
        for _ in range(3):
            perm = list(range(X.n))
            rng.shuffle(perm)
            assert canonical_metric(X.relabel(perm)).rho == order.rho
        rep = order.representation
        for m in range(1, X.n):
            placed = rep[:m]
            new = min(X.dist[y][rep[m]] for y in placed)
            best = max(
                min(X.dist[y][x] for y in t) for t in embeddings(X, [r[:m] for r in order.rho[:m]]) for x in range(X.n) if x not in t
            )
            assert new == best


def test_size_guard():
    with pytest.raises(ValueError):
        canonical_metric(generators.grid(11))
