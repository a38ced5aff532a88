"""Exit criteria.  Each test records one PASS/FAIL line, printed at the end of the run."""

import json
import random
import re
import time
from fractions import Fraction as F

import pytest

from mcenter import generators
from mcenter.central import (
    central_measure,
    chebyshev_step,
    fix_polytope,
    fix_tower_polytope,
    initial_level,
    lambda_measure,
    verify_theorem_iso,
    w_diameter_of,
)
from mcenter.cli import main
from mcenter.isometry import enumerate_isometries, orbits
from mcenter.lp import enumerate_vertices
from mcenter.metric import diameter, validate, weak_convexity_check
from mcenter.quotient import quotient, quotient_dual_distance, quotient_tower
from mcenter.sampler import canonical_metric, extend, initial_state, representations
from mcenter.transport import Measure, kantorovich, lipschitz_polytope, lipschitz_vertices, pushforward
from helpers import sample_space
from oracles import (
    brute_extend,
    brute_isometries,
    brute_quotient,
    extreme_couplings_2pt,
    first_step_grid_search,
    simplex_grid,
)

RESULTS: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    number = request.node.get_closest_marker("criterion").args[0]
    state = {"ok": False}
    yield state
    RESULTS[number] = "PASS" if state["ok"] else "FAIL"


def haar_spaces():
    spaces = {f"cycle({n})": generators.cycle(n) for n in (3, 4, 5, 6)}
    spaces["Z_5"] = generators.cyclic_group(5)
    spaces["S_3"] = generators.symmetric_group(3)
    return spaces


@pytest.mark.criterion(1)
def test_c1_haar_transitive(criterion):
    start = time.perf_counter()
    for name, X in haar_spaces().items():
        assert len(orbits(enumerate_isometries(X))) == 1, name
        res = central_measure(X)
        uniform = Measure.uniform(X)
        assert res.exact, name
        assert res.measure == uniform, name
        assert lambda_measure(X) == uniform, name
    assert time.perf_counter() - start < 60
    criterion["ok"] = True


@pytest.mark.criterion(2)
def test_c2_discrete_lebesgue(criterion):
    start = time.perf_counter()
    for n in (2, 3, 5, 9):
        X = generators.grid(n)
        assert quotient_tower(X).quasi_nilpotent
        cells = [F(1, n - 1)] * n
        cells[0] = cells[-1] = F(1, 2 * n - 2)
        assert lambda_measure(X).weights == tuple(cells)
    assert time.perf_counter() - start < 10
    criterion["ok"] = True


@pytest.mark.criterion(3)
def test_c3_quotient_duality(criterion):
    start = time.perf_counter()
    rng = random.Random(2024)
    pairs = 0
    for _ in range(100):
        X = sample_space(rng, rng.randint(1, 6))
        Q = quotient(X)
        for a in range(Q.space.n):
            for b in range(Q.space.n):
                assert quotient_dual_distance(Q, a, b) == Q.space.dist[a][b]
                pairs += 1
    assert pairs > 100
    assert time.perf_counter() - start < 300
    criterion["ok"] = True


@pytest.mark.criterion(4)
def test_c4_theorem_iso(criterion):
    start = time.perf_counter()
    rng = random.Random(4048)
    for _ in range(100):
        X = sample_space(rng, rng.randint(1, 5))
        V = enumerate_vertices(fix_polytope(X)).vertices
        mu1 = Measure(X, rng.choice(V))
        mu2 = Measure(X, rng.choice(V))
        assert verify_theorem_iso(X, mu1, mu2)
        assert w_diameter_of(V, X) == diameter(quotient(X).space)
    assert time.perf_counter() - start < 600
    criterion["ok"] = True


def _random_measure(rng, X):
    k = [rng.randint(0, 5) for _ in range(X.n)]
    k[rng.randrange(X.n)] += 1
    return Measure(X, tuple(F(v, sum(k)) for v in k))


@pytest.mark.criterion(5)
def test_c5_kantorovich(criterion):
    rng = random.Random(5)
    for _ in range(50):
        X = sample_space(rng, rng.randint(1, 6))
        mu = _random_measure(rng, X)
        x, y = rng.randrange(X.n), rng.randrange(X.n)
        dx, dy = Measure.dirac(X, x), Measure.dirac(X, y)
        for a, b in ((dx, dy), (mu, dx)):
            res = kantorovich(a, b)
            f = res.potential.values
            assert res.plan.cost(X) == res.value
            assert sum(v * (p - q) for v, p, q in zip(f, a.weights, b.weights)) == res.value
        assert kantorovich(dx, dy).value == X.dist[x][y]
        assert kantorovich(mu, dx).value == sum(m * X.dist[z][x] for z, m in enumerate(mu.weights))
    for _ in range(50):
        X = sample_space(rng, rng.randint(2, 5))
        a, b, c = (_random_measure(rng, X) for _ in range(3))
        ab, ba = kantorovich(a, b).value, kantorovich(b, a).value
        assert ab == ba
        assert kantorovich(a, c).value <= ab + kantorovich(b, c).value
        assert (ab == 0) == (a == b)
        assert kantorovich(a, a).value == 0
    criterion["ok"] = True


@pytest.mark.criterion(6)
def test_c6_central_invariance(criterion):
    spaces = dict(haar_spaces())
    spaces["two-point"] = validate([[0, 1], [1, 0]])
    for name, X in spaces.items():
        res = central_measure(X)
        assert res.exact, name
        for p in enumerate_isometries(X).elements:
            assert pushforward(res.measure, p) == res.measure, name
    criterion["ok"] = True


@pytest.mark.criterion(7)
def test_c7_canonical_order(criterion):
    start = time.perf_counter()
    rng = random.Random(77)
    spaces = [sample_space(rng, rng.randint(1, 6)) for _ in range(50)]
    spaces += [generators.grid(n) for n in range(3, 7)]
    spaces += [generators.equilateral(n) for n in range(3, 6)]
    for X in spaces:
        order = canonical_metric(X)  # raises if the row-independence check fires
        for _ in range(5):
            perm = list(range(X.n))
            rng.shuffle(perm)
            assert canonical_metric(X.relabel(perm)).rho == order.rho
        count = len(enumerate_isometries(X))
        assert len(representations(X, order)) == count == order.all_representations_count
    assert time.perf_counter() - start < 600
    criterion["ok"] = True


def _grid_points(n, res):
    for k in simplex_grid(n, res):
        yield tuple(F(v, res) for v in k)


@pytest.mark.criterion(8)
def test_c8_oracle_agreement(criterion):
    two = validate([[0, 1], [1, 0]])
    tri = generators.equilateral(3)
    path = validate([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    grid3, grid5 = generators.grid(3), generators.grid(5)

    # minimax first step against simplex grid search
    for X, res in ((two, 1000), (tri, 300), (path, 200)):
        radius, argmin = first_step_grid_search(X.dist, res)
        lvl0 = initial_level(X)
        lvl1 = chebyshev_step(X, lvl0)
        assert lvl0.radius == radius
        assert argmin == {p for p in _grid_points(X.n, res) if lvl1.face.contains(p)}
    assert central_measure(two).measure.weights == (F(1, 2), F(1, 2))

    # exhaustive permutation scans
    generic = validate([[0, 5, 6, 7], [5, 0, 8, 9], [6, 8, 0, 10], [7, 9, 10, 0]])
    assert [len(brute_isometries(X.dist)) for X in (tri, grid3, generic)] == [6, 2, 1]
    assert [len(enumerate_isometries(X)) for X in (tri, grid3, generic)] == [6, 2, 1]
    assert len(enumerate_isometries(generators.cycle(6))) == len(brute_isometries(generators.cycle(6).dist))

    # quotient by explicit chains versus closure and LP
    _, d1 = brute_quotient(grid5.dist)
    Q = quotient(grid5)
    assert [list(r) for r in Q.space.dist] == d1
    assert quotient_dual_distance(quotient(grid3), 0, 1) == F(1, 2)

    # transport
    for p in (F(0), F(1, 3), F(1, 2), F(1)):
        for q in (F(0), F(1, 4), F(1)):
            w = kantorovich(Measure(two, (p, 1 - p)), Measure(two, (q, 1 - q))).value
            assert w == extreme_couplings_2pt(p, q, F(1)) == abs(p - q)
    for X in (two, grid3):
        assert lipschitz_vertices(X) == enumerate_vertices(lipschitz_polytope(X), "bases")
    assert lipschitz_vertices(two).vertices == ((0, -1), (0, 1))

    # lambda against direct Fix intersection
    for X in (grid3, grid5, path, generators.grid(4)):
        pts = enumerate_vertices(fix_tower_polytope(X)).vertices
        assert pts == (lambda_measure(X).weights,)
    mu1, mu2 = Measure(grid3, (F(1, 2), 0, F(1, 2))), Measure(grid3, (0, 1, 0))
    assert kantorovich(mu1, mu2).value == F(1, 2) and verify_theorem_iso(grid3, mu1, mu2)

    # canonical order against full re-enumeration
    rows, _ = brute_extend(grid5.dist, [[0, 1, F(1, 2)], [1, 0, F(1, 2)], [F(1, 2), F(1, 2), 0]])
    state = initial_state(grid5)
    for _ in range(3):
        row, state = extend(grid5, state)
    assert rows == {row[:-1]} == {(F(3, 4), F(1, 4), F(1, 4))}
    assert canonical_metric(grid3).representation == (0, 2, 1)

    # weak convexity on random 3-point metrics
    rng = random.Random(8)
    for _ in range(100):
        a, b = rng.randint(1, 30), rng.randint(1, 30)
        c = rng.randint(max(abs(a - b), 1), a + b)
        assert not weak_convexity_check(validate([[0, a, b], [a, 0, c], [b, c, 0]])).convex
    criterion["ok"] = True


@pytest.mark.criterion(9)
def test_c9_explore_interval(criterion, capsys):
    outputs = []
    for _ in range(2):
        assert main(["explore-interval", "--sizes", "3", "4", "5"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    rep = json.loads(outputs[0])
    assert [g["n"] for g in rep["result"]["grids"]] == [3, 4, 5]
    rational = re.compile(r"^-?\d+(/\d+)?$")
    for g in rep["result"]["grids"]:
        assert rational.match(g["w_to_uniform"])
        assert all(rational.match(w) for w in g["measure"])
    criterion["ok"] = True
