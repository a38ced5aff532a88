"""Distinguished probability measures on a finite metric space.

``central_measure`` iterates the Chebyshev center map inside the simplex
of probability vectors, measured with the Kantorovich metric.
``lambda_measure`` lifts the point mass of a singleton quotient back
through the quotient tower.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .isometry import enumerate_isometries, generators
from .lp import (
    CapExceededError,
    HPolytope,
    VPolytope,
    _dot,
    as_vector,
    enumerate_vertices,
    solve_standard_form,
)
from .metric import FiniteMetricSpace
from .quotient import NotQuasiNilpotentError, quotient, quotient_tower
from .transport import Measure, dual_distance, kantorovich, lipschitz_vertices, pushforward

log = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 16
DEFAULT_SIZE_LIMIT = 8


class SpaceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureTowerLevel:
    face: HPolytope
    vertices: VPolytope
    radius: Fraction
    w_diameter: Fraction


@dataclass(frozen=True)
class CentralMeasureResult:
    measure: Measure
    levels: tuple[MeasureTowerLevel, ...]
    exact: bool
    residual_diameter: Fraction


def prob_polytope(X: FiniteMetricSpace) -> HPolytope:
    n = X.n
    nonneg = [([-int(i == j) for j in range(n)], 0) for i in range(n)]
    return HPolytope(n, nonneg, [([1] * n, 1)])


@lru_cache(maxsize=64)
def _potentials(X: FiniteMetricSpace, cap: int) -> VPolytope:
    return lipschitz_vertices(X, cap=cap)


def chebyshev_radius(X: FiniteMetricSpace, face: HPolytope, vertices: VPolytope) -> Fraction:
    """``min_{mu in face} max_v W(mu, v)`` as one transportation LP.

    Variables are ``mu``, ``t`` and a coupling block per vertex ``v`` with
    marginals ``mu`` and ``v`` whose cost is at most ``t``.
    """
    n = X.n
    verts = vertices.vertices
    if len(verts) == 1:
        return Fraction(0)
    k = len(verts)
    n_ineq = len(face.inequalities)
    # column layout: mu | t | gamma blocks | cost slacks | face slacks
    t_col = n
    g0 = n + 1
    s0 = g0 + k * n * n
    f0 = s0 + k
    ncols = f0 + n_ineq
    rows, rhs = [], []

    def new_row():
        return [Fraction(0)] * ncols

    for v_idx, v in enumerate(verts):
        base = g0 + v_idx * n * n
        for i in range(n):
            row = new_row()
            for j in range(n):
                row[base + i * n + j] = Fraction(1)
            row[i] = Fraction(-1)
            rows.append(row)
            rhs.append(Fraction(0))
        for j in range(n):
            row = new_row()
            for i in range(n):
                row[base + i * n + j] = Fraction(1)
            rows.append(row)
            rhs.append(v[j])
        row = new_row()
        for i in range(n):
            for j in range(n):
                if X.dist[i][j]:
                    row[base + i * n + j] = X.dist[i][j]
        row[s0 + v_idx] = Fraction(1)
        row[t_col] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    for idx, (a, b) in enumerate(face.inequalities):
        row = new_row()
        row[:n] = list(a)
        row[f0 + idx] = Fraction(1)
        rows.append(row)
        rhs.append(b)
    for a, b in face.equalities:
        row = new_row()
        row[:n] = list(a)
        rows.append(row)
        rhs.append(b)
    cost = new_row()
    cost[t_col] = Fraction(1)
    res = solve_standard_form(cost, rows, rhs)
    assert res.status == "optimal", f"radius LP {res.status}"
    return res.value


def _w_diameter(verts: VPolytope, potentials: VPolytope) -> Fraction:
    vs = verts.vertices
    best = Fraction(0)
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            diff = [x - y for x, y in zip(vs[a], vs[b])]
            best = max(best, dual_distance(diff, potentials))
    return best


def _tidy(face: HPolytope, verts: VPolytope) -> HPolytope:
    """Drop inequalities slack at every vertex; promote always-tight ones."""
    ineq, eq = [], list(face.equalities)
    for a, b in face.inequalities:
        tight = [_dot(a, v) == b for v in verts.vertices]
        if all(tight):
            eq.append((a, b))
        elif any(tight):
            ineq.append((a, b))
    return HPolytope(face.dim, ineq, eq)


def _make_level(X, face, potentials, vertex_cap) -> MeasureTowerLevel:
    verts = enumerate_vertices(face, cap=vertex_cap)
    face = _tidy(face, verts)
    radius = chebyshev_radius(X, face, verts)
    return MeasureTowerLevel(face, verts, radius, _w_diameter(verts, potentials))


def initial_level(X: FiniteMetricSpace, potential_cap: int = 200_000, vertex_cap: int = 200_000):
    return _make_level(X, prob_polytope(X), _potentials(X, potential_cap), vertex_cap)


def chebyshev_step(
    X: FiniteMetricSpace,
    level: MeasureTowerLevel,
    potential_cap: int = 200_000,
    vertex_cap: int = 200_000,
) -> MeasureTowerLevel:
    """The Chebyshev center of ``level.face`` as the next tower level.

    ``W(mu, v) <= r`` is linearised over the vertices ``f`` of the
    Lipschitz polytope as ``<f, mu> <= r + <f, v>``; for each ``f`` only
    the tightest vertex ``v`` matters.
    """
    potentials = _potentials(X, potential_cap)
    r = level.radius
    verts = level.vertices.vertices
    new_ineq = []
    for f in potentials.vertices:
        bound = r + min(_dot(f, v) for v in verts)
        new_ineq.append((f, bound))
    face = level.face.with_constraints(inequalities=new_ineq)
    nxt = _make_level(X, face, potentials, vertex_cap)
    for v in nxt.vertices.vertices:
        assert max(dual_distance([a - b for a, b in zip(v, u)], potentials) for u in verts) == r, (
            "center vertex does not attain the Chebyshev radius"
        )
    return nxt


def central_measure(
    X: FiniteMetricSpace,
    max_iter: int = DEFAULT_MAX_ITER,
    size_limit: int = DEFAULT_SIZE_LIMIT,
    potential_cap: int = 200_000,
    vertex_cap: int = 200_000,
) -> CentralMeasureResult:
    """Run the Chebyshev tower in the measure simplex.

    Stops once the face is a single point (``exact``) or after ``max_iter``
    steps, in which case the first vertex of the last face is returned and
    ``residual_diameter`` bounds its distance to the true limit.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if X.n > size_limit:
        raise SpaceTooLargeError(f"{X.n} points exceeds the size limit {size_limit}")
    level = initial_level(X, potential_cap, vertex_cap)
    levels = [level]
    for step in range(max_iter):
        if len(level.vertices) == 1:
            break
        level = chebyshev_step(X, level, potential_cap, vertex_cap)
        prev = levels[-1]
        assert level.w_diameter <= prev.w_diameter and level.radius <= prev.radius
        log.debug("step %d: %d vertices, radius %s", step + 1, len(level.vertices), level.radius)
        levels.append(level)
    exact = len(level.vertices) == 1
    measure = Measure(X, level.vertices.vertices[0])
    return CentralMeasureResult(measure, tuple(levels), exact, level.w_diameter)


# ---------------------------------------------------------------------------
# invariant measures and the second-kind central measure


def invariance_equalities(X: FiniteMetricSpace, perms) -> list:
    n = X.n
    eqs = []
    for p in perms:
        for i in range(n):
            if p[i] != i:
                row = [0] * n
                row[p[i]] += 1
                row[i] -= 1
                eqs.append((row, 0))
    return eqs


def fix_polytope(X: FiniteMetricSpace) -> HPolytope:
    """Probability vectors invariant under every isometry of ``X``."""
    G = enumerate_isometries(X)
    return prob_polytope(X).with_constraints(equalities=invariance_equalities(X, generators(G)))


def fix_tower_polytope(X: FiniteMetricSpace, depth: int | None = None) -> HPolytope:
    """Measures whose image in every quotient level is invariant there.

    Intersecting these linear conditions directly is an alternative to the
    lifting used by :func:`lambda_measure`; ``depth=None`` uses every level.
    """
    tower = quotient_tower(X)
    n = X.n
    eqs = invariance_equalities(X, generators(enumerate_isometries(X)))
    # composite projection from X onto each level
    proj = list(range(n))
    qs = tower.quotients if depth is None else tower.quotients[: max(depth - 1, 0)]
    for q in qs:
        proj = [q.projection[p] for p in proj]
        L = q.space
        for g in generators(enumerate_isometries(L)):
            for a in range(L.n):
                if g[a] != a:
                    row = [0] * n
                    for x in range(n):
                        if proj[x] == g[a]:
                            row[x] += 1
                        if proj[x] == a:
                            row[x] -= 1
                    eqs.append((row, 0))
    return prob_polytope(X).with_constraints(equalities=eqs)


def lambda_measure(X: FiniteMetricSpace) -> Measure:
    """Second-kind central measure of a quasi-nilpotent space.

    Starting from the point mass on the terminal singleton, each orbit
    receives the mass of its image spread evenly over its members.
    """
    tower = quotient_tower(X)
    if not tower.quasi_nilpotent:
        raise NotQuasiNilpotentError(tower.terminal)
    weights = [Fraction(1)]
    for q in reversed(tower.quotients):
        sizes = [len(o) for o in q.partition.orbits]
        weights = [weights[q.projection[x]] / sizes[q.projection[x]] for x in range(q.base.n)]
    return Measure(X, tuple(weights))


def is_invariant(mu: Measure) -> bool:
    G = enumerate_isometries(mu.space)
    return all(pushforward(mu, p).weights == mu.weights for p in generators(G))


def verify_theorem_iso(X: FiniteMetricSpace, mu1: Measure, mu2: Measure) -> bool:
    """Is the orbit projection distance-preserving on this invariant pair?"""
    for mu in (mu1, mu2):
        if mu.space != X:
            raise ValueError("measure is not on the given space")
        if not is_invariant(mu):
            raise ValueError(f"measure {tuple(map(str, mu.weights))} is not isometry-invariant")
    q = quotient(X)
    lhs = kantorovich(mu1, mu2).value
    nu1 = pushforward(mu1, q.projection, q.space)
    nu2 = pushforward(mu2, q.projection, q.space)
    rhs = kantorovich(nu1, nu2).value
    return lhs == rhs


def w_diameter_of(vertices: Sequence[Sequence[Fraction]], X: FiniteMetricSpace) -> Fraction:
    """Largest Kantorovich distance between listed measures (exact LPs)."""
    best = Fraction(0)
    ms = [Measure(X, as_vector(v)) for v in vertices]
    for a in range(len(ms)):
        for b in range(a + 1, len(ms)):
            best = max(best, kantorovich(ms[a], ms[b]).value)
    return best


__all__ = [
    "CapExceededError",
    "CentralMeasureResult",
    "MeasureTowerLevel",
    "SpaceTooLargeError",
    "central_measure",
    "chebyshev_radius",
    "chebyshev_step",
    "fix_polytope",
    "fix_tower_polytope",
    "initial_level",
    "is_invariant",
    "lambda_measure",
    "prob_polytope",
    "verify_theorem_iso",
    "w_diameter_of",
]
