"""Probability measures and the Kantorovich metric on a finite space.

The distance is computed twice per call: as the optimal transportation
cost (primal, giving a coupling) and as the best 1-Lipschitz potential
(dual).  The two must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lp import HPolytope, VPolytope, as_vector, enumerate_vertices, solve_lp, solve_standard_form
from .metric import FiniteMetricSpace

DEFAULT_LIPSCHITZ_CAP = 200_000


class SpaceMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Measure:
    space: FiniteMetricSpace
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = as_vector(self.weights)
        if len(w) != self.space.n:
            raise ValueError(f"{len(w)} weights for a {self.space.n}-point space")
        if any(v < 0 for v in w):
            raise ValueError("negative weight")
        if sum(w) != 1:
            raise ValueError(f"weights sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def dirac(cls, X: FiniteMetricSpace, x: int) -> "Measure":
        return cls(X, tuple(Fraction(int(i == x)) for i in range(X.n)))

    @classmethod
    def uniform(cls, X: FiniteMetricSpace) -> "Measure":
        return cls(X, (Fraction(1, X.n),) * X.n)


@dataclass(frozen=True)
class Coupling:
    matrix: tuple[tuple[Fraction, ...], ...]

    def cost(self, X: FiniteMetricSpace) -> Fraction:
        return sum(
            (g * X.dist[i][j] for i, row in enumerate(self.matrix) for j, g in enumerate(row) if g),
            Fraction(0),
        )


@dataclass(frozen=True)
class LipschitzPotential:
    values: tuple[Fraction, ...]


@dataclass(frozen=True)
class KantorovichResult:
    value: Fraction
    plan: Coupling
    potential: LipschitzPotential


def lipschitz_polytope(X: FiniteMetricSpace) -> HPolytope:
    """``{f : |f_i - f_j| <= d_ij, f_0 = 0}``."""
    n = X.n
    ineq = []
    for i in range(n):
        for j in range(n):
            if i != j:
                row = [0] * n
                row[i], row[j] = 1, -1
                ineq.append((row, X.dist[i][j]))
    pin = [1] + [0] * (n - 1)
    return HPolytope(n, ineq, [(pin, 0)])


def lipschitz_vertices(X: FiniteMetricSpace, cap: int = DEFAULT_LIPSCHITZ_CAP) -> VPolytope:
    return enumerate_vertices(lipschitz_polytope(X), cap=cap)


def _check_same_space(mu: Measure, nu: Measure) -> FiniteMetricSpace:
    if mu.space != nu.space:
        raise SpaceMismatchError("measures live on different spaces")
    return mu.space


def transport_plan(mu: Measure, nu: Measure) -> tuple[Fraction, Coupling]:
    X = _check_same_space(mu, nu)
    n = X.n
    cost = [X.dist[i][j] for i in range(n) for j in range(n)]
    a_eq, b_eq = [], []
    for i in range(n):
        a_eq.append([int(k // n == i) for k in range(n * n)])
        b_eq.append(mu.weights[i])
    for j in range(n):
        a_eq.append([int(k % n == j) for k in range(n * n)])
        b_eq.append(nu.weights[j])
    res = solve_standard_form(cost, a_eq, b_eq)
    assert res.status == "optimal", res.status
    plan = Coupling(tuple(tuple(res.x[i * n:(i + 1) * n]) for i in range(n)))
    return res.value, plan


def best_potential(mu: Measure, nu: Measure) -> tuple[Fraction, LipschitzPotential]:
    X = _check_same_space(mu, nu)
    diff = [a - b for a, b in zip(mu.weights, nu.weights)]
    value, f = solve_lp(diff, "max", lipschitz_polytope(X))
    return value, LipschitzPotential(tuple(f))


def kantorovich(mu: Measure, nu: Measure) -> KantorovichResult:
    """Kantorovich distance with a primal coupling and a dual potential.

    The potential is pinned to 0 at point 0 and oriented so that
    ``<f, mu - nu>`` is the (nonnegative) distance.
    """
    primal, plan = transport_plan(mu, nu)
    dual, potential = best_potential(mu, nu)
    assert primal == dual, f"duality gap {primal} vs {dual}"
    return KantorovichResult(primal, plan, potential)


def pushforward(mu: Measure, phi: Sequence[int], target: FiniteMetricSpace | None = None) -> Measure:
    """Transport ``mu`` along the index map ``phi``."""
    target = mu.space if target is None else target
    w = [Fraction(0)] * target.n
    for i, m in enumerate(mu.weights):
        w[phi[i]] += m
    return Measure(target, tuple(w))


def dual_distance(diff: Sequence[Fraction], potentials: VPolytope) -> Fraction:
    """``max <f, diff>`` over precomputed Lipschitz vertices.

    ``diff`` is a difference of two probability vectors, so this is the
    Kantorovich distance between them.
    """
    return max(sum((a * b for a, b in zip(f, diff) if a and b), Fraction(0)) for f in potentials.vertices)
