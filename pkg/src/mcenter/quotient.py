"""Orbit quotients ``X -> X^(1)`` and the quotient tower."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .isometry import IsometryGroup, OrbitPartition, enumerate_isometries, orbits
from .lp import HPolytope, solve_lp
from .metric import FiniteMetricSpace, diameter, validate


class NotQuasiNilpotentError(ValueError):
    def __init__(self, terminal: FiniteMetricSpace):
        super().__init__(f"quotient tower stops at a {terminal.n}-point space, not a singleton")
        self.terminal = terminal


@dataclass(frozen=True)
class QuotientSpace:
    base: FiniteMetricSpace
    group: IsometryGroup
    partition: OrbitPartition
    space: FiniteMetricSpace
    projection: tuple[int, ...]


def orbit_weights(X: FiniteMetricSpace, part: OrbitPartition) -> list[list[Fraction]]:
    """Smallest distance between members of each pair of orbits."""
    k = len(part)
    w = [[Fraction(0)] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            v = min(X.dist[x][y] for x in part.orbits[a] for y in part.orbits[b])
            w[a][b] = w[b][a] = v
    return w


def shortest_path_closure(w: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(w)
    d = [row[:] for row in w]
    for m in range(k):
        dm = d[m]
        for i in range(k):
            dim = d[i][m]
            di = d[i]
            for j in range(k):
                if dim + dm[j] < di[j]:
                    di[j] = dim + dm[j]
    return d


def quotient(X: FiniteMetricSpace, group: IsometryGroup | None = None) -> QuotientSpace:
    """The orbit space with the largest metric making the projection 1-Lipschitz.

    That metric is the path metric generated by the closest-pair distances
    between orbits.
    """
    G = enumerate_isometries(X) if group is None else group
    part = orbits(G)
    d1 = shortest_path_closure(orbit_weights(X, part))
    k = len(part)
    assert all(d1[a][b] > 0 for a in range(k) for b in range(k) if a != b), (
        "quotient pseudometric vanishes between distinct orbits"
    )
    labels = ["{" + ",".join(X.labels[i] for i in orb) + "}" for orb in part.orbits]
    space = validate(d1, labels)
    return QuotientSpace(X, G, part, space, part.orbit_of)


def quotient_dual_distance(Q: QuotientSpace, a: int, b: int) -> Fraction:
    """``max f(a) - f(b)`` over orbit-constant 1-Lipschitz ``f``, by LP.

    An independent route to the quotient distance: it never looks at the
    shortest-path closure.
    """
    if a == b:
        return Fraction(0)
    X = Q.base
    k = Q.space.n
    proj = Q.projection
    ineq = []
    for x in range(X.n):
        for y in range(X.n):
            if proj[x] != proj[y]:
                row = [0] * k
                row[proj[x]] = 1
                row[proj[y]] = -1
                ineq.append((row, X.dist[x][y]))
    pin = [0] * k
    pin[b] = 1
    P = HPolytope(k, ineq, [(pin, 0)])
    obj = [0] * k
    obj[a] = 1
    obj[b] = -1
    value, _ = solve_lp(obj, "max", P)
    return value


@dataclass(frozen=True)
class QuotientTower:
    levels: tuple[FiniteMetricSpace, ...]
    quotients: tuple[QuotientSpace, ...]  # quotients[k] maps levels[k] onto levels[k+1]
    diameters: tuple[Fraction, ...]
    quasi_nilpotent: bool

    @property
    def terminal(self) -> FiniteMetricSpace:
        return self.levels[-1]


def quotient_tower(X: FiniteMetricSpace) -> QuotientTower:
    """Quotient repeatedly until the isometry group is trivial.

    A trivial group makes the quotient an isometric copy, so the tower is
    constant from there on; each nontrivial step removes at least one point.
    """
    levels = [X]
    quotients = []
    while True:
        G = enumerate_isometries(levels[-1])
        if G.is_trivial():
            break
        q = quotient(levels[-1], G)
        assert q.space.n < levels[-1].n
        quotients.append(q)
        levels.append(q.space)
    diams = tuple(diameter(L) for L in levels)
    assert all(a >= b for a, b in zip(diams, diams[1:])), "tower diameters increased"
    return QuotientTower(tuple(levels), tuple(quotients), diams, levels[-1].n == 1)
