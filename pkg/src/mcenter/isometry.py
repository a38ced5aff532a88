"""Isometry groups of finite metric spaces and their orbits."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .metric import FiniteMetricSpace

Perm = tuple[int, ...]


@dataclass(frozen=True)
class IsometryGroup:
    space: FiniteMetricSpace
    elements: tuple[Perm, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.space.n))

    def is_trivial(self) -> bool:
        return len(self.elements) == 1


@dataclass(frozen=True)
class OrbitPartition:
    orbit_of: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.orbits)


def is_isometry(X: FiniteMetricSpace, perm: Sequence[int]) -> bool:
    d = X.dist
    n = X.n
    return sorted(perm) == list(range(n)) and all(
        d[perm[i]][perm[j]] == d[i][j] for i in range(n) for j in range(i + 1, n)
    )


def compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def enumerate_isometries(X: FiniteMetricSpace) -> IsometryGroup:
    """All distance-preserving permutations, sorted lexicographically.

    Backtracking assigns images in index order.  A candidate image must have
    the same multiset of distances to the rest of the space and must agree
    with every image already fixed.
    """
    n = X.n
    d = X.dist
    profile = [tuple(sorted(Counter(row).items())) for row in d]
    candidates = [[y for y in range(n) if profile[y] == profile[x]] for x in range(n)]
    found: list[Perm] = []
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> None:
        if i == n:
            found.append(tuple(image))
            return
        for y in candidates[i]:
            if used[y]:
                continue
            if all(d[image[k]][y] == d[k][i] for k in range(i)):
                image[i] = y
                used[y] = True
                extend(i + 1)
                used[y] = False
        image[i] = -1

    extend(0)
    elements = tuple(sorted(found))
    group = IsometryGroup(X, elements)
    _check_closed(group)
    return group


def _check_closed(G: IsometryGroup) -> None:
    elems = set(G.elements)
    assert G.identity in elems, "isometry group lacks the identity"
    for p in G.elements:
        assert inverse(p) in elems, "isometry group not closed under inverses"
    # closure under composition is checked against generators only when
    # the group is large; small groups get the full table
    gens = G.elements if len(elems) <= 64 else _generators(G)
    for p in G.elements:
        for q in gens:
            assert compose(p, q) in elems, "isometry group not closed under composition"


def _generators(G: IsometryGroup) -> list[Perm]:
    gens: list[Perm] = []
    span = {G.identity}
    for p in G.elements:
        if p in span:
            continue
        gens.append(p)
        frontier = list(span)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = compose(g, a)
                    if b not in span:
                        span.add(b)
                        nxt.append(b)
            frontier = nxt
    return gens


def generators(G: IsometryGroup) -> list[Perm]:
    """A small generating set, greedily picked in canonical order."""
    return _generators(G)


def orbits(G: IsometryGroup) -> OrbitPartition:
    """Orbits, numbered by their minimum member."""
    n = G.space.n
    orbit_of = [-1] * n
    out = []
    for x in range(n):
        if orbit_of[x] >= 0:
            continue
        members = tuple(sorted({p[x] for p in G.elements}))
        for y in members:
            orbit_of[y] = len(out)
        out.append(members)
    return OrbitPartition(tuple(orbit_of), tuple(out))


def is_transitive(G: IsometryGroup) -> bool:
    return len(orbits(G)) == 1


def stabilizer(G: IsometryGroup, x: int) -> tuple[Perm, ...]:
    return tuple(p for p in G.elements if p[x] == x)
