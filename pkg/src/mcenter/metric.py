"""Finite metric spaces, Chebyshev radius/center and the center tower."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lp import as_fraction


class MetricError(ValueError):
    """A matrix failed one of the metric axioms.

    ``kind`` is one of ``shape``, ``diagonal``, ``asymmetry``, ``zero``,
    ``negative``, ``triangle``; ``witness`` holds the offending indices.
    """

    def __init__(self, kind: str, witness: tuple[int, ...], message: str):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True)
class FiniteMetricSpace:
    dist: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.dist)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def relabel(self, perm: Sequence[int]) -> "FiniteMetricSpace":
        """The isometric copy in which old point ``i`` becomes ``perm[i]``."""
        n = self.n
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        dist = tuple(tuple(self.dist[inv[a]][inv[b]] for b in range(n)) for a in range(n))
        labels = tuple(self.labels[inv[a]] for a in range(n))
        return FiniteMetricSpace(dist, labels)

    def submatrix(self, members: Sequence[int]) -> "FiniteMetricSpace":
        return FiniteMetricSpace(
            tuple(tuple(self.dist[i][j] for j in members) for i in members),
            tuple(self.labels[i] for i in members),
        )

    def scaled(self, factor) -> "FiniteMetricSpace":
        f = as_fraction(factor)
        return FiniteMetricSpace(tuple(tuple(v * f for v in row) for row in self.dist), self.labels)


def validate(matrix: Sequence[Sequence], labels: Iterable[str] | None = None) -> FiniteMetricSpace:
    """Check the metric axioms and build a :class:`FiniteMetricSpace`.

    Raises :class:`MetricError` naming the first violated axiom and the
    indices that witness it.
    """
    rows = [tuple(as_fraction(v) for v in row) for row in matrix]
    n = len(rows)
    if n == 0:
        raise MetricError("shape", (), "a metric space needs at least one point")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise MetricError("shape", (i,), f"row {i} has length {len(row)}, expected {n}")
    labels = tuple(str(i) for i in range(n)) if labels is None else tuple(str(x) for x in labels)
    if len(labels) != n:
        raise MetricError("shape", (), f"{len(labels)} labels for {n} points")
    for i in range(n):
        if rows[i][i] != 0:
            raise MetricError("diagonal", (i,), f"dist[{i}][{i}] = {rows[i][i]} is not zero")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise MetricError(
                    "asymmetry", (i, j), f"dist[{i}][{j}] = {rows[i][j]} != dist[{j}][{i}] = {rows[j][i]}"
                )
            if rows[i][j] < 0:
                raise MetricError("negative", (i, j), f"dist[{i}][{j}] is negative")
            if rows[i][j] == 0:
                raise MetricError("zero", (i, j), f"distinct points {i} and {j} at distance 0")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rows[i][k] > rows[i][j] + rows[j][k]:
                    raise MetricError(
                        "triangle",
                        (i, j, k),
                        f"triangle violation ({i},{j},{k}): {rows[i][k]} > {rows[i][j]} + {rows[j][k]}",
                    )
    return FiniteMetricSpace(tuple(rows), labels)


@dataclass(frozen=True)
class Subspace:
    parent: FiniteMetricSpace
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        if not members:
            raise ValueError("subspace must be nonempty")
        if members[0] < 0 or members[-1] >= self.parent.n:
            raise ValueError("subspace member out of range")
        object.__setattr__(self, "members", members)

    @classmethod
    def whole(cls, X: FiniteMetricSpace) -> "Subspace":
        return cls(X, tuple(range(X.n)))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.parent.labels[i] for i in self.members)

    def __len__(self):
        return len(self.members)


def _as_subspace(A) -> Subspace:
    return Subspace.whole(A) if isinstance(A, FiniteMetricSpace) else A


def diameter(A) -> Fraction:
    A = _as_subspace(A)
    d = A.parent.dist
    return max((d[i][j] for i in A.members for j in A.members), default=Fraction(0))


def eccentricity(A, x: int) -> Fraction:
    A = _as_subspace(A)
    if x not in A.members:
        raise ValueError(f"point {x} is not in the subspace")
    return max(A.parent.dist[x][y] for y in A.members)


def chebyshev_center_set(A) -> tuple[Fraction, Subspace]:
    """Chebyshev radius and the full (untie-broken) set of centers."""
    A = _as_subspace(A)
    ecc = {x: eccentricity(A, x) for x in A.members}
    r = min(ecc.values())
    return r, Subspace(A.parent, tuple(x for x in A.members if ecc[x] == r))


@dataclass(frozen=True)
class ChebyshevTower:
    levels: tuple[Subspace, ...]
    radii: tuple[Fraction, ...]
    stabilized: bool = True

    @property
    def terminal(self) -> Subspace:
        return self.levels[-1]


def chebyshev_tower(X: FiniteMetricSpace) -> ChebyshevTower:
    """Iterate the Chebyshev center map until the level repeats.

    Levels are listed without the final repetition, so ``levels[-1]`` is the
    stable set and a singleton there is the generalized center.
    """
    level = Subspace.whole(X)
    levels, radii = [level], []
    while True:
        r, nxt = chebyshev_center_set(level)
        radii.append(r)
        if nxt.members == level.members:
            return ChebyshevTower(tuple(levels), tuple(radii), True)
        levels.append(nxt)
        level = nxt


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    failures: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def is_weakly_middle(X: FiniteMetricSpace, x: int, y: int, z: int) -> bool:
    d = X.dist
    for w in range(X.n):
        top = max(d[x][w], d[y][w])
        if d[z][w] > top:
            return False
        if d[z][w] == top and d[x][w] != d[y][w]:
            return False
    return True


def weak_convexity_check(X: FiniteMetricSpace) -> ConvexityReport:
    """Look for a weakly middle point for every unordered pair of points."""
    failures = []
    for x in range(X.n):
        for y in range(x + 1, X.n):
            if not any(is_weakly_middle(X, x, y, z) for z in range(X.n)):
                failures.append((x, y))
    return ConvexityReport(not failures, tuple(failures))
