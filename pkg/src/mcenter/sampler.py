"""Canonical point ordering of a finite metric space.

Points are placed one at a time.  At each step every isometric placement of
the prefix built so far is paired with every candidate point; the pairs
that are farthest from their prefix survive, then ties are cut by
maximising the distance to prefix point 0, then to prefix point 1, and so
on.  The distances read off a survivor form the next row of the canonical
metric, which therefore depends only on the isometry class of the space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .isometry import enumerate_isometries, orbits
from .metric import FiniteMetricSpace

DEFAULT_SIZE_LIMIT = 10

Tuple = tuple[int, ...]


class RowDependenceError(AssertionError):
    """Surviving placements disagree on the new row of distances."""


@dataclass(frozen=True)
class EmbeddingState:
    prefix_length: int
    tuples: tuple[Tuple, ...]  # all placements of the prefix, sorted


@dataclass(frozen=True)
class CanonicalOrder:
    space: FiniteMetricSpace
    rho: tuple[tuple[Fraction, ...], ...]
    representation: Tuple
    all_representations_count: int

    def phi(self, k: int) -> int:
        """Representation extended past the last index by its final value."""
        return self.representation[min(k, len(self.representation) - 1)]


def embeddings(X: FiniteMetricSpace, rho: Sequence[Sequence[Fraction]]) -> list[Tuple]:
    """All tuples of points of ``X`` realising the prefix metric ``rho``."""
    m = len(rho)
    d = X.dist
    out: list[Tuple] = []
    cur: list[int] = []

    def back(j: int) -> None:
        if j == m:
            out.append(tuple(cur))
            return
        for x in range(X.n):
            # rho is a metric, so matching distances already forces x new
            if all(d[cur[k]][x] == rho[k][j] for k in range(j)):
                cur.append(x)
                back(j + 1)
                cur.pop()

    back(0)
    if not out:
        raise AssertionError("prefix metric has no realisation in the space")
    return out


def initial_state(X: FiniteMetricSpace) -> EmbeddingState:
    return EmbeddingState(1, tuple((x,) for x in range(X.n)))


def extend(X: FiniteMetricSpace, state: EmbeddingState) -> tuple[tuple[Fraction, ...], EmbeddingState]:
    """Place one more point.

    Returns the new row ``(rho(0, m), ..., rho(m-1, m), 0)`` and the state
    holding every placement of the longer prefix.
    """
    m = state.prefix_length
    if m >= X.n:
        raise ValueError("every point is already placed")
    d = X.dist
    pairs = []
    for t in state.tuples:
        placed = set(t)
        for x in range(X.n):
            if x not in placed:
                pairs.append((t, x))
    best = max(min(d[y][x] for y in t) for t, x in pairs)
    survivors = [(t, x) for t, x in pairs if min(d[y][x] for y in t) == best]
    for j in range(m):
        top = max(d[t[j]][x] for t, x in survivors)
        survivors = [(t, x) for t, x in survivors if d[t[j]][x] == top]
    rows = {tuple(d[y][x] for y in t) for t, x in survivors}
    if len(rows) != 1:
        raise RowDependenceError(f"survivors disagree on row {m}: {sorted(rows)}")
    row = next(iter(rows)) + (Fraction(0),)
    new = tuple(sorted(t + (x,) for t, x in survivors))
    return row, EmbeddingState(m + 1, new)


def canonical_metric(X: FiniteMetricSpace, size_limit: int = DEFAULT_SIZE_LIMIT) -> CanonicalOrder:
    if X.n > size_limit:
        raise ValueError(f"{X.n} points exceeds the size limit {size_limit}")
    state = initial_state(X)
    rows: list[tuple[Fraction, ...]] = [(Fraction(0),)]
    while state.prefix_length < X.n:
        row, state = extend(X, state)
        rows.append(row)
    n = X.n
    rho = [[Fraction(0)] * n for _ in range(n)]
    for k, row in enumerate(rows):
        for j, v in enumerate(row):
            rho[j][k] = rho[k][j] = v
    rho_t = tuple(tuple(r) for r in rho)
    return CanonicalOrder(X, rho_t, state.tuples[0], len(state.tuples))


def representations(X: FiniteMetricSpace, order: CanonicalOrder) -> list[Tuple]:
    return embeddings(X, order.rho)


def canonical_orbit_sequence(X: FiniteMetricSpace, order: CanonicalOrder | None = None) -> list[int]:
    """Orbit of the k-th canonically placed point, for every k."""
    order = canonical_metric(X) if order is None else order
    part = orbits(enumerate_isometries(X))
    seqs = {tuple(part.orbit_of[x] for x in rep) for rep in representations(X, order)}
    if len(seqs) != 1:
        raise AssertionError("representations disagree on the orbit sequence")
    return list(next(iter(seqs)))
