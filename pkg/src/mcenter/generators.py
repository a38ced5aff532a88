"""Standard test spaces: grids, cycles, simplices, random L1 clouds, groups."""

from __future__ import annotations

import heapq
import itertools
import random as _random
from fractions import Fraction
from typing import Mapping, Sequence

from .lp import as_fraction
from .metric import FiniteMetricSpace, validate


def grid(n: int) -> FiniteMetricSpace:
    """``{0, 1/(n-1), ..., 1}`` with the absolute-value metric."""
    if n < 1:
        raise ValueError("grid needs n >= 1")
    if n == 1:
        return validate([[0]], ["0"])
    pts = [Fraction(k, n - 1) for k in range(n)]
    return validate([[abs(a - b) for b in pts] for a in pts], [str(p) for p in pts])


def cycle(n: int) -> FiniteMetricSpace:
    """``n`` equally spaced points on a circle of circumference 1 (arc metric)."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return validate(
        [[Fraction(min(abs(i - j), n - abs(i - j)), n) for j in range(n)] for i in range(n)],
        [f"c{i}" for i in range(n)],
    )


def equilateral(n: int, side=1) -> FiniteMetricSpace:
    if n < 1:
        raise ValueError("equilateral needs n >= 1")
    s = as_fraction(side)
    return validate([[s if i != j else 0 for j in range(n)] for i in range(n)])


def random_space(n: int, seed: int, dim: int = 2, side: int = 4) -> FiniteMetricSpace:
    """Distinct integer points of ``[0, side]^dim`` under L1, scaled by ``1/side``.

    The triangle inequality holds by construction.  A small cube makes
    coincident distances, and hence symmetries, common.
    """
    if n < 1:
        raise ValueError("random space needs n >= 1")
    if n > (side + 1) ** dim:
        raise ValueError(f"cannot place {n} distinct points in a cube of side {side}")
    rng = _random.Random(seed)
    pts: list[tuple[int, ...]] = []
    seen = set()
    while len(pts) < n:
        p = tuple(rng.randint(0, side) for _ in range(dim))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    mat = [[Fraction(sum(abs(a - b) for a, b in zip(p, q)), side) for q in pts] for p in pts]
    return validate(mat, ["(" + ",".join(map(str, p)) + ")" for p in pts])


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_group_table(k: int) -> tuple[list[list[int]], list[tuple[int, ...]]]:
    """Cayley table of ``S_k`` on lexicographically ordered permutations."""
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[i] for i in q)] for q in perms] for p in perms]
    return table, perms


def word_metric(table: Sequence[Sequence[int]], weights: Mapping[int, object], labels=None) -> FiniteMetricSpace:
    """Left-invariant word metric of a finite group.

    ``table[a][b]`` is the product ``a*b``; ``weights`` maps each generator
    to its length and must give a generator and its inverse the same length.
    """
    n = len(table)
    if any(len(row) != n for row in table):
        raise ValueError("Cayley table must be square")
    e = next((a for a in range(n) if all(table[a][b] == b for b in range(n))), None)
    if e is None:
        raise ValueError("Cayley table has no identity")
    inv = {}
    for a in range(n):
        inv[a] = next((b for b in range(n) if table[a][b] == e), None)
        if inv[a] is None:
            raise ValueError(f"element {a} has no inverse")
    w = {int(g): as_fraction(v) for g, v in weights.items()}
    for g, v in w.items():
        if v <= 0:
            raise ValueError("generator weights must be positive")
        if w.get(inv[g]) != v:
            raise ValueError(f"generator {g} and its inverse {inv[g]} need equal weights")
    # shortest words from the identity; d(a, b) = |a^-1 b|
    length = {e: Fraction(0)}
    heap = [(Fraction(0), e)]
    while heap:
        dist, a = heapq.heappop(heap)
        if dist > length[a]:
            continue
        for g, v in w.items():
            b = table[a][g]
            if b not in length or dist + v < length[b]:
                length[b] = dist + v
                heapq.heappush(heap, (dist + v, b))
    if len(length) != n:
        raise ValueError("generators do not generate the group")
    mat = [[length[table[inv[a]][b]] for b in range(n)] for a in range(n)]
    return validate(mat, labels)


def cyclic_group(n: int) -> FiniteMetricSpace:
    """``Z_n`` with generators ``+1, -1`` of length 1."""
    return word_metric(cyclic_group_table(n), {1 % n: 1, (n - 1) % n: 1})


def symmetric_group(k: int = 3) -> FiniteMetricSpace:
    """``S_k`` with every transposition of length 1."""
    table, perms = symmetric_group_table(k)
    transpositions = {}
    for i, p in enumerate(perms):
        if sum(1 for a, b in enumerate(p) if a != b) == 2:
            transpositions[i] = 1
    return word_metric(table, transpositions, ["".join(map(str, p)) for p in perms])
