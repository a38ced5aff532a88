"""Exact rational linear programming over :class:`fractions.Fraction`.

Three entry points are used by the rest of the package:

* :func:`solve_lp` -- optimum and witness of a linear objective over an
  :class:`HPolytope`,
* :func:`optimal_face` -- the face of a polytope on which that optimum is
  attained,
* :func:`enumerate_vertices` -- the extreme points of a bounded polytope.

Everything is exact.  Equalities are removed by substitution into a reduced
coordinate system, after which the simplex (Bland's rule) runs on the dual
of the reduced problem and vertex enumeration runs a double description
pass.  A brute-force basis enumeration is kept as an independent check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]

DEFAULT_VERTEX_CAP = 200_000
DEFAULT_BASIS_CAP = 2_000_000


class LPError(Exception):
    """Base class for linear programming failures."""


class InfeasibleError(LPError):
    """The feasible region is empty."""


class UnboundedError(LPError):
    """The objective is unbounded over the feasible region."""


class UnboundedPolytopeError(LPError):
    """Vertex enumeration was asked for a region with a recession direction."""


class CapExceededError(LPError):
    """A combinatorial size bound was exceeded."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: {count} exceeds cap {cap}")
        self.what = what
        self.count = count
        self.cap = cap


def as_fraction(value) -> Fraction:
    """Convert ``value`` to a Fraction without ever going through a float.

    Accepts ints, Fractions, Decimals and strings such as ``"3/4"``,
    ``"-2"`` or ``"0.125"``.  Floats are rejected.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an exact rational")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def as_vector(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


@dataclass(frozen=True)
class HPolytope:
    """``{x : <a,x> <= b for inequalities, <a,x> = b for equalities}``.

    Constraint lists are deduplicated and sorted, so two polytopes built
    from the same constraints in a different order compare equal.
    """

    dim: int
    inequalities: tuple[tuple[Vector, Fraction], ...] = ()
    equalities: tuple[tuple[Vector, Fraction], ...] = ()

    def __post_init__(self):
        ineq = _canonical_rows(self.dim, self.inequalities)
        eq = _canonical_rows(self.dim, self.equalities)
        object.__setattr__(self, "inequalities", ineq)
        object.__setattr__(self, "equalities", eq)

    def contains(self, x: Sequence) -> bool:
        x = as_vector(x)
        if len(x) != self.dim:
            raise ValueError("point has wrong dimension")
        return all(_dot(a, x) <= b for a, b in self.inequalities) and all(
            _dot(a, x) == b for a, b in self.equalities
        )

    def with_constraints(self, inequalities=(), equalities=()) -> "HPolytope":
        return HPolytope(
            self.dim,
            self.inequalities + tuple(inequalities),
            self.equalities + tuple(equalities),
        )

    def is_empty(self) -> bool:
        try:
            solve_lp([0] * self.dim, "min", self)
        except InfeasibleError:
            return True
        return False


def _canonical_rows(dim, rows) -> tuple[tuple[Vector, Fraction], ...]:
    out = set()
    for a, b in rows:
        a = as_vector(a)
        if len(a) != dim:
            raise ValueError(f"constraint of length {len(a)} in a {dim}-dimensional polytope")
        out.add((a, as_fraction(b)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class VPolytope:
    dim: int
    vertices: tuple[Vector, ...]

    def __post_init__(self):
        verts = tuple(sorted({as_vector(v) for v in self.vertices}))
        for v in verts:
            if len(v) != self.dim:
                raise ValueError("vertex has wrong dimension")
        object.__setattr__(self, "vertices", verts)

    def __len__(self) -> int:
        return len(self.vertices)


# ---------------------------------------------------------------------------
# dense exact linear algebra


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``.

    Only the first ``ncols`` columns are used for pivoting (the rest ride
    along, which is how an augmented right-hand side is handled).
    """
    m = [list(map(as_fraction, r)) for r in rows]
    if not m:
        return [], []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [v / p for v in m[r]]
        row = m[r]
        nz = [j for j in range(width) if row[j]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                for j in nz:
                    mi[j] -= f * row[j]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r] + m[r:], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1]) if rows else 0


def solve_square(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``a x = b`` for square nonsingular ``a``; None if singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    m, piv = rref(aug, n)
    if len(piv) < n:
        return None
    return [m[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# standard-form simplex


@dataclass
class StandardFormResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: list[Fraction] | None = None
    basis: list[int] | None = None
    rows: list[int] | None = None  # original row index of each basis entry


def solve_standard_form(c, a_eq, b_eq) -> StandardFormResult:
    """Minimise ``c.x`` subject to ``A x = b, x >= 0`` with Bland's rule.

    Two-phase tableau simplex.  Rows that turn out to be linearly
    dependent are dropped after phase one; ``result.rows`` records which
    original rows the final basis is attached to.
    """
    c = as_vector(c)
    n = len(c)
    a = [as_vector(r) for r in a_eq]
    b = as_vector(b_eq)
    m = len(a)
    if any(len(r) != n for r in a) or len(b) != m:
        raise ValueError("inconsistent standard-form dimensions")
    if m == 0:
        if any(ci < 0 for ci in c):
            return StandardFormResult("unbounded")
        return StandardFormResult("optimal", Fraction(0), [Fraction(0)] * n, [], [])

    width = n + m + 1
    zero = Fraction(0)
    tab = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [sign * v for v in a[i]] + [zero] * m + [sign * b[i]]
        row[n + i] = Fraction(1)
        tab.append(row)
    basis = [n + i for i in range(m)]
    row_ids = list(range(m))

    # phase one: minimise the sum of artificials
    obj = [zero] * width
    for j in range(n, n + m):
        obj[j] = Fraction(1)
    for row in tab:
        for j in range(width):
            if row[j]:
                obj[j] -= row[j]
    status = _run_simplex(tab, basis, obj, n + m)
    assert status == "optimal"
    if -obj[-1] > 0:
        return StandardFormResult("infeasible")

    # drive degenerate artificials out; drop rows that cannot be pivoted
    i = 0
    while i < len(tab):
        if basis[i] >= n:
            j = next((j for j in range(n) if tab[i][j] != 0), None)
            if j is None:
                del tab[i], basis[i], row_ids[i]
                continue
            _pivot(tab, [obj], i, j)
            basis[i] = j
        i += 1
    for row in tab:
        del row[n:n + m]

    obj = list(c) + [zero]
    for i, row in enumerate(tab):
        cb = c[basis[i]]
        if cb:
            for j in range(n + 1):
                if row[j]:
                    obj[j] -= cb * row[j]
    status = _run_simplex(tab, basis, obj, n)
    if status == "unbounded":
        return StandardFormResult("unbounded")
    x = [zero] * n
    for i, j in enumerate(basis):
        x[j] = tab[i][-1]
    return StandardFormResult("optimal", -obj[-1], x, list(basis), list(row_ids))


def _pivot(tab, objs, r, s):
    row = tab[r]
    p = row[s]
    if p != 1:
        row = [v / p if v else v for v in row]
        tab[r] = row
    nz = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(tab):
        if i != r:
            f = other[s]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
    for other in objs:
        f = other[s]
        if f:
            for j in nz:
                other[j] -= f * row[j]


def _run_simplex(tab, basis, obj, ncols) -> str:
    while True:
        s = next((j for j in range(ncols) if obj[j] < 0), None)
        if s is None:
            return "optimal"
        best = None
        for i, row in enumerate(tab):
            if row[s] > 0:
                ratio = row[-1] / row[s]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        r = best[1]
        _pivot(tab, [obj], r, s)
        basis[r] = s


# ---------------------------------------------------------------------------
# reduced coordinates


@dataclass
class _Reduced:
    origin: Vector  # x0
    basis: list[Vector]  # columns of N, x = x0 + N z
    g: list[Vector]  # inequalities G z <= h
    h: list[Fraction]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def lift(self, z: Sequence[Fraction]) -> Vector:
        x = list(self.origin)
        for zk, col in zip(z, self.basis):
            if zk:
                for i, v in enumerate(col):
                    if v:
                        x[i] += zk * v
        return tuple(x)


def _reduce(P: HPolytope) -> _Reduced:
    n = P.dim
    origin = [Fraction(0)] * n
    if P.equalities:
        m, piv = rref([list(a) + [b] for a, b in P.equalities], n)
        for row in m[len(piv):]:
            if row[n] != 0:
                raise InfeasibleError("inconsistent equality constraints")
        free = [j for j in range(n) if j not in piv]
        for k, pc in enumerate(piv):
            origin[pc] = m[k][n]
        basis = []
        for f in free:
            col = [Fraction(0)] * n
            col[f] = Fraction(1)
            for k, pc in enumerate(piv):
                col[pc] = -m[k][f]
            basis.append(tuple(col))
    else:
        basis = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    origin = tuple(origin)
    g, h = [], []
    for a, b in P.inequalities:
        row = tuple(_dot(a, col) for col in basis)
        rhs = b - _dot(a, origin)
        if not any(row):
            if rhs < 0:
                raise InfeasibleError("constant inequality violated")
            continue
        g.append(row)
        h.append(rhs)
    return _Reduced(origin, basis, g, h)


# ---------------------------------------------------------------------------
# solve_lp


def _max_reduced(red: _Reduced, cz: Sequence[Fraction]):
    """Maximise ``cz.z`` over ``G z <= h``; returns ``(value, z)``.

    Solved through the dual ``min h.y : G^T y = cz, y >= 0``, which is the
    compact side when there are many constraints and few coordinates.
    """
    d = red.dim
    zero = Fraction(0)
    if d == 0:
        return zero, []
    if not red.g:
        if any(cz):
            raise UnboundedError("objective unbounded over the whole space")
        return zero, [zero] * d
    k = len(red.g)
    a_eq = [[red.g[j][i] for j in range(k)] for i in range(d)]
    res = solve_standard_form(red.h, a_eq, cz)
    if res.status == "unbounded":
        raise InfeasibleError("dual unbounded: region is empty")
    if res.status == "infeasible":
        # either primal infeasible or unbounded; decide with a zero objective
        if solve_standard_form(red.h, a_eq, [zero] * d).status == "unbounded":
            raise InfeasibleError("region is empty")
        raise UnboundedError("objective unbounded over the region")
    # simplex multipliers of the dual are the primal point
    kept = res.rows
    mat = [[a_eq[i][j] for i in kept] for j in res.basis]
    rhs = [red.h[j] for j in res.basis]
    sol = solve_square(mat, rhs) if mat else []
    assert sol is not None, "singular optimal basis"
    z = [zero] * d
    for i, v in zip(kept, sol):
        z[i] = v
    value = _dot(cz, z)
    assert value == res.value, "duality gap in LP solve"
    return value, z


def solve_lp(objective, sense: str, P: HPolytope) -> tuple[Fraction, Vector]:
    """Optimise a linear objective over ``P``.

    Returns ``(value, witness)`` with the witness a feasible point attaining
    the exact optimum.  Raises :class:`InfeasibleError` when ``P`` is empty
    and :class:`UnboundedError` when the objective is unbounded.

    >>> box = HPolytope(1, [((1,), 1), ((-1,), 0)])
    >>> solve_lp([1], "min", box)
    (Fraction(0, 1), (Fraction(0, 1),))
    """
    c = as_vector(objective)
    if len(c) != P.dim:
        raise ValueError("objective length does not match polytope dimension")
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    red = _reduce(P)
    sign = 1 if sense == "max" else -1
    cz = [sign * _dot(c, col) for col in red.basis]
    _, z = _max_reduced(red, cz)
    x = red.lift(z)
    return _dot(c, x), x


def optimal_face(objective, sense: str, P: HPolytope) -> HPolytope:
    """``P`` intersected with the hyperplane where the optimum is attained."""
    value, _ = solve_lp(objective, sense, P)
    c = as_vector(objective)
    if not any(c):
        return P
    return P.with_constraints(equalities=[(c, value)])


# ---------------------------------------------------------------------------
# vertex enumeration


def enumerate_vertices(P: HPolytope, method: str = "dd", cap: int | None = None) -> VPolytope:
    """All extreme points of a nonempty bounded polytope.

    ``method="dd"`` runs a double description pass; ``method="bases"``
    tries every choice of ``dim`` active constraints and keeps the feasible
    solutions.  The two share nothing but the equality elimination and are
    used to check each other.
    """
    red = _reduce(P)
    if method == "dd":
        zs = _dd_vertices(red, DEFAULT_VERTEX_CAP if cap is None else cap)
    elif method == "bases":
        zs = _basis_vertices(red, DEFAULT_BASIS_CAP if cap is None else cap)
    else:
        raise ValueError(f"unknown vertex enumeration method {method!r}")
    return VPolytope(P.dim, [red.lift(z) for z in zs])


def _primitive(v: list[Fraction]) -> tuple[Fraction, ...]:
    """Scale a nonzero vector so that its entries are coprime integers."""
    den = 1
    for x in v:
        if x:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(Fraction(x // g) for x in ints)


def _dd_vertices(red: _Reduced, cap: int) -> list[list[Fraction]]:
    d = red.dim
    if d == 0:
        return [[]]
    # homogenised rows a.y >= 0 with y = (y0, z)
    rows = {(Fraction(1),) + (Fraction(0),) * d}
    for g, h in zip(red.g, red.h):
        rows.add(_primitive([h] + [-v for v in g]))
    rows = sorted(rows, reverse=True)  # puts y0 >= 0 first
    rows.insert(0, rows.pop(rows.index((Fraction(1),) + (Fraction(0),) * d)))

    # initial simplicial cone from a maximal independent subset
    chosen = []
    for i, r in enumerate(rows):
        if rank([rows[j] for j in chosen] + [r]) > len(chosen):
            chosen.append(i)
            if len(chosen) == d + 1:
                break
    if len(chosen) < d + 1:
        # lineality space: either empty or unbounded
        if _is_empty(red):
            raise InfeasibleError("polytope is empty")
        raise UnboundedPolytopeError("polytope contains a line")

    m = [rows[i] for i in chosen]
    inv_cols = []
    for k in range(d + 1):
        e = [Fraction(int(i == k)) for i in range(d + 1)]
        inv_cols.append(solve_square(m, e))
    rays = []
    for k, col in enumerate(inv_cols):
        zset = 0
        for kk, i in enumerate(chosen):
            if kk != k:
                zset |= 1 << i
        rays.append((_primitive(col), zset))

    chosen_set = set(chosen)
    for i, a in enumerate(rows):
        if i in chosen_set:
            continue
        bit = 1 << i
        pos, neg, zer = [], [], []
        for ray in rays:
            s = _dot(a, ray[0])
            if s > 0:
                pos.append((ray, s))
            elif s < 0:
                neg.append((ray, s))
            else:
                zer.append(ray)
        if not neg:
            rays = [(r, z) for (r, z), _ in pos] + [(r, z | bit) for r, z in zer]
            continue
        new = [r for r, _ in pos] + [(r, z | bit) for r, z in zer]
        all_zsets = [z for _, z in rays]
        for (p, zp), sp in pos:
            for (q, zq), sq in neg:
                common = zp & zq
                if common.bit_count() < d - 1:
                    continue
                if any(
                    (zr & common) == common and zr != zp and zr != zq
                    for zr in all_zsets
                ):
                    continue
                comb = [sp * qv - sq * pv for pv, qv in zip(p, q)]
                new.append((_primitive(comb), common | bit))
        rays = new
        if len(rays) > cap:
            raise CapExceededError("double description rays", len(rays), cap)

    verts = []
    for r, _ in rays:
        if r[0] == 0:
            raise UnboundedPolytopeError("polytope has a recession direction")
        verts.append([v / r[0] for v in r[1:]])
    if not verts:
        raise InfeasibleError("polytope is empty")
    return verts


def _is_empty(red: _Reduced) -> bool:
    try:
        _max_reduced(red, [Fraction(0)] * red.dim)
    except InfeasibleError:
        return True
    return False


def _basis_vertices(red: _Reduced, cap: int) -> list[list[Fraction]]:
    d = red.dim
    if _is_empty(red):
        raise InfeasibleError("polytope is empty")
    if d == 0:
        return [[]]
    for i in range(d):
        for sgn in (1, -1):
            cz = [Fraction(sgn * int(k == i)) for k in range(d)]
            try:
                _max_reduced(red, cz)
            except UnboundedError:
                raise UnboundedPolytopeError("polytope has a recession direction") from None
    count = math.comb(len(red.g), d)
    if count > cap:
        raise CapExceededError("basis count", count, cap)
    found = set()
    for combo in itertools.combinations(range(len(red.g)), d):
        z = solve_square([red.g[i] for i in combo], [red.h[i] for i in combo])
        if z is None:
            continue
        if all(_dot(g, z) <= h for g, h in zip(red.g, red.h)):
            found.add(tuple(z))
    return [list(z) for z in found]
