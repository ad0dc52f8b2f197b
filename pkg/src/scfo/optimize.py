"""Exact minimum-insertion solver for ``A y = d, y >= 0, y integer``.

Everything on the decision path is integer or rational arithmetic.  Layers,
cheapest first:

``rational``  the row-reduced system is inconsistent over Q
``unique``    full column rank: the single rational point decides
``lattice``   no integer point on the affine solution set (Hermite form)
``lp``        the LP relaxation over ``y >= 0`` is empty (no vertex)
``search``    bounded enumeration up to an a-priori bound on the optimum

The bound: write any feasible ``y`` as a convex combination of vertices plus a
nonnegative combination ``sum mu_r r`` of primitive integer extreme rays of
``{y >= 0 : A y = 0}``.  Subtracting ``floor(mu_r) r`` keeps ``y`` integral,
feasible and does not increase ``sum(y)``, so some optimum has
``sum(y) <= max_v sum(v) + sum_r sum(r)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Callable, Iterator, Sequence

from .encoding import IlpInstance

DEFAULT_MAX_POINTS = 2_000_000


class Status(str, Enum):
    INFEASIBLE = "infeasible"
    OPTIMAL = "optimal"


class IndeterminateError(RuntimeError):
    """The resource cap was hit before the instance was decided."""


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    objective: int | None = None
    solutions: tuple[tuple[int, ...], ...] = ()
    layer: str = ""
    bound: int | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.OPTIMAL


def _primitive(row: list[int]) -> tuple[int, ...]:
    g = 0
    for v in row:
        g = gcd(g, v)
    if g > 1:
        row = [v // g for v in row]
    return tuple(row)


class EqualitySystem:
    """Integer reduced row-echelon form, grown one equation at a time.

    Each stored row is primitive with a positive pivot and zeros in every other
    pivot column, so two systems with the same solution set have the same
    rows (``key``).  The last entry of a row is the right-hand side.
    """

    __slots__ = ("nvars", "rows", "consistent")

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: list[tuple[int, ...]] = []  # sorted by pivot column
        self.consistent = True

    def copy(self) -> "EqualitySystem":
        other = EqualitySystem.__new__(EqualitySystem)
        other.nvars = self.nvars
        other.rows = list(self.rows)
        other.consistent = self.consistent
        return other

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return [self._pivot(r) for r in self.rows]

    def _pivot(self, r) -> int:
        for c in range(self.nvars):
            if r[c]:
                return c
        raise AssertionError("zero row stored")

    def add(self, coeffs: Sequence[int], rhs: int) -> bool:
        """Add ``coeffs . y = rhs``; returns False once the system is inconsistent."""
        if not self.consistent:
            return False
        n = self.nvars
        row = list(coeffs) + [rhs]
        for r in self.rows:
            c = self._pivot(r)
            a = row[c]
            if a:
                p = r[c]
                row = [p * x - a * y for x, y in zip(row, r)]
        c = next((i for i in range(n) if row[i]), None)
        if c is None:
            if row[n]:
                self.consistent = False
                return False
            return True
        if row[c] < 0:
            row = [-x for x in row]
        new = _primitive(row)
        p = new[c]
        rows = []
        for r in self.rows:
            a = r[c]
            if a:
                r = _primitive([p * x - a * y for x, y in zip(r, new)])
                if r[self._pivot(r)] < 0:
                    r = tuple(-x for x in r)
            rows.append(r)
        rows.append(new)
        rows.sort(key=self._pivot)
        self.rows = rows
        return True

    def add_all(self, A: Sequence[Sequence[int]], d: Sequence[int]) -> bool:
        for row, rhs in zip(A, d):
            if not self.add(row, rhs):
                return False
        return self.consistent

    def key(self) -> tuple:
        return (self.nvars, tuple(self.rows)) if self.consistent else (self.nvars, None)

    def residual(self, y: Sequence[int]) -> bool:
        n = self.nvars
        return all(sum(r[i] * y[i] for i in range(n)) == r[n] for r in self.rows)


# -- lattice layer -------------------------------------------------------------


def integer_solution_lattice(rows: Sequence[Sequence[int]], nvars: int):
    """Integer points of ``R y = rhs`` for full-row-rank integer ``rows``.

    Reduces ``R`` by unimodular column operations to ``[H | 0]`` with ``H``
    lower triangular.  Returns ``(y0, basis)`` with every integer solution equal
    to ``y0 + basis @ z``, or ``None`` when there is no integer solution.
    """
    r = len(rows)
    M = [list(row[:nvars]) for row in rows]
    rhs = [row[nvars] for row in rows]
    U = [[int(i == j) for j in range(nvars)] for i in range(nvars)]

    def swap(a, b):
        for mat in (M, U):
            for line in mat:
                line[a], line[b] = line[b], line[a]

    def axpy(dst, src, q):  # column dst -= q * column src
        for mat in (M, U):
            for line in mat:
                line[dst] -= q * line[src]

    for i in range(r):
        while True:
            nz = [j for j in range(i, nvars) if M[i][j]]
            if not nz:
                raise ValueError("rows are not of full rank")
            jmin = min(nz, key=lambda j: abs(M[i][j]))
            if jmin != i:
                swap(i, jmin)
            clean = True
            for j in range(i + 1, nvars):
                if M[i][j]:
                    axpy(j, i, M[i][j] // M[i][i])
                    clean = clean and M[i][j] == 0
            if clean:
                break
    z = []
    for i in range(r):
        s = rhs[i] - sum(M[i][j] * z[j] for j in range(i))
        if s % M[i][i]:
            return None
        z.append(s // M[i][i])
    y0 = tuple(sum(U[k][j] * z[j] for j in range(r)) for k in range(nvars))
    basis = [tuple(U[k][j] for k in range(nvars)) for j in range(r, nvars)]
    return y0, basis


# -- LP geometry (exact) -------------------------------------------------------


def _solve_square(M: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(M)
    A = [row[:] + [v] for row, v in zip(M, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return None
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c] / piv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]


def vertices(system: EqualitySystem) -> list[tuple[Fraction, ...]]:
    """Basic feasible solutions of ``{y >= 0 : system}``; empty iff the LP is infeasible."""
    n, r = system.nvars, system.rank
    rows = system.rows
    out = set()
    for basis in itertools.combinations(range(n), r):
        M = [[Fraction(row[c]) for c in basis] for row in rows]
        sol = _solve_square(M, [Fraction(row[n]) for row in rows])
        if sol is None or any(v < 0 for v in sol):
            continue
        y = [Fraction(0)] * n
        for c, v in zip(basis, sol):
            y[c] = v
        out.add(tuple(y))
    return sorted(out)


def _kernel_vector(rows, cols) -> list[Fraction] | None:
    """The kernel vector of the column submatrix when the kernel is one-dimensional."""
    k = len(cols)
    A = [[Fraction(row[c]) for c in cols] for row in rows]
    piv_cols = []
    ri = 0
    for c in range(k):
        p = next((i for i in range(ri, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[ri], A[p] = A[p], A[ri]
        pv = A[ri][c]
        A[ri] = [x / pv for x in A[ri]]
        for i in range(len(A)):
            if i != ri and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[ri])]
        piv_cols.append(c)
        ri += 1
    free = [c for c in range(k) if c not in piv_cols]
    if len(free) != 1:
        return None
    f = free[0]
    v = [Fraction(0)] * k
    v[f] = Fraction(1)
    for i, c in enumerate(piv_cols):
        v[c] = -A[i][f]
    return v


def extreme_rays(system: EqualitySystem) -> list[tuple[int, ...]]:
    """Primitive integer extreme rays of ``{y >= 0 : A y = 0}`` (nonnegative circuits)."""
    n, r = system.nvars, system.rank
    rows = system.rows
    rays = set()
    for size in range(1, min(n, r + 1) + 1):
        for cols in itertools.combinations(range(n), size):
            v = _kernel_vector(rows, cols)
            if v is None or any(x == 0 for x in v):
                continue
            if all(x < 0 for x in v):
                v = [-x for x in v]
            elif not all(x > 0 for x in v):
                continue
            den = 1
            for x in v:
                den = den * x.denominator // gcd(den, x.denominator)
            full = [0] * n
            for c, x in zip(cols, v):
                full[c] = int(x * den)
            rays.add(_primitive(full))
    return sorted(rays)


def objective_bound(verts, rays) -> int:
    """Upper bound on the optimum of any feasible instance (see module docstring)."""
    return floor(max(sum(v) for v in verts) + sum(sum(r) for r in rays))


# -- enumeration ---------------------------------------------------------------


def compositions(t: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All nonnegative integer vectors of length ``parts`` summing to ``t``."""
    if parts == 0:
        if t == 0:
            yield ()
        return
    if parts == 1:
        yield (t,)
        return
    for first in range(t, -1, -1):
        for rest in compositions(t - first, parts - 1):
            yield (first,) + rest


def enumerate_solutions_at(inst: IlpInstance, t: int) -> list[tuple[int, ...]]:
    """Every ``y >= 0`` with ``sum(y) == t`` and ``A y == d``, by plain composition
    enumeration; sorted."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    A, d = inst.A, inst.d
    out = [
        y for y in compositions(t, inst.I)
        if all(sum(a * v for a, v in zip(row, y)) == rhs for row, rhs in zip(A, d))
    ]
    return sorted(out)


class _Param:
    """Pivot variables as integer-affine functions of the free variables."""

    def __init__(self, system: EqualitySystem):
        n = system.nvars
        self.n = n
        piv = system.pivots
        self.free = [c for c in range(n) if c not in piv]
        self.eqs = [(c, row[c], row[n], [row[f] for f in self.free])
                    for c, row in zip(piv, system.rows)]

    def complete(self, yf: Sequence[int]) -> tuple[int, ...] | None:
        y = [0] * self.n
        for f, v in zip(self.free, yf):
            y[f] = v
        for c, p, rhs, coef in self.eqs:
            num = rhs - sum(a * v for a, v in zip(coef, yf))
            if num < 0 or num % p:
                return None
            y[c] = num // p
        return tuple(y)


def _search(system: EqualitySystem, hi: int, max_points: int, lo: int = 0, exact: bool = False):
    """Points with the least objective in ``[lo, hi]`` (or all points at objective
    ``hi`` when ``exact``).  Returns ``(best, points)``; ``best`` is None if none."""
    param = _Param(system)
    k = len(param.free)
    best, found, seen = None, [], 0
    s = 0
    while s <= (hi if best is None else best):
        for yf in compositions(s, k):
            seen += 1
            if seen > max_points:
                raise IndeterminateError(f"enumeration exceeded {max_points} points (bound {hi})")
            y = param.complete(yf)
            if y is None:
                continue
            t = sum(y)
            if exact:
                if t == hi:
                    found.append(y)
                continue
            if t < lo or t > hi:
                continue
            if best is None or t < best:
                best, found = t, [y]
            elif t == best:
                found.append(y)
        s += 1
    if exact:
        return (hi if found else None), sorted(found)
    return best, sorted(found)


def solutions_at(system: EqualitySystem, t: int, max_points: int = DEFAULT_MAX_POINTS) -> list[tuple[int, ...]]:
    """All feasible points with ``sum(y) == t`` (free-variable enumeration)."""
    if not system.consistent:
        return []
    return _search(system, t, max_points, exact=True)[1]


# -- driver --------------------------------------------------------------------


@dataclass
class SolverStats:
    layers: dict[str, int] = field(default_factory=dict)

    def record(self, layer: str, count: int = 1) -> None:
        self.layers[layer] = self.layers.get(layer, 0) + count

    def merge(self, other: "SolverStats") -> None:
        for k, v in other.layers.items():
            self.record(k, v)


def solve_system(system: EqualitySystem, *, max_points: int = DEFAULT_MAX_POINTS,
                 trace: Callable[[str], None] | None = None) -> SolveOutcome:
    def done(out: SolveOutcome) -> SolveOutcome:
        if trace:
            trace(f"layer={out.layer} status={out.status.value} objective={out.objective} "
                  f"bound={out.bound} solutions={len(out.solutions)}")
        return out

    n = system.nvars
    if not system.consistent:
        return done(SolveOutcome(Status.INFEASIBLE, layer="rational"))
    if system.rank == 0:
        return done(SolveOutcome(Status.OPTIMAL, 0, ((0,) * n,), layer="empty", bound=0))
    if system.rank == n:
        y = _Param(system).complete(())
        if y is None:
            return done(SolveOutcome(Status.INFEASIBLE, layer="unique"))
        return done(SolveOutcome(Status.OPTIMAL, sum(y), (y,), layer="unique", bound=sum(y)))
    if integer_solution_lattice(system.rows, n) is None:
        return done(SolveOutcome(Status.INFEASIBLE, layer="lattice"))
    verts = vertices(system)
    if not verts:
        return done(SolveOutcome(Status.INFEASIBLE, layer="lp"))
    lo = ceil(min(sum(v) for v in verts))
    # an integral cheapest vertex is already optimal
    int_opt = [tuple(int(x) for x in v) for v in verts
               if sum(v) == lo and all(x.denominator == 1 for x in v)]
    if int_opt:
        _, sols = _search(system, lo, max_points, exact=True)
        return done(SolveOutcome(Status.OPTIMAL, lo, tuple(sols), layer="lp-integral", bound=lo))
    hi = objective_bound(verts, extreme_rays(system))
    if trace:
        trace(f"lp_lower={lo} upper_bound={hi}")
    best, sols = _search(system, hi, max_points, lo=lo)
    if best is None:
        return done(SolveOutcome(Status.INFEASIBLE, layer="search", bound=hi))
    return done(SolveOutcome(Status.OPTIMAL, best, tuple(sols), layer="search", bound=hi))


def system_of(inst: IlpInstance) -> EqualitySystem:
    system = EqualitySystem(inst.I)
    system.add_all(inst.A, inst.d)
    return system


def solve_min_insertion(inst: IlpInstance, *, max_points: int = DEFAULT_MAX_POINTS,
                        trace: Callable[[str], None] | None = None) -> SolveOutcome:
    """Minimum total insertion and every optimal insertion vector, or infeasibility."""
    if trace:
        for line in inst.to_text().splitlines():
            trace(line)
    if not inst.A:
        return SolveOutcome(Status.OPTIMAL, 0, ((0,) * inst.I,), layer="empty", bound=0)
    return solve_system(system_of(inst), max_points=max_points, trace=trace)
