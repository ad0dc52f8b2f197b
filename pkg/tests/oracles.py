"""Independent reference solver for small equality-form integer programs.

Polyhedron generators come from cdd (floating point, then rationalized and
re-verified exactly).  The optimum is then found by plain iterative deepening
over compositions up to the completeness bound, with numpy filtering.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

import cdd
import numpy as np


def _rational(v):
    return Fraction(v).limit_denominator(10_000)


def generators(A, d, I):
    rows = [[-b] + list(r) for r, b in zip(A, d)]
    rows += [[0] + [int(i == j) for j in range(I)] for i in range(I)]
    mat = cdd.matrix_from_array(rows, rep_type=cdd.RepType.INEQUALITY, lin_set=set(range(len(A))))
    gens = cdd.copy_generators(cdd.polyhedron_from_matrix(mat))
    verts, rays = [], []
    for g in gens.array:
        x = [_rational(v) for v in g[1:]]
        if g[0] > 0.5:
            # exact re-check of the rationalized vertex
            assert all(sum(a * v for a, v in zip(r, x)) == b for r, b in zip(A, d)), x
            assert all(v >= 0 for v in x)
            verts.append(x)
        else:
            den = lcm(*(v.denominator for v in x))
            ints = [int(v * den) for v in x]
            g_ = gcd(*ints)
            ints = [v // g_ for v in ints]
            assert all(sum(a * v for a, v in zip(r, ints)) == 0 for r in A), ints
            assert all(v >= 0 for v in ints)
            rays.append(ints)
    assert not gens.lin_set, "nonnegative orthant has no lines"
    if not any(d):
        # a cone: cdd lists only its rays, the apex is the origin
        verts = [[Fraction(0)] * I]
    return verts, rays


def completeness_bound(A, d, I):
    """None when even the rational relaxation is empty."""
    verts, rays = generators(A, d, I)
    if not verts:
        return None
    return int(max(sum(v) for v in verts) + sum(sum(r) for r in rays))


def compositions_array(t, parts):
    if parts == 1:
        return np.array([[t]], dtype=np.int64)
    bars = np.array(list(combinations(range(t + parts - 1), parts - 1)), dtype=np.int64)
    if bars.size == 0:
        return np.zeros((1, parts), dtype=np.int64)
    edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), t + parts - 1)])
    return np.diff(edges, axis=1) - 1


def brute_force(A, d, I):
    """("infeasible", None, set()) or ("optimal", t*, solutions)."""
    if not A:
        return "optimal", 0, {(0,) * I}
    T = completeness_bound(A, d, I)
    if T is None:
        return "infeasible", None, set()
    An, dn = np.array(A, dtype=np.int64), np.array(d, dtype=np.int64)
    for t in range(T + 1):
        Y = compositions_array(t, I)
        hit = np.all(Y @ An.T == dn, axis=1)
        if hit.any():
            return "optimal", t, {tuple(int(v) for v in y) for y in Y[hit]}
    return "infeasible", None, set()


def random_instance(rng):
    I = rng.randint(1, 6)
    m = rng.randint(1, 4)
    A = [[rng.choice((-1, 0, 1)) for _ in range(I)] for _ in range(m)]
    if rng.random() < 0.5:
        while True:
            y0 = [rng.randint(0, 3) for _ in range(I)]
            d = [sum(a * v for a, v in zip(r, y0)) for r in A]
            if all(abs(v) <= 6 for v in d):
                break
    else:
        d = [rng.randint(-6, 6) for _ in range(m)]
    return A, d, I
