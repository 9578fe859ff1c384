"""Independent test oracles.

Everything here deliberately avoids the library's own algorithms:
root counts come from plain sign-change bisection, high-precision
values from mpmath, norms from explicit facet enumeration.  Oracles
stay independent of the code paths they check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath


def eval_poly(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def bisect_roots(coeffs, lo=-1024, hi=1024, depth=60):
    """Approximate real roots of a squarefree integer polynomial by
    recursive sign-change bisection on a fine grid."""
    lo, hi = Fraction(lo), Fraction(hi)
    grid = 4096
    step = (hi - lo) / grid
    roots = []
    x = lo
    fx = eval_poly(coeffs, x)
    for _ in range(grid):
        y = x + step
        fy = eval_poly(coeffs, y)
        if fx == 0:
            roots.append((x, x))
        elif fx * fy < 0:
            a, b = x, y
            for _ in range(depth):
                m = (a + b) / 2
                fm = eval_poly(coeffs, m)
                if fm == 0:
                    a = b = m
                    break
                if eval_poly(coeffs, a) * fm < 0:
                    b = m
                else:
                    a = m
            roots.append((a, b))
        x, fx = y, fy
    if fx == 0:
        roots.append((x, x))
    return roots


def mp_poly_roots(coeffs, dps=60):
    """All complex roots via mpmath.polyroots at high precision."""
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c) for c in reversed(coeffs)]
        while cs and cs[0] == 0:
            cs.pop(0)
        if len(cs) <= 1:
            return []
        return mpmath.polyroots(cs, maxsteps=200, extraprec=200)


def mp_value(coords, alpha, dps=100):
    """Evaluate sum coords[i] * alpha**i at high precision."""
    with mpmath.workdps(dps):
        acc = mpmath.mpf(0)
        for c in reversed(coords):
            acc = acc * alpha + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
        return acc


def char_poly_cofactor(M):
    """det(xI - M) by symbolic cofactor expansion over exact polynomials
    (coefficient lists, lowest degree first)."""

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    def padd(a, b):
        n = max(len(a), len(b))
        return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                for i in range(n)]

    def pneg(a):
        return [-x for x in a]

    n = len(M)
    # entries of xI - M as polynomials
    E = [[([Fraction(-M[i][j])] if i != j else [Fraction(-M[i][j]), Fraction(1)])
          for j in range(n)] for i in range(n)]

    def det(rows, cols):
        if len(rows) == 1:
            return E[rows[0]][cols[0]]
        acc = [Fraction(0)]
        r = rows[0]
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = pmul(E[r][c], minor)
            acc = padd(acc, term if k % 2 == 0 else pneg(term))
        return acc

    return det(list(range(n)), list(range(n)))


def sym_norm_facets(vertices, x):
    """Minkowski norm w.r.t. the symmetric convex hull of `vertices`,
    by enumerating dual vertices: solutions y of y.v_i = +-1 on
    dim-subsets, feasible when |y.v_j| <= 1 for all j.

    Returns the exact norm max |y* . x|, or None if the hull is not
    full-dimensional (norm infinite off the span / ill-defined here).
    """
    dim = len(x)
    best = None
    gens = [tuple(v) for v in vertices]
    duals = []
    for subset in itertools.combinations(range(len(gens)), dim):
        for signs in itertools.product((1, -1), repeat=dim):
            A = [[signs[k] * gens[subset[k]][j] for j in range(dim)]
                 for k in range(dim)]
            b = [Fraction(1)] * dim
            y = _solve(A, b)
            if y is None:
                continue
            if all(abs(_dot(y, g)) <= 1 for g in gens):
                duals.append(y)
    if not duals:
        return None
    vals = [abs(_dot(y, x)) for y in duals]
    return max(vals)


def cone_norm_facets(vertices, x):
    """Norm w.r.t. the cone hull (first orthant) of nonnegative
    `vertices`: max y.x over {y >= 0 : y.v_i <= 1}, by vertex
    enumeration of the dual polyhedron."""
    dim = len(x)
    gens = [tuple(v) for v in vertices]
    rows = [list(g) for g in gens] + \
           [[Fraction(int(j == i)) for j in range(dim)] for i in range(dim)]
    rhs = [Fraction(1)] * len(gens) + [Fraction(0)] * dim
    best = Fraction(0)
    m = len(rows)
    for subset in itertools.combinations(range(m), dim):
        A = [rows[i] for i in subset]
        b = [rhs[i] for i in subset]
        y = _solve(A, b)
        if y is None:
            continue
        if any(c < 0 for c in y):
            continue
        if all(_dot(y, g) <= 1 for g in gens):
            v = _dot(y, x)
            if v > best:
                best = v
    return best


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _solve(A, b):
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]
