"""Exact-rational dense-tableau simplex.

Two entry points:

* simplex_solve: general two-phase solver over free variables, used by the
  dual-witness search and available for ad-hoc LPs.  Deterministic pivoting
  (Dantzig entering with a Bland anti-cycling fallback) guarantees
  termination; all arithmetic is exact.

* minimize_nonneg: one-phase specialization for systems A x <= b with b >= 0
  and x >= 0 (the fundamental-polytope stage LPs), where the slack basis is
  feasible.
"""
from __future__ import annotations

from .errors import Infeasible, Unbounded
from .rationals import QONE, QZERO, exactify

# consecutive degenerate pivots before switching Dantzig -> Bland
_STALL_LIMIT = 30


def _pivot(T, basis, r, e):
    piv = T[r][e]
    if piv != 1:
        inv = 1 / piv
        T[r] = [v * inv for v in T[r]]
    Tr = T[r]
    for i in range(len(T)):
        if i != r:
            f = T[i][e]
            if f != 0:
                Ti = T[i]
                T[i] = [a - f * b for a, b in zip(Ti, Tr)]
    basis[r] = e


def _run(T, basis, ncols, allowed, maxit=2_000_000):
    """Minimize the objective in the last row of T. Returns 'optimal' or
    raises Unbounded with the offending column attached."""
    m = len(T) - 1
    stall = 0
    use_bland = False
    for _ in range(maxit):
        obj = T[m]
        e = -1
        if use_bland:
            for j in range(ncols):
                if allowed[j] and j not in basis and obj[j] < 0:
                    e = j
                    break
        else:
            best = QZERO
            for j in range(ncols):
                if allowed[j] and obj[j] < best and j not in basis:
                    best = obj[j]
                    e = j
        if e < 0:
            return
        r = -1
        best_ratio = None
        for i in range(m):
            a = T[i][e]
            if a > 0:
                ratio = T[i][-1] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[r])):
                    best_ratio = ratio
                    r = i
        if r < 0:
            exc = Unbounded("objective unbounded")
            exc.column = e
            raise exc
        if best_ratio == 0:
            stall += 1
            if stall > _STALL_LIMIT:
                use_bland = True
        else:
            stall = 0
            use_bland = False
        _pivot(T, basis, r, e)
    raise RuntimeError("simplex iteration cap reached")


def _coeff_vector(coeffs, n):
    if isinstance(coeffs, dict):
        row = [QZERO] * n
        for j, v in coeffs.items():
            row[j] = exactify(v)
        return row
    row = [exactify(v) for v in coeffs]
    if len(row) != n:
        row += [QZERO] * (n - len(row))
    return row


def simplex_solve(inequalities, objective, equalities=(), maximize=False):
    """Solve min (or max) objective . x subject to
        sum coeffs . x <= rhs   for each inequality,
        sum coeffs . x  = rhs   for each equality,
    over free x.  Returns (optimal value, optimizer tuple), exact rationals.

    Raises Infeasible / Unbounded.  Constraints are (coeffs, rhs) pairs where
    coeffs is a dense sequence or a {var: coeff} dict.
    """
    c = [exactify(v) for v in objective]
    n = len(c)
    if maximize:
        c = [-v for v in c]
    rows = []
    for coeffs, rhs in inequalities:
        rows.append((_coeff_vector(coeffs, n), exactify(rhs), False))
    for coeffs, rhs in equalities:
        rows.append((_coeff_vector(coeffs, n), exactify(rhs), True))
    m = len(rows)
    # columns: x+ (n) | x- (n) | slack/surplus (one per inequality) | artificial
    n_slack = sum(1 for _, _, eq in rows if not eq)
    slack_ofs = 2 * n
    art_ofs = slack_ofs + n_slack
    art_count = 0
    slack_count = 0
    layout = []  # per row: (slack_col or None, art_col or None)
    for vec, rhs, eq in rows:
        flip = rhs < 0
        s_col = None
        a_col = None
        if not eq:
            s_col = slack_ofs + slack_count
            slack_count += 1
        if eq or flip:
            a_col = art_ofs + art_count
            art_count += 1
        layout.append((flip, s_col, a_col))
    ncols = art_ofs + art_count
    T = []
    basis = []
    for (vec, rhs, eq), (flip, s_col, a_col) in zip(rows, layout):
        sign = -1 if flip else 1
        row = [QZERO] * (ncols + 1)
        for j, v in enumerate(vec):
            if v != 0:
                row[j] = sign * v
                row[n + j] = -sign * v
        if s_col is not None:
            row[s_col] = sign * QONE
        if a_col is not None:
            row[a_col] = QONE
        row[-1] = sign * rhs
        T.append(row)
        basis.append(a_col if a_col is not None else s_col)
    if art_count:
        # phase 1: minimize sum of artificials, priced out against the basis
        obj = [QZERO] * (ncols + 1)
        for row, b in zip(T, basis):
            if b >= art_ofs:
                for k in range(ncols + 1):
                    if row[k]:
                        obj[k] -= row[k]
        for j in range(art_ofs, ncols):
            obj[j] += QONE
        T.append(obj)
        allowed = [True] * ncols
        _run(T, basis, ncols, allowed)
        if -T[m][-1] != 0:
            raise Infeasible("phase 1 optimum is positive")
        T.pop()
        # pivot artificials out of the basis; rows that cannot pivot are
        # redundant and dropped
        drop = []
        for i in range(m):
            if basis[i] >= art_ofs:
                e = next((j for j in range(art_ofs)
                          if T[i][j] != 0 and j not in basis), -1)
                if e >= 0:
                    _pivot(T, basis, i, e)
                else:
                    drop.append(i)
        for i in reversed(drop):
            T.pop(i)
            basis.pop(i)
        m = len(basis)
    # phase 2
    obj = [QZERO] * (ncols + 1)
    for j, v in enumerate(c):
        if v != 0:
            obj[j] += v
            obj[n + j] -= v
    for i, b in enumerate(basis):
        f = obj[b]
        if f != 0:
            row = T[i]
            for k in range(ncols + 1):
                if row[k]:
                    obj[k] -= f * row[k]
    T.append(obj)
    allowed = [j < art_ofs for j in range(ncols)]
    _run(T, basis, ncols, allowed)
    value = -T[m][-1]
    xs = [QZERO] * (2 * n)
    for i, b in enumerate(basis):
        if b < 2 * n:
            xs[b] = T[i][-1]
    point = tuple(xs[j] - xs[n + j] for j in range(n))
    if maximize:
        value = -value
    return value, point


def minimize_nonneg(rows, objective, n, maxit=2_000_000):
    """min objective . x  s.t.  sparse rows (<= rhs, rhs >= 0) and x >= 0.

    rows: (support, signs, rhs) triples with exact or integer entries.
    One-phase from the slack basis.  Returns (value, x tuple).
    Raises Unbounded with .column set to the runaway variable.
    """
    m = len(rows)
    ncols = n + m
    T = []
    for i, (sup, sgn, rhs) in enumerate(rows):
        row = [QZERO] * (ncols + 1)
        for j, s in zip(sup, sgn):
            row[j] = exactify(s)
        row[n + i] = QONE
        row[-1] = exactify(rhs)
        T.append(row)
    obj = [QZERO] * (ncols + 1)
    for j, v in enumerate(objective):
        obj[j] = exactify(v)
    T.append(obj)
    basis = list(range(n, n + m))
    _run(T, basis, ncols, [True] * ncols, maxit=maxit)
    xs = [QZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            xs[b] = T[i][-1]
    return -T[m][-1], tuple(xs)
