"""Feldman LP relaxation of a Tanner graph and exact LP decoding.

Decoding success means the zero codeword is the *unique* optimum of
min <x, l> over the fundamental polytope P; ties at zero count as failure.
Inputs are rounded onto the 2**-40 rational grid (part of the experiment
definition) and every decision below is made in exact arithmetic.

Two engines cooperate:

* the literal two-stage test over the polytope rows (stage 1: min <x,l>;
  stage 2: max sum(x) among zero-value points), run directly at small scale
  and via delayed row generation at large scale;

* a certificate LP over the polytope's conic hull at the origin (the
  fundamental cone): max sum(x) s.t. x in cone, <l,x> <= 0, x <= 1 equals 0
  iff decoding succeeds.  Its dual has a nondegenerate all-slack start and a
  small tableau, which makes exact Monte Carlo at blocklength ~60 practical.
  Any x in the cone with coordinates <= 2/3 satisfies every odd-set row, so
  cone points scale into P and the equivalence with the two-stage test is
  exact (property-tested against the literal route).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CheckDegreeTooLarge, DimensionMismatch, InvalidParameter
from .linear_code import TannerGraph
from .rationals import QHALF, QONE, QZERO, exactify, quantize, quantize_vector
from .simplex import minimize_nonneg

MAX_CHECK_DEGREE = 12
_DENSE_ROW_CAP = 400       # above this, stage 1 uses row generation
_Q23 = exactify(2) / 3     # cone points below this coordinate bound lie in P

Row = tuple[tuple[int, ...], tuple[int, ...], int]  # support, signs, rhs


@dataclass(frozen=True)
class FundamentalPolytope:
    """A x <= b as sparse sign rows: odd-set rows per check plus box rows."""

    n: int
    checks: tuple[tuple[int, ...], ...]
    rows: tuple[Row, ...]

    @property
    def odd_set_row_count(self) -> int:
        return len(self.rows) - 2 * self.n


@dataclass(frozen=True)
class LpOutcome:
    success: bool
    optimal_value: object              # exact rational, 0 on success
    witness_point: tuple | None        # proves non-success when failure

    @property
    def status(self) -> str:
        return "success" if self.success else "failure"


def build_polytope(G: TannerGraph) -> FundamentalPolytope:
    """Odd-set inequalities sum_{i in S} x_i - sum_{i in N(j)\\S} x_i <= |S|-1
    for every check j and odd S, plus the box 0 <= x <= 1."""
    rows: list[Row] = []
    for sup in G.checks:
        d = len(sup)
        if d > MAX_CHECK_DEGREE:
            raise CheckDegreeTooLarge(
                f"check degree {d} exceeds cap {MAX_CHECK_DEGREE} "
                f"(2**{d - 1} inequalities per check)")
        for mask in range(1 << d):
            size = mask.bit_count()
            if size % 2 == 1:
                signs = tuple(1 if (mask >> t) & 1 else -1 for t in range(d))
                rows.append((tuple(sup), signs, size - 1))
    for i in range(G.n):
        rows.append(((i,), (1,), 1))
    for i in range(G.n):
        rows.append(((i,), (-1,), 0))
    return FundamentalPolytope(G.n, G.checks, tuple(rows))


def point_in_polytope(P: FundamentalPolytope, x) -> bool:
    """Exact membership test against every stored inequality."""
    xq = [exactify(v) for v in x]
    for sup, sgn, rhs in P.rows:
        if sum((s * xq[i] for s, i in zip(sgn, sup)), QZERO) > rhs:
            return False
    return True


def prepare_llr(P_or_n, values, bits: int = 40) -> tuple:
    """Exact decode input: floats are rounded onto the 2**-bits grid,
    rational-like entries pass through exactly."""
    n = P_or_n if isinstance(P_or_n, int) else P_or_n.n
    vals = getattr(values, "values", values)
    if isinstance(vals, np.ndarray):
        out = quantize_vector(vals, bits)
    else:
        vals = list(vals)
        if any(isinstance(v, float) for v in vals):
            out = quantize_vector([float(v) for v in vals], bits)
        else:
            out = tuple(exactify(v) for v in vals)
    if len(out) != n:
        raise DimensionMismatch(f"llr vector has length {len(out)}, expected {n}")
    return out


# ------------------------------------------------------ cone certificate LP

class _ConeCertificate:
    """Exact solver for: max sum(x) s.t. cone rows, <l,x> <= 0, x <= 1.

    Solved through its dual  min sum(u) s.t. C^T y + lambda*l + u - s = 1
    (all variables >= 0), whose all-u starting basis is feasible and
    nondegenerate.  A revised simplex keeps the basis inverse exact; Dantzig
    entering with the lexicographic leaving rule forbids cycling.  The simplex
    multipliers at optimality are the primal optimizer, so a failure comes
    with an exact nonzero cone point and value > 0.
    """

    def __init__(self, checks: tuple[tuple[int, ...], ...], n: int):
        self.n = n
        cols = []
        for j, sup in enumerate(checks):
            for i in sup:
                cols.append(tuple((t, QONE if t == i else -QONE) for t in sup))
        self.cone_cols = cols

    def solve(self, lq, maxit: int = 500_000):
        """Returns (value, point): value = max sum(x); point exact optimizer."""
        n = self.n
        lam_col = tuple((i, v) for i, v in enumerate(lq) if v != 0)
        cols = list(self.cone_cols)
        cols.append(lam_col)
        for i in range(n):
            cols.append(((i, -QONE),))     # s_i
        for i in range(n):
            cols.append(((i, QONE),))      # u_i
        cost_start = len(self.cone_cols) + 1 + n
        ncols = len(cols)
        basis = list(range(cost_start, cost_start + n))
        in_basis = [False] * ncols
        for j in basis:
            in_basis[j] = True
        Binv = [[QONE if i == k else QZERO for k in range(n)] for i in range(n)]
        xB = [QONE] * n
        for _ in range(maxit):
            pi = [QZERO] * n
            for i, bj in enumerate(basis):
                if bj >= cost_start:
                    row = Binv[i]
                    for k in range(n):
                        if row[k]:
                            pi[k] += row[k]
            e = -1
            best = QZERO
            for j in range(ncols):
                if in_basis[j]:
                    continue
                rc = -sum((v * pi[i] for i, v in cols[j]), QZERO)
                if j >= cost_start:
                    rc += QONE
                if rc < best:
                    best = rc
                    e = j
            if e < 0:
                value = sum((xB[i] for i, bj in enumerate(basis)
                             if bj >= cost_start), QZERO)
                return value, tuple(pi)
            t = [QZERO] * n
            for i, v in cols[e]:
                for k in range(n):
                    if Binv[k][i]:
                        t[k] += v * Binv[k][i]
            r = -1
            for i in range(n):
                if t[i] > 0:
                    if r < 0:
                        r = i
                        continue
                    a, b = xB[i] * t[r], xB[r] * t[i]
                    if a < b:
                        r = i
                    elif a == b:
                        for k in range(n):
                            a2, b2 = Binv[i][k] * t[r], Binv[r][k] * t[i]
                            if a2 != b2:
                                if a2 < b2:
                                    r = i
                                break
            if r < 0:
                raise RuntimeError("certificate LP unbounded; cone columns corrupt")
            tr = t[r]
            if tr != 1:
                inv = 1 / tr
                Binv[r] = [v * inv for v in Binv[r]]
                xB[r] *= inv
            Rr = Binv[r]
            xr = xB[r]
            for i in range(n):
                f = t[i]
                if i != r and f != 0:
                    Bi = Binv[i]
                    Binv[i] = [a - f * b for a, b in zip(Bi, Rr)]
                    xB[i] -= f * xr
            in_basis[basis[r]] = False
            in_basis[e] = True
            basis[r] = e
        raise RuntimeError("certificate LP iteration cap reached")


def _scale_into_polytope(point):
    """A nonzero cone point with coordinates <= 2/3 lies in P; rescale."""
    top = max(point)
    if top > _Q23:
        factor = _Q23 / top
        return tuple(v * factor for v in point)
    return tuple(point)


# ----------------------------------------------------------------- decoder

class LpDecoder:
    """Decoding session for one polytope: exact engines plus a status cache."""

    def __init__(self, P: FundamentalPolytope):
        self.P = P
        self.cert = _ConeCertificate(P.checks, P.n)
        self._status_cache: dict = {}
        # stage-1 rows: odd-set + upper box; x >= 0 is implicit in the solver
        self._stage1_rows = [r for r in P.rows if not (len(r[0]) == 1 and r[1][0] == -1)]
        self._cone_rows = [r for r in P.rows
                           if len(r[0]) > 1 and sum(r[1]) == 2 - len(r[0])]
        self._ub_rows = [((i,), (1,), 1) for i in range(P.n)]

    # ---- status-only fast path

    def status(self, lq) -> bool:
        key = tuple(lq)
        hit = self._status_cache.get(key)
        if hit is not None:
            return hit
        if all(v > 0 for v in lq):
            ok = True
        else:
            value, _ = self.cert.solve(lq)
            ok = value == 0
        self._status_cache[key] = ok
        return ok

    # ---- full outcome

    def outcome(self, lq) -> LpOutcome:
        v1, x1 = self._stage1(lq)
        if v1 < 0:
            return LpOutcome(False, v1, tuple(x1))
        value, point = self.cert.solve(lq)
        if value == 0:
            self._status_cache[tuple(lq)] = True
            return LpOutcome(True, QZERO, None)
        self._status_cache[tuple(lq)] = False
        return LpOutcome(False, QZERO, _scale_into_polytope(point))

    def _stage1(self, lq):
        if len(self._stage1_rows) <= _DENSE_ROW_CAP:
            return minimize_nonneg(self._stage1_rows, lq, self.P.n)
        return self._stage1_row_generation(lq)

    def _stage1_row_generation(self, lq):
        master = list(self._cone_rows) + list(self._ub_rows)
        seen = {(r[0], r[1]) for r in master}
        while True:
            value, x = minimize_nonneg(master, lq, self.P.n)
            new = []
            for sup in self.P.checks:
                row = _most_violated_odd_set(sup, x)
                if row is not None and (row[0], row[1]) not in seen:
                    new.append(row)
            if not new:
                return value, x
            for row in new:
                seen.add((row[0], row[1]))
                master.append(row)


def _most_violated_odd_set(sup, x) -> Row | None:
    """Most violated odd-set inequality of one check at point x, if any."""
    inside = [i for i in sup if x[i] > QHALF]
    if len(inside) % 2 == 0:
        # flip the element closest to 1/2 to fix parity
        best_cost = None
        flip = None
        for i in sup:
            cost = (x[i] - QHALF) if x[i] > QHALF else (QHALF - x[i])
            if best_cost is None or cost < best_cost:
                best_cost = cost
                flip = i
        if flip in inside:
            inside = [i for i in inside if i != flip]
        else:
            inside.append(flip)
    if not inside:
        return None
    s = set(inside)
    lhs = sum((x[i] if i in s else -x[i] for i in sup), QZERO)
    if lhs > len(inside) - 1:
        signs = tuple(1 if i in s else -1 for i in sup)
        return (tuple(sup), signs, len(inside) - 1)
    return None


_decoder_cache: dict[int, LpDecoder] = {}


def _decoder_for(P: FundamentalPolytope) -> LpDecoder:
    dec = _decoder_cache.get(id(P))
    if dec is None or dec.P is not P:
        dec = LpDecoder(P)
        _decoder_cache[id(P)] = dec
    return dec


def _shift(lq, eps) -> tuple:
    if eps == 0:
        return tuple(lq)
    e = quantize(eps) if isinstance(eps, float) else exactify(eps)
    return tuple(v - e for v in lq)


def decode(P: FundamentalPolytope, l, excess=0) -> LpOutcome:
    """Two-stage exact test: success iff min <x,l> over P is 0 and the zero
    vector is the unique zero-value point."""
    lq = _shift(prepare_llr(P, l), excess)
    return _decoder_for(P).outcome(lq)


def decode_with_excess(P: FundamentalPolytope, l, eps) -> LpOutcome:
    if exactify(eps) < 0:
        raise InvalidParameter("excess must be nonnegative")
    return decode(P, l, excess=eps)


def decode_status(P: FundamentalPolytope, l, excess=0) -> bool:
    lq = _shift(prepare_llr(P, l), excess)
    return _decoder_for(P).status(lq)


def in_fundamental_cone(P: FundamentalPolytope, l) -> bool:
    """Alias of decode success, in the cone-membership vocabulary."""
    return decode_status(P, l)


def decode_two_stage_reference(P: FundamentalPolytope, l, excess=0) -> LpOutcome:
    """Literal stage-2 over the polytope rows (max sum x among zero-value
    points), used to cross-validate the certificate engine."""
    lq = _shift(prepare_llr(P, l), excess)
    rows = [r for r in P.rows if not (len(r[0]) == 1 and r[1][0] == -1)]
    v1, x1 = minimize_nonneg(rows, lq, P.n)
    if v1 < 0:
        return LpOutcome(False, v1, tuple(x1))
    sup = tuple(i for i in range(P.n) if lq[i] != 0)
    tie_rows = rows + [(sup, tuple(lq[i] for i in sup), 0)]
    v2, x2 = minimize_nonneg(tie_rows, [-1] * P.n, P.n)
    if v2 == 0:
        return LpOutcome(True, QZERO, None)
    return LpOutcome(False, QZERO, tuple(x2))
