"""Dual witnesses on Tanner graphs: verification, LP search, superposition,
and the trim/repair machinery for redundant-check graphs.

A witness is an edge-weight map w with, inside every check, all pairwise
sums w(i,j) + w(i',j) >= 0, and per-variable flow F_i(w) = sum_j w(i,j)
strictly below the LLR l_i.  Negative edge weights are help received by a
variable, positive weights are help paid to the check; trimming accounts
received help as max(-w, 0).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import LlrVector
from .errors import GraphMismatch, InvalidParameter, KBelowMaxOriginalDegree
from .linear_code import TannerGraph, max_check_degree
from .rationals import QZERO, exactify, quantize_vector
from .simplex import simplex_solve

Edge = tuple[int, int]  # (variable, check index)


@dataclass(frozen=True)
class DualWitness:
    graph: TannerGraph
    w: dict  # Edge -> exact rational

    def weight(self, i: int, j: int):
        return self.w.get((i, j), QZERO)


@dataclass(frozen=True)
class TrimReport:
    removed_checks: tuple[int, ...]
    removed_flow: tuple          # per-variable help received from removed checks
    risky: tuple[int, ...]       # variables with removed help >= eps/2
    bound_rhs: float             # 2 n ||L||_inf / (eps (k-1))
    bound_holds: bool
    inflow_to_vplus: tuple[int, ...] | None = None    # primitivity diagnostics
    outflow_from_vminus: tuple[int, ...] | None = None

    @property
    def flagged(self) -> bool:
        return not self.bound_holds


def _as_exact_weights(graph: TannerGraph, w) -> dict:
    out = {}
    for j, sup in enumerate(graph.checks):
        for i in sup:
            v = w.get((i, j), 0) if isinstance(w, dict) else w[(i, j)]
            out[(i, j)] = exactify(v)
    return out


def make_witness(graph: TannerGraph, w) -> DualWitness:
    """Build a witness from any mapping defined on the graph's edges."""
    return DualWitness(graph, _as_exact_weights(graph, w))


def flow(witness: DualWitness):
    """Per-variable sum of incident edge weights."""
    F = [QZERO] * witness.graph.n
    for (i, _j), v in witness.w.items():
        F[i] += v
    return tuple(F)


def pairwise_ok(witness: DualWitness) -> bool:
    """All pairwise sums within each check are >= 0 (checked via the two
    smallest weights per check)."""
    for j, sup in enumerate(witness.graph.checks):
        if len(sup) < 2:
            continue
        vals = sorted(witness.weight(i, j) for i in sup)
        if vals[0] + vals[1] < 0:
            return False
    return True


def verify_witness(witness: DualWitness, l) -> bool:
    """Exact check of the pairwise constraints and strict flow domination."""
    lq = _exact_llr(witness.graph.n, l)
    if not pairwise_ok(witness):
        return False
    return all(f < v for f, v in zip(flow(witness), lq))


def _exact_llr(n: int, l) -> tuple:
    vals = getattr(l, "values", l)
    if isinstance(vals, np.ndarray):
        out = quantize_vector(vals)
    else:
        vals = list(vals)
        if any(isinstance(v, float) for v in vals):
            out = quantize_vector([float(v) for v in vals])
        else:
            out = tuple(exactify(v) for v in vals)
    if len(out) != n:
        raise GraphMismatch(f"llr length {len(out)} != {n} variables")
    return out


def find_witness(graph: TannerGraph, l):
    """Max-slack witness search: maximize t subject to the pairwise
    constraints and F_i(w) <= l_i - t.  Returns (DualWitness, slack) with
    slack > 0, or None when no witness exists.

    The slack variable is capped at max|l| + 1 so degree-1 checks (which
    leave edge weights unbounded below) cannot make the LP unbounded; the
    cap never changes whether the optimum is positive.
    """
    lq = _exact_llr(graph.n, l)
    edges = graph.edges
    col = {e: k for k, e in enumerate(edges)}
    nv = len(edges) + 1
    t_col = len(edges)
    ineqs = []
    for j, sup in enumerate(graph.checks):
        for a in range(len(sup)):
            for b in range(a + 1, len(sup)):
                ineqs.append(({col[(sup[a], j)]: -1, col[(sup[b], j)]: -1}, 0))
    for i in range(graph.n):
        coeffs = {col[(i, j)]: 1 for j, sup in enumerate(graph.checks) if i in sup}
        coeffs[t_col] = 1
        ineqs.append((coeffs, lq[i]))
    cap = max(abs(v) for v in lq) + 1
    ineqs.append(({t_col: 1}, cap))
    objective = [0] * nv
    objective[t_col] = 1
    value, point = simplex_solve(ineqs, objective, maximize=True)
    if value <= 0:
        return None
    w = {e: point[col[e]] for e in edges}
    return DualWitness(graph, w), value


def superpose(w1: DualWitness, w2: DualWitness) -> DualWitness:
    """Edge-wise sum; witnesses for l1 and l2 sum to a witness for l1+l2."""
    if w1.graph.n != w2.graph.n or w1.graph.checks != w2.graph.checks:
        raise GraphMismatch("superpose requires the same Tanner graph")
    w = {e: w1.weight(*e) + w2.weight(*e) for e in w1.graph.edges}
    return DualWitness(w1.graph, w)


def extend_by_zeros(witness: DualWitness, super_graph: TannerGraph) -> DualWitness:
    """Re-home a witness onto a graph containing the same checks (matched by
    support), zero on all other edges."""
    if super_graph.n != witness.graph.n:
        raise GraphMismatch("different blocklengths")
    target = {sup: j for j, sup in enumerate(super_graph.checks)}
    w = {}
    for j, sup in enumerate(witness.graph.checks):
        if sup not in target:
            raise GraphMismatch(f"check {sup} missing from the target graph")
        jj = target[sup]
        for i in sup:
            w[(i, jj)] = witness.weight(i, j)
    for e in super_graph.edges:
        w.setdefault(e, QZERO)
    return DualWitness(super_graph, w)


def trim(witness: DualWitness, k: int, eps, llr_inf: float, l=None):
    """Remove all checks of degree > k; report the risky set and the
    2n||L||inf/(eps(k-1)) bound.

    Risky variables received at least eps/2 help (negative weight mass) from
    removed checks.  When the original LLR vector is supplied the report also
    records the primitivity diagnostics: help received by variables with
    positive shifted LLR and payments made by the others.
    """
    graph = witness.graph
    eq = exactify(eps)
    if eq <= 0:
        raise InvalidParameter("eps must be positive")
    if graph.source_max_degree is not None and k < graph.source_max_degree:
        raise KBelowMaxOriginalDegree(
            f"k = {k} below the base graph max check degree "
            f"{graph.source_max_degree}")
    kept_idx = [j for j, sup in enumerate(graph.checks) if len(sup) <= k]
    removed_idx = [j for j, sup in enumerate(graph.checks) if len(sup) > k]
    kept_graph = TannerGraph(graph.n,
                             tuple(graph.checks[j] for j in kept_idx),
                             source_max_degree=graph.source_max_degree)
    w = {}
    for new_j, j in enumerate(kept_idx):
        for i in graph.checks[j]:
            w[(i, new_j)] = witness.weight(i, j)
    trimmed = DualWitness(kept_graph, w)
    help_removed = [QZERO] * graph.n
    for j in removed_idx:
        for i in graph.checks[j]:
            v = witness.weight(i, j)
            if v < 0:
                help_removed[i] -= v
    half = eq / 2
    risky = tuple(i for i in range(graph.n) if help_removed[i] >= half)
    if k <= 1:
        bound_rhs = float("inf")
    else:
        bound_rhs = 2.0 * graph.n * float(llr_inf) / (float(eq) * (k - 1))
    report_extra = {}
    if l is not None:
        lq = _exact_llr(graph.n, l)
        vplus = [i for i in range(graph.n) if lq[i] - eq > 0]
        vminus = [i for i in range(graph.n) if lq[i] - eq <= 0]
        inflow = [i for i in vplus
                  if any(witness.weight(i, j) < 0
                         for j, sup in enumerate(graph.checks) if i in sup)]
        outflow = [i for i in vminus
                   if any(witness.weight(i, j) > 0
                          for j, sup in enumerate(graph.checks) if i in sup)]
        report_extra = dict(inflow_to_vplus=tuple(inflow),
                            outflow_from_vminus=tuple(outflow))
    report = TrimReport(removed_checks=tuple(removed_idx),
                        removed_flow=tuple(help_removed),
                        risky=risky,
                        bound_rhs=bound_rhs,
                        bound_holds=len(risky) <= bound_rhs,
                        **report_extra)
    return trimmed, report


def build_tau(risky, eps: float, llr_inf: float, n: int) -> LlrVector:
    """The asymmetric repair vector: -||L||inf on risky variables, eps/2
    elsewhere."""
    tau = np.full(n, eps / 2.0)
    for i in risky:
        tau[i] = -llr_inf
    return LlrVector(tau)


def repair_pipeline(G: TannerGraph, G_k: TannerGraph, witness: DualWitness,
                    l, eps, llr_inf: float):
    """Trim a witness for l - eps*1 down to the degree-<=k graph, patch the
    risky variables with a witness for the repair vector found on the base
    graph, and return the superposition when it verifies against l."""
    k = max(max_check_degree(G_k), max_check_degree(G))
    trimmed, report = trim(witness, k, eps, llr_inf, l=l)
    if set(trimmed.graph.checks) != set(G_k.checks):
        raise GraphMismatch("trimmed witness does not live on the target graph")
    trimmed = extend_by_zeros(trimmed, G_k)
    tau = build_tau(report.risky, float(eps), llr_inf, G.n)
    found = find_witness(G, tau)
    if found is None:
        return None
    v, _slack = found
    vk = extend_by_zeros(v, G_k)
    candidate = superpose(trimmed, vk)
    return candidate if verify_witness(candidate, l) else None
