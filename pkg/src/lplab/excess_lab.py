"""Monte Carlo harness: success-probability estimation, excess curves with
common random numbers, the distortion/Markov bound check, the AWGN coupling
check, and the redundant-check experiment.

All randomness flows through numpy SeedSequence spawn keys, so every
(experiment, stream) pair gets an independent, reproducible stream from one
master seed.  Per-trial LLR vectors are keyed by their symbol indices and
decode statuses are cached, which both deduplicates repeated patterns and
makes excess curves exactly monotone by construction of the shared draws.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import DistortionCertificate, MsbChannel, distort, llr_bound
from .errors import InvalidParameter
from .linear_code import (TannerGraph, full_redundant_graph, matrix_from_graph,
                          redundant_graph)
from .lp_decoder import LpDecoder, build_polytope, decode
from .rationals import quantize

_Z95 = 1.959963984540054  # two-sided 95% normal quantile


def stream(master_seed: int, *path: int) -> np.random.Generator:
    """Independent generator for a (master seed, experiment path) pair."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))


def wilson_interval(successes: int, trials: int, z: float = _Z95):
    """(center, halfwidth) of the Wilson score interval."""
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return center, half


@dataclass(frozen=True)
class SuccessEstimate:
    trials: int
    successes: int
    p_hat: float
    ci_halfwidth: float

    def interval(self) -> tuple[float, float]:
        center, half = wilson_interval(self.successes, self.trials)
        return center - half, center + half

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "SuccessEstimate":
        _, half = wilson_interval(successes, trials)
        return cls(trials, successes, successes / trials, half)


# ------------------------------------------------------------- sessions

class _Session:
    """Per (channel, graph) decode machinery with a byte-keyed status cache."""

    def __init__(self, ch: MsbChannel, G: TannerGraph):
        self.ch = ch
        self.G = G
        self.P = build_polytope(G)
        self.decoder = LpDecoder(self.P)
        self.llr_q = tuple(quantize(v) for v in ch.llr_table())
        self.cdf = np.cumsum([float(p) for p in ch.p])
        self.cdf[-1] = 1.0
        self.cache: dict = {}

    def draw_indices(self, trials: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random((trials, self.G.n))
        return np.searchsorted(self.cdf, u, side="right").astype(np.int64)

    def status_for_indices(self, idx_row: np.ndarray, eps_q) -> bool:
        key = (eps_q, idx_row.tobytes())
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        lq = tuple(self.llr_q[a] - eps_q for a in idx_row)
        ok = self.decoder.status(lq)
        self.cache[key] = ok
        return ok


_sessions: dict = {}


def _session(ch: MsbChannel, G: TannerGraph) -> _Session:
    key = (ch, G)
    sess = _sessions.get(key)
    if sess is None:
        sess = _Session(ch, G)
        _sessions[key] = sess
    return sess


# ------------------------------------------------------- success estimation

def estimate_success(ch: MsbChannel, G: TannerGraph, eps, trials: int,
                     seed: int, stream_id: int = 0) -> SuccessEstimate:
    """Fraction of i.i.d. LLR draws (all-zeros transmission) decoded
    successfully with the given excess."""
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    sess = _session(ch, G)
    idx = sess.draw_indices(trials, stream(seed, stream_id))
    eps_q = quantize(float(eps))
    successes = sum(sess.status_for_indices(idx[t], eps_q) for t in range(trials))
    return SuccessEstimate.from_counts(successes, trials)


def exhaustive_success_probability(ch: MsbChannel, G: TannerGraph, eps,
                                   pattern_cap: int = 200_000) -> Fraction:
    """Exact success probability: sum over all output patterns of the exact
    pattern probability times the decode indicator."""
    size = ch.alphabet_size
    if size ** G.n > pattern_cap:
        raise InvalidParameter(f"{size}**{G.n} patterns exceed the cap")
    sess = _session(ch, G)
    eps_q = quantize(float(eps))
    total = Fraction(0)
    for pattern in itertools.product(range(size), repeat=G.n):
        row = np.array(pattern, dtype=np.int64)
        if sess.status_for_indices(row, eps_q):
            prob = Fraction(1)
            for a in pattern:
                prob *= ch.p[a]
            total += prob
    return total


@dataclass(frozen=True)
class ExcessCurve:
    eps_grid: tuple[float, ...]
    estimates: tuple[SuccessEstimate, ...]
    indicators: np.ndarray = field(compare=False)  # trials x grid bool matrix


def excess_curve(ch: MsbChannel, G: TannerGraph, eps_grid, trials: int,
                 seed: int, stream_id: int = 0) -> ExcessCurve:
    """Success estimates over an ascending excess grid, with common random
    numbers: each trial's LLR draw is reused at every grid point, so the
    per-trial indicator (and hence the curve) is non-increasing exactly."""
    grid = [float(e) for e in eps_grid]
    if not grid:
        raise InvalidParameter("empty excess grid")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise InvalidParameter("excess grid must be sorted ascending")
    sess = _session(ch, G)
    idx = sess.draw_indices(trials, stream(seed, stream_id))
    ind = np.zeros((trials, len(grid)), dtype=bool)
    for k, eps in enumerate(grid):
        eps_q = quantize(eps)
        for t in range(trials):
            ind[t, k] = sess.status_for_indices(idx[t], eps_q)
    ests = tuple(SuccessEstimate.from_counts(int(ind[:, k].sum()), trials)
                 for k in range(len(grid)))
    return ExcessCurve(tuple(grid), ests, ind)


# --------------------------------------------------------- Markov bound

@dataclass(frozen=True)
class MarkovBoundReport:
    certificate: DistortionCertificate
    alpha: float
    trials: int
    lhs: SuccessEstimate     # success estimate on ch with excess epsilon
    rhs: SuccessEstimate     # success estimate on the distorted channel
    rhs_factor: float        # 2 ||L||inf / (delta s)
    lhs_hat: float           # estimated failure probability with excess
    rhs_hat: float           # rhs_factor * estimated distorted failure
    verdict: str             # holds | violated-within-ci | violated


def markov_bound_check(ch: MsbChannel, alpha, G: TannerGraph, trials: int,
                       seed: int) -> MarkovBoundReport:
    """Empirical check of: Pr[fail with excess eps on ch] is at most
    2||L||inf/(delta s) times Pr[fail on the distorted channel].

    The two sides use independent streams derived from the master seed.
    'holds' compares point estimates; 'violated-within-ci' flags a point
    violation still compatible with the Wilson intervals; 'violated' is a
    CI-robust violation, which the bound's derivation rules out and therefore
    indicates a bug rather than noise.
    """
    cert = distort(ch, alpha)
    lhs_est = estimate_success(ch, G, cert.epsilon, trials, seed, stream_id=1)
    rhs_est = estimate_success(cert.distorted, G, 0.0, trials, seed, stream_id=2)
    rhs_factor = 2.0 * llr_bound(ch) / (float(cert.delta) * cert.s)
    lhs_hat = 1.0 - lhs_est.p_hat
    rhs_hat = rhs_factor * (1.0 - rhs_est.p_hat)
    if lhs_hat <= rhs_hat:
        verdict = "holds"
    elif lhs_hat - lhs_est.ci_halfwidth <= rhs_hat + rhs_factor * rhs_est.ci_halfwidth:
        verdict = "violated-within-ci"
    else:
        verdict = "violated"
    return MarkovBoundReport(cert, float(alpha), trials, lhs_est, rhs_est,
                             rhs_factor, lhs_hat, rhs_hat, verdict)


# --------------------------------------------------------- AWGN coupling

@dataclass(frozen=True)
class AwgnCouplingReport:
    sigma: float
    sigma_prime: float
    epsilon: float
    trials: int
    boundary: int
    agreements: int          # over non-boundary trials
    max_identity_error: float
    success_rate_prime: float
    success_rate_shifted: float

    @property
    def agreement_rate(self) -> float:
        n = self.trials - self.boundary
        return 1.0 if n == 0 else self.agreements / n


_BOUNDARY_TOL = 2.0 ** -30


def awgn_coupling_check(sigma: float, sigma2: float, G: TannerGraph,
                        trials: int, seed: int) -> AwgnCouplingReport:
    """Couples the sigma'-AWGN receive vector with the sigma one through the
    identity (sigma/sigma') * (1 + sigma' z) = 1 + sigma z - eps, where
    eps = (sigma' - sigma)/sigma'.  Decode status of y' must match that of
    y - eps*1 trial by trial (the LLR map is a positive scaling of y, and
    decode status is scaling-invariant).

    Trials where either side's stage-1 optimum is nonzero but within 2**-30
    of 0 are tagged boundary and excluded from the equality count: float
    rounding can legitimately split such coupled pairs.
    """
    if not 0 < sigma < sigma2:
        raise InvalidParameter("need 0 < sigma < sigma2")
    eps = (sigma2 - sigma) / sigma2
    P = build_polytope(G)
    rng = stream(seed, 3)
    z = rng.standard_normal((trials, G.n))
    y_prime = 1.0 + sigma2 * z
    y_shift = (1.0 + sigma * z) - eps
    max_err = float(np.max(np.abs((sigma / sigma2) * y_prime - y_shift)))
    boundary = agreements = 0
    succ_a = succ_b = 0
    for t in range(trials):
        # exact dyadic inputs (no grid rounding): boundary detection reads
        # the stage-1 optimum of the unrounded vectors
        out_a = decode(P, [Fraction(v) for v in y_prime[t]])
        out_b = decode(P, [Fraction(v) for v in y_shift[t]])
        succ_a += out_a.success
        succ_b += out_b.success
        near = any(o.optimal_value != 0 and abs(float(o.optimal_value)) < _BOUNDARY_TOL
                   for o in (out_a, out_b))
        if near or (out_a.success != out_b.success
                    and out_a.optimal_value == out_b.optimal_value == 0):
            boundary += 1
        elif out_a.success == out_b.success:
            agreements += 1
    return AwgnCouplingReport(sigma, sigma2, eps, trials, boundary, agreements,
                              max_err, succ_a / trials, succ_b / trials)


# -------------------------------------------- redundant-check experiment

def application_k(d: int, eps: float, llr_inf: float, delta_strength: float) -> int:
    """k = max(d, ceil(2 ||L||inf / (eps * delta)) + 1)."""
    if d < 1 or eps <= 0 or llr_inf <= 0 or delta_strength <= 0:
        raise InvalidParameter("all arguments must be positive")
    return max(d, math.ceil(2.0 * llr_inf / (eps * delta_strength)) + 1)


@dataclass(frozen=True)
class RedundancyReport:
    k: int
    eps: float
    trials: int
    base_excess_successes: int   # full redundant graph decodes l - eps*1
    trimmed_successes: int       # degree-<=k graph decodes l
    violations: int              # first holds, second fails
    exhaustive: bool
    violation_probability: Fraction | None = None


def redundancy_experiment(ch: MsbChannel, G: TannerGraph, k: int, eps,
                          trials: int, seed: int,
                          exhaustive: bool = False) -> RedundancyReport:
    """Whenever the fully redundant graph decodes l - eps*1, check that the
    degree-<=k redundant graph decodes l; violations are counted, not
    asserted (the prediction is zero for k at the formula value, subject to
    the repair step succeeding)."""
    H = matrix_from_graph(G)
    G_bar = full_redundant_graph(H)
    G_k = redundant_graph(H, k)
    sess_bar = _session(ch, G_bar)
    sess_k = _session(ch, G_k)
    eps_q = quantize(float(eps))
    zero_q = quantize(0.0)
    a_count = b_count = violations = 0
    if exhaustive:
        size = ch.alphabet_size
        if size ** G.n > 200_000:
            raise InvalidParameter("pattern space too large for exhaustive mode")
        v_prob = Fraction(0)
        total = 0
        for pattern in itertools.product(range(size), repeat=G.n):
            row = np.array(pattern, dtype=np.int64)
            a = sess_bar.status_for_indices(row, eps_q)
            b = sess_k.status_for_indices(row, zero_q)
            a_count += a
            b_count += b
            total += 1
            if a and not b:
                violations += 1
                prob = Fraction(1)
                for s in pattern:
                    prob *= ch.p[s]
                v_prob += prob
        return RedundancyReport(k, float(eps), total, a_count, b_count,
                                violations, True, v_prob)
    idx = sess_bar.draw_indices(trials, stream(seed, 4))
    for t in range(trials):
        a = sess_bar.status_for_indices(idx[t], eps_q)
        b = sess_k.status_for_indices(idx[t], zero_q)
        a_count += a
        b_count += b
        if a and not b:
            violations += 1
    return RedundancyReport(k, float(eps), trials, a_count, b_count,
                            violations, False, None)


# ----------------------------------------------------------- configuration

@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed key=value experiment description; see README for the keys each
    subcommand requires."""

    channel: str | None = None
    alist: str | None = None
    eps: float = 0.0
    eps_grid: tuple[float, ...] = ()
    alpha: float | None = None
    trials: int = 1
    seed: int = 0
    output: str | None = None
    sigma: float | None = None
    sigma2: float | None = None
    k: int | None = None
    exhaustive: bool = False


def parse_experiment_config(text: str) -> ExperimentConfig:
    fields = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameter(f"config line {ln}: expected key=value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in ("channel", "alist", "output"):
                fields[key] = value
            elif key in ("eps", "alpha", "sigma", "sigma2"):
                fields[key] = float(value)
            elif key in ("trials", "seed", "k"):
                fields[key] = int(value)
            elif key == "eps_grid":
                fields[key] = tuple(float(t) for t in value.replace(",", " ").split())
            elif key == "exhaustive":
                fields[key] = value.lower() in ("1", "true", "yes")
            else:
                raise InvalidParameter(f"config line {ln}: unknown key {key!r}")
        except ValueError:
            raise InvalidParameter(f"config line {ln}: bad value for {key!r}")
    cfg = ExperimentConfig(**fields)
    if cfg.trials < 1:
        raise InvalidParameter("trials must be >= 1")
    if any(b < a for a, b in zip(cfg.eps_grid, cfg.eps_grid[1:])):
        raise InvalidParameter("eps_grid must be sorted ascending")
    return cfg
