"""Discrete memoryless symmetric LLR-bounded channels and their distortions.

A channel is (labels, p, pairing): output distribution p given input 0 and a
pairing involution realizing the symmetry Pr(a|0) = Pr(a*|1).  Probabilities
are exact rationals; LLRs, the scaling constant c and the excess epsilon are
floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (AlphabetMismatch, InfeasibleDelta, InvalidParameter,
                     NonInvolutivePairing, PairingMismatch,
                     ProbabilitiesDoNotSumToOne, ZeroCapacityChannel,
                     ZeroProbabilitySymbol)
from .rationals import decimal_rat, rat


@dataclass(frozen=True)
class MsbChannel:
    labels: tuple[str, ...]
    p: tuple[Fraction, ...]
    pairing: tuple[int, ...]

    @property
    def alphabet_size(self) -> int:
        return len(self.labels)

    def llr_table(self) -> tuple[float, ...]:
        """LLR per symbol; antisymmetry L(a) = -L(a*) is exact because each
        unordered pair is evaluated once and negated for the partner."""
        size = len(self.p)
        table = [0.0] * size
        for a in range(size):
            b = self.pairing[a]
            if a < b:
                v = math.log(self.p[a] / self.p[b])
                table[a] = v
                table[b] = -v
            elif a == b:
                table[a] = 0.0
        return tuple(table)

    def llr(self, a: int) -> float:
        return self.llr_table()[a]

    def llr_bound(self) -> float:
        return max(abs(v) for v in self.llr_table())

    def sample_symbols(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n i.i.d. symbol indices ~ p (inverse-CDF on one uniform batch)."""
        cdf = np.cumsum(np.array([float(v) for v in self.p]))
        cdf[-1] = 1.0
        u = rng.random(n)
        return np.searchsorted(cdf, u, side="right").astype(np.int64)

    def sample_llr(self, n: int, rng: np.random.Generator) -> "LlrVector":
        idx = self.sample_symbols(n, rng)
        table = np.array(self.llr_table())
        return LlrVector(table[idx])


@dataclass(frozen=True)
class LlrVector:
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def shifted(self, eps: float) -> "LlrVector":
        return LlrVector(self.values - eps)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SigmaPartition:
    minus: tuple[int, ...]
    zero: tuple[int, ...]
    plus: tuple[int, ...]


@dataclass(frozen=True)
class DistortionCertificate:
    """Output of the distortion construction: L' = c*L with ||p-p'||_1 <= 2*delta.

    q is aligned with the alphabet and zero off the negative-LLR symbols;
    s = -E_{Z~q}[L(Z)] and epsilon = delta*s/(2*(1-delta)).
    """

    delta: Fraction
    c: float
    q: tuple[Fraction, ...]
    s: float
    epsilon: float
    distorted: MsbChannel


def new_channel(labels, p, pairing) -> MsbChannel:
    labels = tuple(str(x) for x in labels)
    probs = tuple(rat(v) for v in p)
    pairing = tuple(int(v) for v in pairing)
    size = len(labels)
    if size < 2 or len(probs) != size or len(pairing) != size:
        raise InvalidParameter("labels, p and pairing must have equal length >= 2")
    if sorted(pairing) != list(range(size)):
        raise NonInvolutivePairing("pairing is not a permutation of the alphabet")
    for a in range(size):
        if pairing[pairing[a]] != a:
            raise NonInvolutivePairing(f"pairing[pairing[{a}]] != {a}")
    for a, v in enumerate(probs):
        if v <= 0:
            raise ZeroProbabilitySymbol(
                f"p({labels[a]}) = {v}; zero probability means unbounded LLR")
    if sum(probs) != 1:
        raise ProbabilitiesDoNotSumToOne(f"sum p = {sum(probs)}")
    return MsbChannel(labels, probs, pairing)


def sigma_partition(ch: MsbChannel) -> SigmaPartition:
    minus, zero, plus = [], [], []
    for a in range(ch.alphabet_size):
        pa, pb = ch.p[a], ch.p[ch.pairing[a]]
        if pa < pb:
            minus.append(a)
        elif pa == pb:
            zero.append(a)
        else:
            plus.append(a)
    return SigmaPartition(tuple(minus), tuple(zero), tuple(plus))


def llr(ch: MsbChannel, a: int) -> float:
    return ch.llr(a)


def llr_bound(ch: MsbChannel) -> float:
    return ch.llr_bound()


def l1_distance(ch: MsbChannel, ch2: MsbChannel) -> Fraction:
    if ch.labels != ch2.labels:
        raise AlphabetMismatch("channels have different alphabets")
    if ch.pairing != ch2.pairing:
        raise PairingMismatch("channels have different pairing maps")
    return sum((abs(a - b) for a, b in zip(ch.p, ch2.p)), Fraction(0))


def sample_llr(ch: MsbChannel, n: int, rng: np.random.Generator) -> LlrVector:
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    return ch.sample_llr(n, rng)


# ------------------------------------------------------------- constructors

def bsc(beta) -> MsbChannel:
    b = decimal_rat(beta)
    if not 0 < b < Fraction(1, 2):
        raise InvalidParameter(f"crossover must be in (0, 1/2), got {b}")
    return new_channel(("0", "1"), (1 - b, b), (1, 0))


def _phi(t: float) -> float:
    return 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))


def quantized_awgn(sigma: float, bins_per_side: int, clip: float) -> MsbChannel:
    """Uniform quantization of y = 1 + sigma*z into 2*bins_per_side mirrored
    bins over [-clip, clip], outermost bins absorbing the Gaussian tails.

    The mirror-symmetric layout makes the pairing property exact: the density
    of Y given 0 at y equals the density given 1 at -y.
    """
    if sigma <= 0:
        raise InvalidParameter("sigma must be positive")
    if bins_per_side < 1:
        raise InvalidParameter("bins_per_side must be >= 1")
    if clip <= 0 and bins_per_side > 1:
        raise InvalidParameter("clip must be positive when bins_per_side > 1")
    B = bins_per_side
    edges = [clip * j / B for j in range(-B, B + 1)]
    edges[0], edges[-1] = -math.inf, math.inf
    masses = []
    labels = []
    for k in range(2 * B):
        lo, hi = edges[k], edges[k + 1]
        masses.append(_phi((hi - 1.0) / sigma) - _phi((lo - 1.0) / sigma))
        lo_s = "-inf" if lo == -math.inf else f"{lo:g}"
        hi_s = "+inf" if hi == math.inf else f"{hi:g}"
        labels.append(f"[{lo_s},{hi_s})")
    exact = [Fraction(m) for m in masses]
    total = sum(exact)
    if any(m <= 0 for m in exact):
        raise InvalidParameter("a quantization bin has zero mass; widen bins")
    probs = [m / total for m in exact]
    pairing = tuple(2 * B - 1 - k for k in range(2 * B))
    return new_channel(tuple(labels), tuple(probs), pairing)


# ----------------------------------------------------------- distortion

def s_of_c(ch: MsbChannel, c: float) -> float:
    """sum over negative-LLR symbols of p(a) * ((p(a*)/p(a))**(1-c) - 1).

    Strictly decreasing in c, with s(1) = 0 and s(0) = p(plus) - p(minus).
    """
    part = sigma_partition(ch)
    total = 0.0
    for a in part.minus:
        ratio = float(ch.p[ch.pairing[a]] / ch.p[a])
        total += float(ch.p[a]) * math.expm1((1.0 - c) * math.log(ratio))
    return total


def _capacity_gap(ch: MsbChannel) -> Fraction:
    """p(plus) - p(minus), exact."""
    part = sigma_partition(ch)
    pm = sum((ch.p[a] for a in part.minus), Fraction(0))
    pp = sum((ch.p[a] for a in part.plus), Fraction(0))
    return pp - pm


def solve_c(ch: MsbChannel, delta, tol_root: float = 1e-12, max_iter: int = 200) -> float:
    """Root of s(c) = delta/(1-delta) on (0,1), by bisection."""
    part = sigma_partition(ch)
    if not part.minus or not part.plus:
        raise ZeroCapacityChannel("no symbols with nonzero LLR")
    d = decimal_rat(delta)
    if not 0 < d < 1:
        raise InfeasibleDelta(f"delta must be in (0,1), got {d}")
    gap = _capacity_gap(ch)
    if d / (1 - d) >= gap:
        raise InfeasibleDelta(
            f"delta/(1-delta) = {d / (1 - d)} must be < p(plus)-p(minus) = {gap}")
    target = float(d / (1 - d))
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = s_of_c(ch, mid)
        if abs(val - target) <= tol_root and hi - lo <= 1e-9:
            return mid
        if val > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_delta(ch: MsbChannel, alpha) -> Fraction:
    """delta = min(alpha/2, g/(2*(1+g))) with g = p(plus)-p(minus).

    Satisfies both constraints of the construction with slack for every
    alpha > 0, and is deterministic.
    """
    a = decimal_rat(alpha)
    if a <= 0:
        raise InvalidParameter("alpha must be positive")
    gap = _capacity_gap(ch)
    if gap <= 0:
        raise ZeroCapacityChannel("no symbols with nonzero LLR")
    return min(a / 2, gap / (2 * (1 + gap)))


def distort(ch: MsbChannel, alpha, delta=None) -> DistortionCertificate:
    """Construct the LLR-scaling distortion: a channel ch' with the same
    pairing, ||p - p'||_1 <= 2*delta <= alpha and L' = c*L for c in (0,1)."""
    part = sigma_partition(ch)
    if not part.minus or not part.plus:
        raise ZeroCapacityChannel("no symbols with nonzero LLR")
    a = decimal_rat(alpha)
    if a <= 0:
        raise InvalidParameter("alpha must be positive")
    if delta is None:
        d = default_delta(ch, a)
    else:
        d = decimal_rat(delta)
        if not 0 < d <= a / 2:
            raise InfeasibleDelta(f"need 0 < delta <= alpha/2, got {d}")
        if d / (1 - d) >= _capacity_gap(ch):
            raise InfeasibleDelta("delta/(1-delta) >= p(plus)-p(minus)")
    c = solve_c(ch, d)
    # q from the per-symbol scaling equation, then exact renormalization so
    # that sum q = 1 holds exactly; the renormalization factor is 1 + O(tol).
    factor = float((1 - d) / d)
    q_float = {}
    for sym in part.minus:
        ratio = float(ch.p[ch.pairing[sym]] / ch.p[sym])
        val = factor * float(ch.p[sym]) * math.expm1((1.0 - c) * math.log(ratio))
        if val <= 0:
            raise InvalidParameter("alpha too small to represent the mixing "
                                   "distribution in float precision")
        q_float[sym] = val
    total = sum(Fraction(v) for v in q_float.values())
    q = tuple(Fraction(q_float[sym]) / total if sym in q_float else Fraction(0)
              for sym in range(ch.alphabet_size))
    p_prime = []
    for sym in range(ch.alphabet_size):
        if sym in q_float:
            p_prime.append(d * q[sym] + (1 - d) * ch.p[sym])
        else:
            p_prime.append((1 - d) * ch.p[sym])
    distorted = new_channel(ch.labels, tuple(p_prime), ch.pairing)
    table = ch.llr_table()
    s = -sum(float(q[sym]) * table[sym] for sym in part.minus)
    epsilon = s * float(d / (2 * (1 - d)))
    return DistortionCertificate(delta=d, c=c, q=q, s=s, epsilon=epsilon,
                                 distorted=distorted)


# --------------------------------------------------------- spec file format

def parse_channel_spec(text: str) -> MsbChannel:
    """Plain-text channel description:

        symbol <label> <probability>     (fraction n/d or decimal)
        pair <label> <label>

    Every symbol must appear in exactly one pair line; self-pairs allowed.
    """
    labels, probs = [], []
    pair_lines = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "symbol":
            if len(toks) != 3:
                raise InvalidParameter(f"line {ln}: expected 'symbol <label> <prob>'")
            if toks[1] in labels:
                raise InvalidParameter(f"line {ln}: duplicate symbol {toks[1]!r}")
            labels.append(toks[1])
            try:
                probs.append(Fraction(toks[2]))
            except (ValueError, ZeroDivisionError):
                raise InvalidParameter(f"line {ln}: bad probability {toks[2]!r}")
        elif toks[0] == "pair":
            if len(toks) != 3:
                raise InvalidParameter(f"line {ln}: expected 'pair <label> <label>'")
            pair_lines.append((ln, toks[1], toks[2]))
        else:
            raise InvalidParameter(f"line {ln}: unknown directive {toks[0]!r}")
    index = {lab: i for i, lab in enumerate(labels)}
    pairing = [None] * len(labels)
    for ln, x, y in pair_lines:
        if x not in index or y not in index:
            raise InvalidParameter(f"line {ln}: unknown symbol in pair")
        i, j = index[x], index[y]
        for k in (i, j):
            if pairing[k] is not None and pairing[k] != (j if k == i else i):
                raise InvalidParameter(f"line {ln}: symbol paired twice")
        pairing[i], pairing[j] = j, i
    if any(v is None for v in pairing):
        missing = [labels[i] for i, v in enumerate(pairing) if v is None]
        raise InvalidParameter(f"unpaired symbols: {missing}")
    return new_channel(labels, probs, pairing)


def format_channel_spec(ch: MsbChannel) -> str:
    lines = [f"symbol {lab} {p.numerator}/{p.denominator}"
             for lab, p in zip(ch.labels, ch.p)]
    for a in range(ch.alphabet_size):
        if ch.pairing[a] >= a:
            lines.append(f"pair {ch.labels[a]} {ch.labels[ch.pairing[a]]}")
    return "\n".join(lines) + "\n"
