"""Binary linear codes: parity-check matrices, Tanner graphs, dual codewords
and redundant-check graph constructions.

Bit-vectors are python ints; bit i corresponds to variable/column i.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CodeTooLarge, GraphMismatch, MalformedAlist, RowSpaceTooLarge
from .kernels import rowspace_sweep

RANK_CAP = 24      # 2**rank sweep limit for dual enumeration
DIM_CAP = 20       # 2**(n-rank) limit for codeword enumeration


def bits_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class ParityCheckMatrix:
    """m x n matrix over F2, rows stored as bitmasks."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("blocklength must be >= 1")
        for r in self.rows:
            if r == 0:
                raise ValueError("all-zero parity-check row")
            if r >> self.n:
                raise ValueError("row has bits beyond blocklength")

    @property
    def m(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite code representation: checks are sorted variable-index tuples.

    source_max_degree records the max check degree of the base graph when
    this graph was produced by a redundant-check construction; the trimming
    machinery uses it to enforce k >= d.
    """

    n: int
    checks: tuple[tuple[int, ...], ...]
    source_max_degree: int | None = field(default=None, compare=False)

    def __post_init__(self):
        for c in self.checks:
            if len(c) < 1:
                raise ValueError("empty check")
            if any(i < 0 or i >= self.n for i in c):
                raise ValueError("variable index out of range")

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """(variable, check-index) pairs."""
        return tuple((i, j) for j, sup in enumerate(self.checks) for i in sup)

    @property
    def edge_count(self) -> int:
        return sum(len(c) for c in self.checks)


def parity_check_matrix(n: int, rows) -> ParityCheckMatrix:
    """Rows given as bitmasks or iterables of column indices."""
    out = []
    for r in rows:
        out.append(r if isinstance(r, int) else mask_of(r))
    return ParityCheckMatrix(n, tuple(out))


def tanner_graph(H: ParityCheckMatrix) -> TannerGraph:
    return TannerGraph(H.n, tuple(bits_of(r) for r in H.rows))


def matrix_from_graph(G: TannerGraph) -> ParityCheckMatrix:
    return ParityCheckMatrix(G.n, tuple(mask_of(c) for c in G.checks))


def max_check_degree(G: TannerGraph) -> int:
    return max(len(c) for c in G.checks)


# ---------------------------------------------------------------- GF(2)

def gf2_row_basis(rows) -> list[int]:
    """Row-echelon basis of the span of the given bitmask rows."""
    basis = []
    for r in rows:
        for b in basis:
            low = b & -b
            if r & low:
                r ^= b
        if r:
            basis.append(r)
    basis.sort(key=lambda v: v & -v)
    return basis


def gf2_rank(rows) -> int:
    return len(gf2_row_basis(rows))


def dual_codewords_up_to_weight(H: ParityCheckMatrix, k: int) -> tuple[int, ...]:
    """All nonzero row-space elements of Hamming weight <= k, sorted."""
    basis = gf2_row_basis(H.rows)
    if len(basis) > RANK_CAP:
        raise RowSpaceTooLarge(
            f"row space rank {len(basis)} exceeds the 2**{RANK_CAP} sweep cap")
    return tuple(rowspace_sweep(basis, k))


def codewords(H: ParityCheckMatrix) -> tuple[int, ...]:
    """All codewords (H x = 0 over F2), via a nullspace basis sweep."""
    n = H.n
    basis = gf2_row_basis(H.rows)
    rank = len(basis)
    if n - rank > DIM_CAP:
        raise CodeTooLarge(f"code dimension {n - rank} exceeds the {DIM_CAP} cap")
    # bring to reduced form: eliminate pivot bits from other rows
    reduced = list(basis)
    for i, bi in enumerate(reduced):
        low = bi & -bi
        for j in range(len(reduced)):
            if j != i and reduced[j] & low:
                reduced[j] ^= bi
    pivots = [(b & -b).bit_length() - 1 for b in reduced]
    pivot_set = set(pivots)
    free_cols = [c for c in range(n) if c not in pivot_set]
    # nullspace basis: one generator per free column
    gens = []
    for c in free_cols:
        v = 1 << c
        for b, p in zip(reduced, pivots):
            if b & (1 << c):
                v |= 1 << p
        gens.append(v)
    words = [0]
    for g in gens:
        words += [w ^ g for w in words]
    words.sort()
    return tuple(words)


def _check_sort_key(mask: int):
    return bits_of(mask)


def redundant_graph(H: ParityCheckMatrix, k: int) -> TannerGraph:
    """Tanner graph whose checks are all dual codewords of weight <= k."""
    duals = dual_codewords_up_to_weight(H, k)
    checks = tuple(bits_of(m) for m in sorted(duals, key=_check_sort_key))
    base_d = max_check_degree(tanner_graph(H))
    return TannerGraph(H.n, checks, source_max_degree=base_d)


def full_redundant_graph(H: ParityCheckMatrix) -> TannerGraph:
    """Graph with one check per nonzero dual codeword."""
    return redundant_graph(H, H.n)


# ---------------------------------------------------------------- alist I/O

def from_alist(text: str) -> ParityCheckMatrix:
    """Parse the standard alist format (1-indexed, zero padding accepted)."""
    lines = text.splitlines()
    data = []
    for ln, raw in enumerate(lines, start=1):
        if raw.strip():
            try:
                data.append((ln, [int(t) for t in raw.split()]))
            except ValueError:
                raise MalformedAlist(ln, f"non-integer token in {raw.strip()!r}")
    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(data):
            last = data[-1][0] if data else 0
            raise MalformedAlist(last + 1, f"unexpected end of file, expected {what}")
        ln, row = data[pos]
        pos += 1
        return ln, row

    ln, head = take("n m header")
    if len(head) != 2 or head[0] < 1 or head[1] < 1:
        raise MalformedAlist(ln, "header must be two positive integers: n m")
    n, m = head
    take("max degrees")
    ln, col_degs = take("column degree list")
    if len(col_degs) != n:
        raise MalformedAlist(ln, f"expected {n} column degrees, got {len(col_degs)}")
    ln, row_degs = take("row degree list")
    if len(row_degs) != m:
        raise MalformedAlist(ln, f"expected {m} row degrees, got {len(row_degs)}")
    cols = []
    for j in range(n):
        ln, adj = take(f"adjacency of column {j + 1}")
        entries = [v for v in adj if v != 0]
        if len(entries) != col_degs[j]:
            raise MalformedAlist(ln, f"column {j + 1}: degree {col_degs[j]} "
                                     f"declared, {len(entries)} entries")
        if any(v < 1 or v > m for v in entries):
            raise MalformedAlist(ln, f"column {j + 1}: check index out of range")
        cols.append(entries)
    rows = [0] * m
    for i in range(m):
        ln, adj = take(f"adjacency of row {i + 1}")
        entries = [v for v in adj if v != 0]
        if len(entries) != row_degs[i]:
            raise MalformedAlist(ln, f"row {i + 1}: degree {row_degs[i]} "
                                     f"declared, {len(entries)} entries")
        if any(v < 1 or v > n for v in entries):
            raise MalformedAlist(ln, f"row {i + 1}: variable index out of range")
        for v in entries:
            rows[i] |= 1 << (v - 1)
    # cross-check the two adjacency blocks
    for j, entries in enumerate(cols):
        for ci in entries:
            if not rows[ci - 1] & (1 << j):
                raise MalformedAlist(0, f"column {j + 1} lists check {ci} "
                                        "but the row block disagrees")
    for i, r in enumerate(rows):
        if r == 0:
            raise MalformedAlist(0, f"row {i + 1} is all-zero")
    return ParityCheckMatrix(n, tuple(rows))


def to_alist(H: ParityCheckMatrix) -> str:
    n, m = H.n, H.m
    cols = [[] for _ in range(n)]
    rows = []
    for i, r in enumerate(H.rows):
        sup = bits_of(r)
        rows.append(sup)
        for j in sup:
            cols[j].append(i)
    out = [f"{n} {m}"]
    out.append(f"{max(len(c) for c in cols)} {max(len(r) for r in rows)}")
    out.append(" ".join(str(len(c)) for c in cols))
    out.append(" ".join(str(len(r)) for r in rows))
    for c in cols:
        out.append(" ".join(str(i + 1) for i in c))
    for r in rows:
        out.append(" ".join(str(j + 1) for j in r))
    return "\n".join(out) + "\n"


# ------------------------------------------------------- test constructions

def hamming_7_4() -> ParityCheckMatrix:
    return parity_check_matrix(7, [(0, 1, 2, 4), (1, 2, 3, 5), (0, 1, 3, 6)])


def single_check(n: int = 3) -> ParityCheckMatrix:
    return parity_check_matrix(n, [tuple(range(n))])


def repetition_code(n: int) -> ParityCheckMatrix:
    return parity_check_matrix(n, [(i, i + 1) for i in range(n - 1)])


def random_regular_ldpc(n: int, dv: int, dc: int, seed: int) -> ParityCheckMatrix:
    """Random (dv,dc)-regular Tanner graph without parallel edges."""
    import numpy as np

    if n * dv % dc:
        raise ValueError("n*dv must be divisible by dc")
    m = n * dv // dc
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), dv)
    for _ in range(10000):
        perm = rng.permutation(n * dv)
        checks = [[] for _ in range(m)]
        ok = True
        for slot, var in enumerate(stubs[perm]):
            j = slot // dc
            if var in checks[j]:
                ok = False
                break
            checks[j].append(int(var))
        if ok:
            return parity_check_matrix(n, [tuple(sorted(c)) for c in checks])
    raise RuntimeError("failed to sample a simple regular graph")


def require_same_graph(a: TannerGraph, b: TannerGraph):
    if a.n != b.n or a.checks != b.checks:
        raise GraphMismatch("operation requires identical Tanner graphs")
