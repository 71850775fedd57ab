"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The only loop in the package that is both numeric and hot is the row-space
sweep enumerating dual codewords (2**rank combinations of basis rows).  For
blocklengths up to 64 the rows fit in uint64 words and the sweep runs either
as an @njit Gray-code loop or as a vectorized numpy block-doubling pass.

Selection: numba is used when importable unless LPLAB_PURE_NUMPY=1 is set.
``benchmarks/bench_gf2_sweep.py`` compares the two paths.
"""
from __future__ import annotations

import os

import numpy as np

USE_NUMBA = False
if not os.environ.get("LPLAB_PURE_NUMPY"):
    try:
        from numba import njit

        USE_NUMBA = True
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def _sweep_numpy(basis: np.ndarray, max_weight: int) -> np.ndarray:
    """All nonzero XOR combinations of basis words with popcount <= max_weight.

    Block doubling: after processing row j the array holds all combinations
    of rows 0..j.  Memory is 8 * 2**rank bytes, fine for the rank <= 24 cap.
    """
    combos = np.zeros(1, dtype=np.uint64)
    for w in basis:
        combos = np.concatenate([combos, combos ^ w])
    weights = np.bitwise_count(combos)
    keep = combos[(weights <= max_weight) & (combos != 0)]
    keep.sort()
    return keep


def _sweep_gray(basis: np.ndarray, max_weight: int, out: np.ndarray) -> int:
    r = basis.shape[0]
    total = np.uint64(1) << np.uint64(r)
    acc = np.uint64(0)
    count = 0
    c = np.uint64(1)
    while c < total:
        # index of lowest set bit of c = row toggled by the Gray step
        j = 0
        while not (c >> np.uint64(j)) & np.uint64(1):
            j += 1
        acc ^= basis[j]
        w = 0
        v = acc
        while v:
            v &= v - np.uint64(1)
            w += 1
        if w <= max_weight:
            out[count] = acc
            count += 1
        c += np.uint64(1)
    return count


if USE_NUMBA:
    _sweep_gray_jit = njit(cache=False, nogil=True)(_sweep_gray)


def _sweep_numba(basis: np.ndarray, max_weight: int) -> np.ndarray:
    out = np.empty((1 << basis.shape[0]) - 1, dtype=np.uint64)
    count = _sweep_gray_jit(basis, max_weight, out)
    res = out[:count]
    res.sort()
    return res


def rowspace_sweep(basis_rows, max_weight: int) -> list[int]:
    """Nonzero words of the GF(2) span of basis_rows with weight <= max_weight.

    basis_rows: iterable of ints (bitmasks) assumed linearly independent.
    Returns sorted python ints.  Falls back to pure-python big-int Gray code
    when any row needs more than 64 bits.
    """
    rows = list(basis_rows)
    if not rows:
        return []
    if max(rows) < (1 << 64):
        basis = np.array(rows, dtype=np.uint64)
        if USE_NUMBA:
            found = _sweep_numba(basis, max_weight)
        else:
            found = _sweep_numpy(basis, max_weight)
        return [int(v) for v in found]
    acc = 0
    found = []
    for c in range(1, 1 << len(rows)):
        acc ^= rows[(c & -c).bit_length() - 1]
        if acc.bit_count() <= max_weight:
            found.append(acc)
    found.sort()
    return found
