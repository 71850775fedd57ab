"""Compare the numba and pure-numpy GF(2) row-space sweep kernels.

Run:  python benchmarks/bench_gf2_sweep.py
The numba path is what LPLAB_PURE_NUMPY=1 disables at import time.
"""
import time

import numpy as np

from lplab import kernels
from lplab.linear_code import gf2_row_basis


def bench(fn, basis, max_weight, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(basis, max_weight)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    rng = np.random.default_rng(1)
    print(f"numba available and enabled: {kernels.USE_NUMBA}")
    for rank, n, k in ((12, 24, 8), (18, 40, 10), (22, 48, 12), (24, 60, 12)):
        rows = []
        basis_list = []
        while len(basis_list) < rank:
            rows.append(int(rng.integers(1, 1 << n)))
            basis_list = gf2_row_basis(rows)
        basis = np.array(basis_list[:rank], dtype=np.uint64)
        t_np, res_np = bench(kernels._sweep_numpy, basis, k)
        line = f"rank={rank:2d} n={n:2d} wmax={k:2d}  numpy {t_np * 1e3:9.2f} ms"
        if kernels.USE_NUMBA:
            kernels._sweep_numba(basis[:2], k)  # warm the JIT
            t_nb, res_nb = bench(kernels._sweep_numba, basis, k)
            assert np.array_equal(res_np, res_nb)
            line += f"   numba {t_nb * 1e3:9.2f} ms   speedup {t_np / t_nb:5.1f}x"
        print(line)


if __name__ == "__main__":
    main()
