"""Benchmark the numba quantile kernel against the pure-numpy fallback.

The projection-quantile refinement dominates rotationally symmetric sampling,
which in turn dominates Monte Carlo grids.  Run:

    python benchmarks/bench_kernels.py [--draws N]

The fallback path is always timed directly; the numba path is skipped when
HDUNIF_NO_NUMBA is set or numba is unavailable.  A full-replicate sampling
comparison is included so the end-to-end effect is visible too.
"""

import argparse
import time

import numpy as np

from hdunif import FvML, RotSymModel, sample_rot_sym
from hdunif._kernels import (_refine_quantiles_exp, _refine_quantiles_numpy,
                             numba_enabled)
from hdunif.distributions import _u_table
from hdunif.quadrature import gl_nodes


def time_call(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_quantiles(draws: int) -> None:
    rng = np.random.default_rng(0)
    qs = rng.random(draws)
    cases = [("uniform p=100", 100, 0.0), ("fvml p=100 k=5.7", 100, 5.692),
             ("fvml p=400 k=39", 400, 39.2)]
    glx, glw = gl_nodes(16)
    print(f"quantile refinement, {draws} draws (best of 5):")
    for label, p, kappa in cases:
        table = _u_table(FvML(kappa) if kappa else FvML(0.0), p)
        t_np = time_call(lambda: _refine_quantiles_numpy(
            qs, table.phi, table.cdf, table.log_density, 1e-12))
        line = f"  {label:22s} numpy {t_np * 1e3:8.1f} ms"
        if numba_enabled():
            args = (qs, table.phi, table.cdf, float(p), float(table.kappa),
                    float(table.log_dens_shift), glx, glw, 1e-12)
            _refine_quantiles_exp(*args)  # compile outside the timing
            t_nb = time_call(lambda: _refine_quantiles_exp(*args))
            line += f"   numba {t_nb * 1e3:8.1f} ms   speedup x{t_np / t_nb:.1f}"
        print(line)


def bench_sampling(replicates: int) -> None:
    n = p = 100
    model = RotSymModel(theta=np.eye(p)[0], radial=FvML(5.692))
    rng = np.random.default_rng(1)
    sample_rot_sym(model, n, rng)  # warm the table and kernel

    def run():
        r = np.random.default_rng(2)
        for _ in range(replicates):
            sample_rot_sym(model, n, r)

    path = "numba" if numba_enabled() else "numpy (HDUNIF_NO_NUMBA)"
    t = time_call(run, repeats=3)
    print(f"\n{replicates} replicates of an (n=p=100) FvML sample [{path} path]: "
          f"{t:.3f} s  ({replicates * n / t:,.0f} draws/s)")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--draws", type=int, default=200_000)
    parser.add_argument("--replicates", type=int, default=500)
    args = parser.parse_args()
    print(f"numba path enabled: {numba_enabled()}")
    bench_quantiles(args.draws)
    bench_sampling(args.replicates)
