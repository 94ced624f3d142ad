"""Hot numeric kernels: quantile refinement on tabulated projection CDFs.

Monte Carlo sampling of rotationally symmetric laws spends most of its time
inverting the CDF of u = X'theta for every draw.  The inner loop ships in two
interchangeable implementations:

  * a numba @njit kernel (default when numba imports), and
  * a pure-numpy lock-step version.

Set HDUNIF_NO_NUMBA=1 to force the numpy path.  Both refine each quantile with
safeguarded Newton steps inside the bracketing table panel until the CDF gap
is at most `tol` (16-node Gauss-Legendre for the partial panel integral), so
they agree to that tolerance.  benchmarks/bench_kernels.py compares the two.
"""

import math
import os

import numpy as np

from .quadrature import gl_nodes

_ENV_FLAG = "HDUNIF_NO_NUMBA"
_MAX_ITER = 120

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get(_ENV_FLAG, "").lower() not in {"1", "true", "yes"}


@njit(cache=True, nogil=True)
def _refine_quantiles_exp(qs, phi, cdf, p, kappa, shift, glx, glw, tol):  # pragma: no cover
    m = qs.shape[0]
    out = np.empty(m)
    last = phi.shape[0] - 2
    for i in range(m):
        q = qs[i]
        k = np.searchsorted(cdf, q) - 1
        if k < 0:
            k = 0
        if k > last:
            k = last
        lo = phi[k]
        hi = phi[k + 1]
        f_lo = cdf[k]
        if cdf[k + 1] - f_lo <= tol:
            out[i] = math.sin(0.5 * (lo + hi))
            continue
        a = lo
        x = lo + (hi - lo) * (q - f_lo) / (cdf[k + 1] - f_lo)
        for _ in range(_MAX_ITER):
            half = 0.5 * (x - a)
            acc = 0.0
            for j in range(glx.shape[0]):
                node = a + half * (glx[j] + 1.0)
                c = math.cos(node)
                if c < 1e-300:
                    c = 1e-300
                acc += glw[j] * math.exp((p - 2.0) * math.log(c) + kappa * math.sin(node) - shift)
            err = f_lo + half * acc - q
            if abs(err) <= tol:
                break
            if err > 0.0:
                hi = x
            else:
                lo = x
            c = math.cos(x)
            if c < 1e-300:
                c = 1e-300
            dens = math.exp((p - 2.0) * math.log(c) + kappa * math.sin(x) - shift)
            moved = False
            if dens > 0.0:
                x_new = x - err / dens
                if lo < x_new < hi:
                    x = x_new
                    moved = True
            if not moved:
                x = 0.5 * (lo + hi)
        out[i] = math.sin(x)
    return out


def _refine_quantiles_numpy(qs, phi, cdf, log_density, tol):
    """Lock-step safeguarded-Newton refinement; log_density maps phi -> log dens."""
    glx, glw = gl_nodes(16)
    qs = np.asarray(qs, dtype=float)
    k = np.clip(np.searchsorted(cdf, qs) - 1, 0, len(phi) - 2)
    lo = phi[k].copy()
    hi = phi[k + 1].copy()
    a = phi[k]
    f_lo = cdf[k]
    panel = cdf[k + 1] - f_lo
    flat = panel <= tol
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(flat, 0.5 * (lo + hi), lo + (hi - lo) * (qs - f_lo) / np.maximum(panel, 1e-300))
    active = ~flat
    for _ in range(_MAX_ITER):
        if not np.any(active):
            break
        xa = x[active]
        aa = a[active]
        half = 0.5 * (xa - aa)
        nodes = aa[:, None] + half[:, None] * (glx[None, :] + 1.0)
        dens = np.exp(log_density(nodes.ravel())).reshape(nodes.shape)
        err = f_lo[active] + half * (dens @ glw) - qs[active]
        done = np.abs(err) <= tol
        pos = err > 0.0
        hi_a = hi[active]
        lo_a = lo[active]
        hi_a = np.where(pos & ~done, xa, hi_a)
        lo_a = np.where(~pos & ~done, xa, lo_a)
        d = np.exp(log_density(xa))
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = xa - err / np.maximum(d, 1e-300)
        inside = (cand > lo_a) & (cand < hi_a)
        x_new = np.where(inside, cand, 0.5 * (lo_a + hi_a))
        x[active] = np.where(done, xa, x_new)
        hi[active] = hi_a
        lo[active] = lo_a
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return np.sin(x)


def refine_quantiles(qs, table, tol: float = 1e-12) -> np.ndarray:
    """Map uniforms qs through the inverse CDF of a UCdfTable, returning u values."""
    if table.logf is None and numba_enabled():
        glx, glw = gl_nodes(16)
        return _refine_quantiles_exp(
            np.ascontiguousarray(qs, dtype=np.float64),
            table.phi, table.cdf, float(table.p), float(table.kappa),
            float(table.log_dens_shift), glx, glw, float(tol))
    return _refine_quantiles_numpy(qs, table.phi, table.cdf, table.log_density, tol)
