"""Unit-sphere geometry: unit vectors, samples, tangent-normal decomposition, rotations.

Vectors and samples are plain float64 arrays; the constructors below validate
invariants at the boundary (unit norm within 1e-8 on input, re-normalized to
1e-12 or better) and everything downstream treats the arrays as immutable.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, ZeroVector

UNIT_TOL = 1e-8


def normalize_to_sphere(x) -> np.ndarray:
    """Project a nonzero vector onto the unit sphere."""
    arr = np.asarray(x, dtype=float).reshape(-1)
    nrm = float(np.linalg.norm(arr))
    if nrm == 0.0:
        raise ZeroVector("cannot project the zero vector onto the sphere")
    return arr / nrm


def unit_vector(x) -> np.ndarray:
    """Validate a unit vector: p >= 2, norm within 1e-8 of one; re-normalizes."""
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.size < 2:
        raise DomainError(f"unit vectors need dimension p >= 2, got {arr.size}")
    nrm = float(np.linalg.norm(arr))
    if abs(nrm - 1.0) > UNIT_TOL:
        raise DomainError(f"vector norm {nrm} is not within {UNIT_TOL} of 1")
    return arr / nrm


def spherical_sample(rows) -> np.ndarray:
    """Validate an n x p sample of unit rows (n >= 1, common dimension p >= 2)."""
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch(f"a spherical sample must be a 2-d array, got ndim={arr.ndim}")
    n, p = arr.shape
    if n < 1 or p < 2:
        raise DomainError(f"need n >= 1 rows of dimension p >= 2, got shape {arr.shape}")
    norms = np.linalg.norm(arr, axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise DomainError(f"sample rows deviate from unit norm by up to {worst}")
    return arr / norms[:, None]


@dataclass(frozen=True)
class TangentNormal:
    """x = u * theta + v * s with u = x'theta, v = sqrt(1 - u^2), s _|_ theta."""

    u: float
    v: float
    s: np.ndarray


def _sqrt_one_minus_sq(u: float) -> float:
    """sqrt(1 - u^2) without cancellation for |u| near 1."""
    return float(np.sqrt(max(0.0, (1.0 - u) * (1.0 + u))))


def tangent_normal_decompose(x, theta) -> TangentNormal:
    x = np.asarray(x, dtype=float).reshape(-1)
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if x.size != theta.size:
        raise DimensionMismatch(f"dimensions differ: {x.size} vs {theta.size}")
    u = float(x @ theta)
    u = min(1.0, max(-1.0, u))
    v = _sqrt_one_minus_sq(u)
    resid = x - u * theta
    rn = float(np.linalg.norm(resid))
    if rn == 0.0:
        s = np.zeros_like(x)
    else:
        s = resid / rn
    return TangentNormal(u=u, v=v, s=s)


def random_rotation(p: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed rotation from SO(p) via QR of a Gaussian matrix."""
    if p < 2:
        raise DomainError(f"rotations need p >= 2, got {p}")
    g = rng.standard_normal((p, p))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    q = q * d[None, :]
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def apply_rotation(sample: np.ndarray, q: np.ndarray) -> np.ndarray:
    sample = np.asarray(sample, dtype=float)
    q = np.asarray(q, dtype=float)
    if sample.ndim != 2 or q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise DimensionMismatch("apply_rotation expects an n x p sample and a p x p matrix")
    if sample.shape[1] != q.shape[0]:
        raise DimensionMismatch(
            f"sample dimension {sample.shape[1]} does not match rotation size {q.shape[0]}")
    return sample @ q.T
