"""Seeded random states and unitaries for scans and property checks."""

from __future__ import annotations

import numpy as np

from .hermitian import DensityMatrix, PureState, dagger


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _check_dim(dim: int) -> None:
    if dim < 2:
        raise ValueError(f"dim must be at least 2, got {dim}")


def haar_random_pure_batch(dim: int, n: int, seed) -> np.ndarray:
    """``n`` Haar-random unit vectors of length ``dim``, shape ``(n, dim)``."""
    _check_dim(dim)
    rng = _rng(seed)
    v = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def haar_random_pure(dim: int, seed) -> PureState:
    return PureState.normalized(haar_random_pure_batch(dim, 1, seed)[0])


def ginibre_random_density_batch(dim: int, n: int, seed) -> np.ndarray:
    """``n`` Ginibre-ensemble states ``G G^dagger / tr(G G^dagger)``."""
    _check_dim(dim)
    rng = _rng(seed)
    g = rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))
    rho = g @ dagger(g)
    rho = 0.5 * (rho + dagger(rho))
    return rho / np.trace(rho, axis1=-2, axis2=-1).real[:, None, None]


def ginibre_random_density(dim: int, seed) -> DensityMatrix:
    return DensityMatrix(ginibre_random_density_batch(dim, 1, seed)[0])


def haar_random_unitary(dim: int, seed) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix, phases fixed."""
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian_with_spectrum(eigenvalues, seed) -> np.ndarray:
    lam = np.asarray(eigenvalues, dtype=float)
    u = haar_random_unitary(lam.size, seed)
    h = (u * lam) @ dagger(u)
    return 0.5 * (h + dagger(h))
