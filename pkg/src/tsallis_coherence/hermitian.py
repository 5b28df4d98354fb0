"""Dense Hermitian linear algebra and validated quantum-state containers.

Every routine accepts a single ``(d, d)`` matrix or a stack ``(..., d, d)``;
stacked input is processed elementwise along the leading axes, which is how
the scan harnesses evaluate 10^5 states without a Python-level loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoConvergenceError,
    NotHermitianError,
    NotNormalizedError,
    NotPositiveError,
    TraceNotOneError,
    ValidationError,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-12

# Jacobi stopping rule: off-diagonal Frobenius norm, relative to max(1, ||A||_F).
JACOBI_TOL = 1e-14
MAX_SWEEPS = 100

# Eigenvalues at or below this magnitude are treated as exact zeros before a
# fractional power is taken; lambda**alpha for small alpha amplifies roundoff.
ZERO_EIGENVALUE_TOL = 1e-14


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a complex ndarray whose last two axes are square."""
    if isinstance(m, (DensityMatrix,)):
        return m.matrix
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian_residual(m) -> float:
    """Largest ``|m_ij - conj(m_ji)|`` over all entries (and the whole stack)."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - dagger(a))))


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition ``A = U diag(eigenvalues) U^dagger``.

    ``eigenvalues`` are real and sorted in descending order along the last
    axis; the columns of ``eigenvectors`` are the matching orthonormal vectors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues[..., None, :]) @ dagger(u)


def _jacobi(a: np.ndarray, v: np.ndarray) -> None:
    """In-place cyclic complex Jacobi on a flat stack ``a`` of shape (N, n, n)."""
    n = a.shape[-1]
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1))))
    tol = JACOBI_TOL * scale
    offmask = ~np.eye(n, dtype=bool)

    for _ in range(MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=-1))
        active = off > tol
        if not active.any():
            return
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                mag = np.abs(apq)
                rot = active & (mag > 0.0)
                if not rot.any():
                    continue
                safe = np.where(rot, mag, 1.0)
                theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                t = sgn / (np.abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # Phase e^{i phi} of a_pq; the rotation first makes a_pq real.
                ph = np.where(rot, apq / safe, 1.0)
                c = np.where(rot, c, 1.0)
                s = np.where(rot, s, 0.0)
                gpp = c
                gpq = s
                gqp = -s * np.conj(ph)
                gqq = c * np.conj(ph)

                # A <- A G  (columns p, q)
                cp = a[:, :, p].copy()
                cq = a[:, :, q]
                a[:, :, p] = cp * gpp[:, None] + cq * gqp[:, None]
                a[:, :, q] = cp * gpq[:, None] + cq * gqq[:, None]
                # A <- G^dagger A  (rows p, q)
                rp = a[:, p, :].copy()
                rq = a[:, q, :]
                a[:, p, :] = np.conj(gpp)[:, None] * rp + np.conj(gqp)[:, None] * rq
                a[:, q, :] = np.conj(gpq)[:, None] * rp + np.conj(gqq)[:, None] * rq
                a[rot, p, q] = 0.0
                a[rot, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real
                # V <- V G
                vp = v[:, :, p].copy()
                vq = v[:, :, q]
                v[:, :, p] = vp * gpp[:, None] + vq * gqp[:, None]
                v[:, :, q] = vp * gpq[:, None] + vq * gqq[:, None]

    off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=-1))
    if np.any(off > tol):
        raise NoConvergenceError(
            f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps "
            f"(off-diagonal norm {float(off.max()):.3e})"
        )


def eigh(m, check: bool = True) -> Spectrum:
    """Eigen-decomposition of a Hermitian matrix (or stack) by cyclic Jacobi.

    Eigenvalues come back in descending order; equal eigenvalues keep the
    order in which they appear on the converged diagonal. The routine is
    deterministic for identical input.

    Raises:
        NotHermitianError: ``m`` deviates from its adjoint by more than 1e-12.
        NoConvergenceError: not converged after 100 sweeps.
    """
    a = as_matrix(m)
    if check:
        res = hermitian_residual(a)
        if res > HERMITIAN_TOL:
            raise NotHermitianError(f"matrix is not Hermitian (residual {res:.3e})", res)
    shape = a.shape
    n = shape[-1]
    work = (0.5 * (a + dagger(a))).reshape(-1, n, n).copy()
    vecs = np.broadcast_to(np.eye(n, dtype=np.complex128), work.shape).copy()
    if n > 1 and work.shape[0] > 0:
        _jacobi(work, vecs)

    evals = np.real(np.diagonal(work, axis1=-2, axis2=-1)).copy()
    order = np.argsort(-evals, axis=-1, kind="stable")
    evals = np.take_along_axis(evals, order, axis=-1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=-1)
    return Spectrum(evals.reshape(shape[:-1]), vecs.reshape(shape))


def _clean_eigenvalues(lam: np.ndarray) -> np.ndarray:
    if np.any(lam < -PSD_TOL):
        raise NotPositiveError(
            f"matrix has eigenvalue {float(lam.min()):.3e} below -{PSD_TOL:g}",
            float(lam.min()),
        )
    return np.where(np.abs(lam) <= ZERO_EIGENVALUE_TOL, 0.0, np.maximum(lam, 0.0))


def spectral_map(m, fn) -> np.ndarray:
    """``U diag(fn(lambda)) U^dagger`` for a PSD matrix, with lambda cleaned first."""
    spec = eigh(m)
    lam = _clean_eigenvalues(spec.eigenvalues)
    u = spec.eigenvectors
    return (u * fn(lam)[..., None, :]) @ dagger(u)


def matrix_power(rho, alpha: float) -> np.ndarray:
    """Fractional power ``rho**alpha`` of a positive semidefinite matrix.

    Uses the convention ``0**alpha = 0`` for every ``alpha > 0``, so projectors
    map to themselves.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")

    def power(lam):
        out = np.zeros_like(lam)
        pos = lam > 0
        out[pos] = lam[pos] ** alpha
        return out

    return spectral_map(rho, power)


def _validate_density_array(a: np.ndarray) -> None:
    res = hermitian_residual(a)
    if res > HERMITIAN_TOL:
        raise NotHermitianError(f"density matrix is not Hermitian (residual {res:.3e})", res)
    tr = np.trace(a, axis1=-2, axis2=-1)
    tr_err = float(np.max(np.abs(tr.real - 1.0)))
    tr_im = float(np.max(np.abs(tr.imag)))
    if tr_err > TRACE_TOL or tr_im > TRACE_TOL:
        raise TraceNotOneError(
            f"trace deviates from 1 (real residual {tr_err:.3e}, imaginary {tr_im:.3e})",
            max(tr_err, tr_im),
        )
    lam_min = float(np.min(eigh(a, check=False).eigenvalues))
    if lam_min < -PSD_TOL:
        raise NotPositiveError(
            f"density matrix is not positive semidefinite (eigenvalue {lam_min:.3e})",
            lam_min,
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated, immutable ``d x d`` density matrix.

    Construction checks Hermiticity (1e-12), unit trace (1e-12) and
    positivity (eigenvalues >= -1e-10). Instances convert to ndarray via
    ``np.asarray``.
    """

    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"density matrix must be square, got shape {a.shape}")
        _validate_density_array(a)
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def validate_density(m) -> DensityMatrix:
    """Check ``m`` against the density-matrix invariants and wrap it.

    Raises ``NotHermitianError``, ``TraceNotOneError`` or ``NotPositiveError``
    carrying the measured residual.
    """
    if isinstance(m, DensityMatrix):
        return m
    return DensityMatrix(m)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        norm2 = float(np.sum(np.abs(v) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalizedError(
                f"state vector has squared norm {norm2!r}", abs(norm2 - 1.0)
            )
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise NotNormalizedError("zero vector cannot be normalized", 1.0)
        return cls(v / nrm)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> DensityMatrix:
        v = self.amplitudes
        return DensityMatrix(np.outer(v, np.conj(v)))


def projector(amplitudes) -> np.ndarray:
    """``|psi><psi|`` for a vector or a stack ``(..., d)`` of vectors."""
    v = np.asarray(amplitudes, dtype=np.complex128)
    return v[..., :, None] * np.conj(v[..., None, :])
