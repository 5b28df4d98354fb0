"""Coherence functionals in a fixed computational basis.

All functionals accept a :class:`DensityMatrix` or a raw array of shape
``(d, d)`` or ``(..., d, d)``. A single matrix gives a ``float``; a stack
gives an ``ndarray`` over the leading axes. Entropies use natural logs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AlphaOutOfRangeError, SupportMismatchError, ValidationError
from .hermitian import DensityMatrix, as_matrix, eigh, matrix_power

ALPHA_MAX = 2.0
# Inside this band around 1, C_alpha is evaluated as the relative entropy.
ALPHA_ONE_BAND = 1e-6
VALUE_TOL = 1e-10
SUPPORT_TOL = 1e-12


class MeasureKind(str, Enum):
    L1 = "l1"
    L2 = "l2"
    TSALLIS = "tsallis"
    REL_ENTROPY = "rel"


@dataclass(frozen=True)
class MeasureId:
    """Selects one coherence functional; ``alpha`` only for ``TSALLIS``."""

    kind: MeasureKind
    alpha: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MeasureKind(self.kind))
        if self.kind is MeasureKind.TSALLIS:
            if self.alpha is None:
                raise AlphaOutOfRangeError("Tsallis measure needs an alpha")
            a = float(self.alpha)
            _check_alpha(a)
            if abs(a - 1.0) < ALPHA_ONE_BAND:
                raise AlphaOutOfRangeError(
                    f"alpha={a!r} is within {ALPHA_ONE_BAND:g} of 1; use the relative entropy"
                )
            object.__setattr__(self, "alpha", a)
        elif self.alpha is not None:
            raise ValidationError(f"{self.kind.value} takes no alpha")

    @classmethod
    def l1(cls) -> "MeasureId":
        return cls(MeasureKind.L1)

    @classmethod
    def l2(cls) -> "MeasureId":
        return cls(MeasureKind.L2)

    @classmethod
    def rel_entropy(cls) -> "MeasureId":
        return cls(MeasureKind.REL_ENTROPY)

    @classmethod
    def tsallis(cls, alpha: float) -> "MeasureId":
        return cls(MeasureKind.TSALLIS, alpha)

    @classmethod
    def for_alpha(cls, alpha: float) -> "MeasureId":
        """The C_alpha family member, with alpha = 1 mapped to the relative entropy."""
        if abs(float(alpha) - 1.0) < ALPHA_ONE_BAND:
            return cls.rel_entropy()
        return cls.tsallis(alpha)

    @classmethod
    def parse(cls, text: str) -> "MeasureId":
        """Parse ``l1``, ``l2``, ``rel`` or ``tsallis:<alpha>``."""
        s = text.strip().lower()
        if s in ("l1", "l2"):
            return cls(MeasureKind(s))
        if s in ("rel", "relent", "c1"):
            return cls.rel_entropy()
        m = re.fullmatch(r"(?:tsallis|c)[:=]?\s*([0-9.eE+-]+)", s)
        if m:
            try:
                a = float(m.group(1))
            except ValueError:
                raise ValidationError(f"bad alpha in measure {text!r}") from None
            return cls.tsallis(a)
        raise ValidationError(f"unknown measure {text!r} (expected l1, l2, rel, tsallis:<alpha>)")

    @property
    def effective_alpha(self) -> float | None:
        if self.kind is MeasureKind.TSALLIS:
            return self.alpha
        if self.kind is MeasureKind.REL_ENTROPY:
            return 1.0
        return None

    @property
    def label(self) -> str:
        if self.kind is MeasureKind.TSALLIS:
            return f"tsallis:{self.alpha:g}"
        return self.kind.value

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class MeasureValue:
    value: float
    measure: MeasureId

    def __float__(self):
        return float(self.value)


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _clamp(x: np.ndarray) -> np.ndarray:
    return np.where((x < 0) & (x >= -VALUE_TOL), 0.0, x)


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= ALPHA_MAX):
        raise AlphaOutOfRangeError(f"alpha must lie in (0, {ALPHA_MAX:g}], got {alpha!r}")


def _diag(a: np.ndarray) -> np.ndarray:
    return np.diagonal(a, axis1=-2, axis2=-1)


def c_l1(rho):
    """Sum of moduli of the off-diagonal entries."""
    a = as_matrix(rho)
    total = np.sum(np.abs(a), axis=(-2, -1)) - np.sum(np.abs(_diag(a)), axis=-1)
    return _out(np.maximum(total, 0.0))


def c_l2(rho):
    a = as_matrix(rho)
    total = np.sum(np.abs(a) ** 2, axis=(-2, -1)) - np.sum(np.abs(_diag(a)) ** 2, axis=-1)
    return _out(np.maximum(total, 0.0))


def _alpha_diagonal(a: np.ndarray, alpha: float) -> np.ndarray:
    """Nonnegative diagonal of ``rho**alpha``."""
    return np.maximum(np.real(_diag(matrix_power(a, alpha))), 0.0)


def tsallis_r(rho, alpha: float):
    """``r = sum_i <i|rho^alpha|i>^(1/alpha)``."""
    _check_alpha(alpha)
    d = _alpha_diagonal(as_matrix(rho), alpha)
    return _out(np.sum(d ** (1.0 / alpha), axis=-1))


def _entropy(p: np.ndarray) -> np.ndarray:
    p = np.maximum(p, 0.0)
    logs = np.log(np.where(p > 0, p, 1.0))
    return -np.sum(p * logs, axis=-1)


def von_neumann_entropy(rho):
    lam = eigh(as_matrix(rho)).eigenvalues
    return _out(_entropy(lam))


def c_rel_entropy(rho):
    """Relative entropy of coherence ``S(diag rho) - S(rho)``."""
    a = as_matrix(rho)
    lam = eigh(a).eigenvalues
    value = _entropy(np.real(_diag(a))) - _entropy(lam)
    return _out(_clamp(value))


def c_alpha(rho, alpha: float):
    """Tsallis relative alpha-entropy of coherence, ``(r^alpha - 1)/(alpha - 1)``.

    ``alpha`` must lie in (0, 2]; within 1e-6 of 1 the relative entropy of
    coherence is returned instead.
    """
    alpha = float(alpha)
    _check_alpha(alpha)
    if abs(alpha - 1.0) < ALPHA_ONE_BAND:
        return c_rel_entropy(rho)
    r = np.asarray(tsallis_r(rho, alpha))
    return _out(_clamp((r**alpha - 1.0) / (alpha - 1.0)))


def c2_entrywise(rho):
    """``C_2`` straight from matrix entries: ``(sum_j ||column j||)^2 - 1``."""
    a = as_matrix(rho)
    cols = np.sqrt(np.sum(np.abs(a) ** 2, axis=-2))
    return _out(_clamp(np.sum(cols, axis=-1) ** 2 - 1.0))


def evaluate(rho, measure_id: MeasureId):
    """Raw value(s) of ``measure_id`` on a state or a stack of states."""
    kind = measure_id.kind
    if kind is MeasureKind.L1:
        return c_l1(rho)
    if kind is MeasureKind.L2:
        return c_l2(rho)
    if kind is MeasureKind.REL_ENTROPY:
        return c_rel_entropy(rho)
    return c_alpha(rho, measure_id.alpha)


def measure(rho, measure_id: MeasureId) -> MeasureValue:
    return MeasureValue(float(evaluate(rho, measure_id)), measure_id)


def nearest_incoherent(rho, alpha: float):
    """The incoherent state attaining ``C_alpha``.

    Its diagonal is ``<i|rho^alpha|i>^(1/alpha) / r``. Returns a
    :class:`DensityMatrix` for a single input, an ndarray stack otherwise.
    """
    alpha = float(alpha)
    _check_alpha(alpha)
    a = as_matrix(rho)
    if abs(alpha - 1.0) < ALPHA_ONE_BAND:
        w = np.maximum(np.real(_diag(a)), 0.0)
    else:
        w = _alpha_diagonal(a, alpha) ** (1.0 / alpha)
    w = w / np.sum(w, axis=-1, keepdims=True)
    out = np.zeros(a.shape, dtype=np.complex128)
    idx = np.arange(a.shape[-1])
    out[..., idx, idx] = w
    if out.ndim == 2:
        return DensityMatrix(out)
    return out


def tsallis_divergence(rho, delta, alpha: float):
    """Tsallis relative alpha-entropy ``(Tr(rho^a delta^(1-a)) - 1)/(a - 1)``.

    For ``alpha > 1`` the reference ``delta`` must cover the support of
    ``rho``; otherwise :class:`SupportMismatchError` is raised.
    """
    alpha = float(alpha)
    _check_alpha(alpha)
    if abs(alpha - 1.0) < ALPHA_ONE_BAND:
        raise AlphaOutOfRangeError("tsallis_divergence is undefined at alpha = 1")
    a = as_matrix(rho)
    b = as_matrix(delta)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")

    spec = eigh(b)
    mu = np.where(np.abs(spec.eigenvalues) <= SUPPORT_TOL, 0.0, np.maximum(spec.eigenvalues, 0.0))
    w = spec.eigenvectors
    expo = 1.0 - alpha
    kernel = mu <= 0.0
    if expo < 0 and np.any(kernel):
        # weight of rho on each eigenvector of delta
        weight = np.real(np.einsum("...ik,...ij,...jk->...k", np.conj(w), a, w))
        bad = kernel & (weight > SUPPORT_TOL)
        if np.any(bad):
            raise SupportMismatchError(
                "reference state lacks support where rho has weight "
                f"(max weight {float(np.max(np.where(bad, weight, 0.0))):.3e})"
            )
    powered = np.zeros_like(mu)
    pos = ~kernel
    powered[pos] = mu[pos] ** expo
    delta_pow = (w * powered[..., None, :]) @ np.conj(np.swapaxes(w, -1, -2))
    tr = np.real(np.trace(matrix_power(a, alpha) @ delta_pow, axis1=-2, axis2=-1))
    return _out((tr - 1.0) / (alpha - 1.0))
