"""Single-qubit closed forms on the real Bloch disk ``rho(t, z)``.

``rho(t, z) = [[(1+z)/2, t/2], [t/2, (1-z)/2]]`` with ``t >= 0`` and
``t^2 + z^2 <= 1``. Its l1 coherence is ``t``; ``C_2``, ``C_1`` and
``C_{1/2}`` have explicit expressions implemented here, independently of the
spectral route in :mod:`tsallis_coherence.measures`.

The ``*_qubit`` functions take a :class:`QubitParams` (returning a float) or a
``(t, z)`` pair of broadcastable arrays (returning an ndarray).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateIntervalError, OutOfBlochDiskError, ValidationError
from .hermitian import DensityMatrix
from .measures import MeasureId, MeasureKind, c_alpha

DISK_TOL = 1e-12
FD_STEP = 1e-6
FD_SLACK = 1e-6


@dataclass(frozen=True)
class QubitParams:
    t: float
    z: float

    def __post_init__(self):
        t, z = float(self.t), float(self.z)
        if t < 0:
            raise OutOfBlochDiskError(f"t must be nonnegative, got {t!r}", -t)
        excess = t * t + z * z - 1.0
        if excess > DISK_TOL:
            raise OutOfBlochDiskError(f"(t, z) = ({t!r}, {z!r}) lies outside the disk", excess)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        excess = self.x**2 + self.y**2 + self.z**2 - 1.0
        if excess > DISK_TOL:
            raise OutOfBlochDiskError(f"Bloch vector {self} lies outside the ball", excess)


@dataclass(frozen=True)
class PureQubit:
    """``sqrt(p)|0> + e^{i phi} sqrt(1-p)|1>``."""

    p: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p must lie in [0, 1], got {self.p!r}")

    def amplitudes(self) -> np.ndarray:
        return np.array([math.sqrt(self.p), np.exp(1j * self.phi) * math.sqrt(1.0 - self.p)])


def _tz(params):
    if isinstance(params, QubitParams):
        return params.t, params.z
    t, z = params
    return np.asarray(t, dtype=float), np.asarray(z, dtype=float)


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _xlogx(x):
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    return x * np.log(np.where(x > 0, x, 1.0))


def rho_tz_array(t, z) -> np.ndarray:
    """Unvalidated stack of ``rho(t, z)`` matrices, shape ``(..., 2, 2)``."""
    t, z = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(z, dtype=float))
    out = np.empty(t.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = (1 + z) / 2
    out[..., 0, 1] = t / 2
    out[..., 1, 0] = t / 2
    out[..., 1, 1] = (1 - z) / 2
    return out


def rho_tz(params) -> DensityMatrix:
    if not isinstance(params, QubitParams):
        params = QubitParams(*params)
    return DensityMatrix(rho_tz_array(params.t, params.z))


def bloch_density(b: BlochVector) -> DensityMatrix:
    x, y, z = b.x, b.y, b.z
    return DensityMatrix(
        np.array([[(1 + z) / 2, (x - 1j * y) / 2], [(x + 1j * y) / 2, (1 - z) / 2]])
    )


def canonicalize(b: BlochVector) -> QubitParams:
    """Drop the off-diagonal phase: ``t = sqrt(x^2 + y^2)``, same ``z``."""
    if not isinstance(b, BlochVector):
        b = BlochVector(*b)
    return QubitParams(math.hypot(b.x, b.y), b.z)


def _pure_value(p, measure_id: MeasureId):
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    kind = measure_id.kind
    if kind is MeasureKind.L1:
        return 2.0 * np.sqrt(np.maximum(p * q, 0.0))
    if kind is MeasureKind.L2:
        return 2.0 * p * q
    if kind is MeasureKind.REL_ENTROPY:
        return -(_xlogx(p) + _xlogx(q))
    a = measure_id.alpha
    r = np.maximum(p, 0.0) ** (1.0 / a) + np.maximum(q, 0.0) ** (1.0 / a)
    return (r**a - 1.0) / (a - 1.0)


def pure_closed_forms(s: PureQubit, measure_id: MeasureId) -> float:
    """Closed-form coherence of a pure qubit; the phase ``phi`` never enters."""
    return float(_pure_value(s.p, measure_id))


def c2_qubit(params):
    """``C_2 = r_2^2 - 1`` with ``r_2 = (sqrt((1+z)^2+t^2) + sqrt((1-z)^2+t^2))/2``."""
    t, z = _tz(params)
    r2 = 0.5 * np.sqrt((1 + z) ** 2 + t**2) + 0.5 * np.sqrt((1 - z) ** 2 + t**2)
    return _out(r2**2 - 1.0)


def c1_qubit(params):
    """Relative entropy of coherence of ``rho(t, z)`` from its four log terms."""
    t, z = _tz(params)
    big_r = np.minimum(np.sqrt(t**2 + z**2), 1.0)
    value = (
        _xlogx((1 + big_r) / 2)
        + _xlogx((1 - big_r) / 2)
        - _xlogx((1 + z) / 2)
        - _xlogx((1 - z) / 2)
    )
    return _out(np.maximum(value, 0.0))


def qubit_eigensystem(params):
    """Eigenvalues ``(1 +- R)/2`` and the normalized eigenvectors of ``rho(t, z)``.

    ``R = sqrt(t^2 + z^2)``. At ``t = 0`` the computational basis is returned
    (ordered so that the first vector carries the larger eigenvalue).
    """
    if not isinstance(params, QubitParams):
        params = QubitParams(*params)
    t, z = params.t, params.z
    big_r = math.hypot(t, z)
    lam = np.array([(1 + big_r) / 2, (1 - big_r) / 2])
    if t == 0.0:
        if z >= 0:
            return lam, np.eye(2)
        return lam, np.array([[0.0, 1.0], [1.0, 0.0]])
    # R - z and R + z without cancellation
    if z >= 0:
        r_plus = big_r + z
        r_minus = t * t / r_plus
    else:
        r_minus = big_r - z
        r_plus = t * t / r_minus
    n1 = math.sqrt(r_minus * 2 * big_r)
    n2 = math.sqrt(r_plus * 2 * big_r)
    v1 = np.array([t / n1, math.sqrt(r_minus) / math.sqrt(2 * big_r)])
    v2 = np.array([-t / n2, math.sqrt(r_plus) / math.sqrt(2 * big_r)])
    return lam, np.column_stack([v1, v2])


def r_half_qubit(params):
    """``r_{1/2}``: sum of squared diagonal entries of ``sqrt(rho(t, z))``."""
    t, z = _tz(params)
    big_r = np.sqrt(t**2 + z**2)
    safe = np.where(big_r > 0, big_r, 1.0)
    w_plus = np.where(big_r > 0, (big_r + z) / (2 * safe), 0.5)
    w_minus = np.where(big_r > 0, (big_r - z) / (2 * safe), 0.5)
    s1 = np.sqrt((1 + np.minimum(big_r, 1.0)) / 2)
    s2 = np.sqrt(np.maximum((1 - big_r) / 2, 0.0))
    r = (s1 * w_plus + s2 * w_minus) ** 2 + (s1 * w_minus + s2 * w_plus) ** 2
    return _out(r)


def c_half_qubit(params):
    """``C_{1/2} = -2 (sqrt(r_{1/2}) - 1)``."""
    r = np.asarray(r_half_qubit(params))
    value = -2.0 * (np.sqrt(r) - 1.0)
    return _out(np.where((value < 0) & (value > -1e-10), 0.0, value) + 0.0)


_CLOSED_FORMS = {2.0: c2_qubit, 1.0: c1_qubit, 0.5: c_half_qubit}


def closed_form(alpha: float):
    """The closed-form qubit functional for alpha in {2, 1, 1/2}."""
    try:
        return _CLOSED_FORMS[float(alpha)]
    except KeyError:
        raise ValidationError(f"closed forms exist for alpha in {{2, 1, 0.5}}, got {alpha!r}") from None


def extremal_states(t: float) -> tuple[DensityMatrix, DensityMatrix]:
    """``(rho_max(t), rho_min(t)) = (rho(t, sqrt(1-t^2)), rho(t, 0))``."""
    if not 0.0 <= t <= 1.0:
        raise OutOfBlochDiskError(f"t must lie in [0, 1], got {t!r}")
    z_max = math.sqrt(max(1.0 - t * t, 0.0))
    return rho_tz(QubitParams(t, z_max)), rho_tz(QubitParams(t, 0.0))


def extremal_curves(t, alpha: float):
    """Upper and lower envelopes ``(C_max(t), C_min(t))`` for alpha in {2, 1, 1/2}."""
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise OutOfBlochDiskError("t must lie in [0, 1]")
    s = np.sqrt(np.maximum(1.0 - t**2, 0.0))
    a = float(alpha)
    if a == 2.0:
        cmax, cmin = t, t**2
    elif a == 1.0:
        cmax = -_xlogx((1 + s) / 2) - _xlogx((1 - s) / 2)
        cmin = _xlogx((1 + t) / 2) + _xlogx((1 - t) / 2) + math.log(2.0)
    elif a == 0.5:
        cmax = -2.0 * (np.sqrt((2 - t**2) / 2) - 1.0)
        cmin = -2.0 * (np.sqrt((1 + s) / 2) - 1.0)
    else:
        raise ValidationError(f"extremal curves exist for alpha in {{2, 1, 0.5}}, got {alpha!r}")
    return _out(cmax), _out(np.maximum(cmin, 0.0))


class CheckMode(str, Enum):
    PURE_P = "pure_p"
    QUBIT_Z = "qubit_z"
    R_HALF_Z = "r_half_z"


@dataclass
class FiniteDifferenceReport:
    """Per-point central-difference quotients and their sign verdicts."""

    mode: CheckMode
    fixed: float | None
    alpha: float | None
    points: np.ndarray
    quotients: np.ndarray
    passes: np.ndarray
    expected: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(np.all(self.passes))

    def rows(self):
        for x, q, ok, e in zip(self.points, self.quotients, self.passes, self.expected):
            yield float(x), float(q), e, bool(ok)


def _qubit_z_function(alpha: float):
    a = float(alpha)
    if a in _CLOSED_FORMS:
        return _CLOSED_FORMS[a]
    mid = MeasureId.for_alpha(a)

    def general(tz):
        t, z = tz
        return c_alpha(rho_tz_array(t, z), mid.effective_alpha)

    return general


def monotonicity_check(
    mode, fixed: float | None = None, alpha: float | None = None, grid: int = 99,
    step: float = FD_STEP, slack: float = FD_SLACK,
) -> FiniteDifferenceReport:
    """Sign check of a derivative by central differences at ``grid`` interior points.

    ``PURE_P``: ``d C_alpha / dp`` of a pure qubit, >= 0 below p = 1/2 and <= 0
    above (alpha = None checks the l1 norm). ``QUBIT_Z``: ``d C_alpha(rho(t, z))
    / dz >= 0`` on ``0 < z < sqrt(1 - t^2)`` with ``t = fixed``. ``R_HALF_Z``:
    ``d r_{1/2} / dz <= 0`` on the same interval.
    """
    mode = CheckMode(mode)
    if grid < 3:
        raise ValidationError(f"grid must be at least 3, got {grid}")
    k = np.arange(1, grid + 1)
    h = step

    if mode is CheckMode.PURE_P:
        mid = MeasureId.l1() if alpha is None else MeasureId.for_alpha(alpha)
        x = k / (grid + 1)
        q = (_pure_value(x + h, mid) - _pure_value(x - h, mid)) / (2 * h)
        up = x <= 0.5
        down = x >= 0.5
        passes = (~up | (q >= -slack)) & (~down | (q <= slack))
        expected = [">=0" if (u and not d) else ("<=0" if d and not u else "=0")
                    for u, d in zip(up, down)]
        return FiniteDifferenceReport(mode, None, alpha, x, q, passes, expected)

    if fixed is None or not 0.0 < fixed < 1.0:
        raise ValidationError(f"t must lie in (0, 1) for {mode.value}, got {fixed!r}")
    z_max = math.sqrt(1.0 - fixed * fixed)
    if z_max <= 2 * h or z_max / (grid + 1) <= h:
        raise DegenerateIntervalError(
            f"z interval (0, {z_max:.3e}) too short for step {h:g} on {grid} points"
        )
    x = k * z_max / (grid + 1)
    t = np.full_like(x, fixed)
    if mode is CheckMode.QUBIT_Z:
        if alpha is None:
            raise ValidationError("QUBIT_Z needs alpha")
        fn = _qubit_z_function(alpha)
        q = (np.asarray(fn((t, x + h))) - np.asarray(fn((t, x - h)))) / (2 * h)
        passes = q >= -slack
        expected = [">=0"] * grid
    else:
        q = (np.asarray(r_half_qubit((t, x + h))) - np.asarray(r_half_qubit((t, x - h)))) / (2 * h)
        passes = q <= slack
        expected = ["<=0"] * grid
    return FiniteDifferenceReport(mode, fixed, alpha, x, q, passes, expected)
