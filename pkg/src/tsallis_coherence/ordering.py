"""Same-ordering comparisons between two coherence measures.

Two measures A and B order a pair (rho, sigma) consistently when
``A(rho) <= A(sigma)`` iff ``B(rho) <= B(sigma)``. Differences within ``eps``
of zero are reported as ties instead of being forced into either side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .hermitian import as_matrix, projector
from .measures import MeasureId, evaluate
from .qubit import QubitParams, closed_form, rho_tz_array
from .sampling import haar_random_pure_batch

DEFAULT_EPS = 1e-9
CHUNK = 20000


class Verdict(str, Enum):
    SAME_ORDER = "SameOrder"
    VIOLATION = "Violation"
    TIE = "TieAmbiguous"


class Family(str, Enum):
    PURE = "pure"
    MIXED_DISK = "mixed_disk"


class RegionVerdict(str, Enum):
    VIOLATING = "ViolatingRegion"
    SAME_ORDER = "SameOrderRegion"
    BOUNDARY = "Boundary"


_CODES = (Verdict.SAME_ORDER, Verdict.VIOLATION, Verdict.TIE)


def verdict_codes(diff_a, diff_b, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Vectorized verdicts: 0 same order, 1 violation, 2 tie."""
    diff_a = np.asarray(diff_a, dtype=float)
    diff_b = np.asarray(diff_b, dtype=float)
    tie = (np.abs(diff_a) <= eps) | (np.abs(diff_b) <= eps)
    opposite = np.sign(diff_a) * np.sign(diff_b) < 0
    return np.where(tie, 2, np.where(opposite, 1, 0))


@dataclass(frozen=True)
class ComparisonRecord:
    measure_a: MeasureId
    measure_b: MeasureId
    value_a1: float
    value_a2: float
    value_b1: float
    value_b2: float
    verdict: Verdict
    eps: float = DEFAULT_EPS

    def values(self) -> dict:
        return {
            "A1": self.value_a1,
            "A2": self.value_a2,
            "B1": self.value_b1,
            "B2": self.value_b2,
        }


def _record(ma, mb, a1, a2, b1, b2, eps) -> ComparisonRecord:
    code = int(verdict_codes(a1 - a2, b1 - b2, eps))
    return ComparisonRecord(ma, mb, float(a1), float(a2), float(b1), float(b2), _CODES[code], eps)


def compare(rho, sigma, measure_a: MeasureId, measure_b: MeasureId,
            eps: float = DEFAULT_EPS) -> ComparisonRecord:
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps!r}")
    a, b = as_matrix(rho), as_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot compare states of shapes {a.shape} and {b.shape}")
    return _record(
        measure_a, measure_b,
        evaluate(a, measure_a), evaluate(b, measure_a),
        evaluate(a, measure_b), evaluate(b, measure_b),
        eps,
    )


@dataclass
class ScanViolation:
    index: int
    params1: dict
    params2: dict
    record: ComparisonRecord

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "params1": self.params1,
            "params2": self.params2,
            "values": self.record.values(),
            "verdict": self.record.verdict.value,
        }


@dataclass
class ViolationReport:
    family: str
    measure_a: MeasureId
    measure_b: MeasureId
    seed: int
    pairs_tested: int
    eps: float = DEFAULT_EPS
    ties: int = 0
    violations: list[ScanViolation] = field(default_factory=list)

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "family": self.family,
            "measureA": self.measure_a.label,
            "measureB": self.measure_b.label,
            "eps": self.eps,
            "pairsTested": self.pairs_tested,
            "ties": self.ties,
            "violationCount": self.violation_count,
            "violations": [v.to_dict() for v in self.violations],
        }

    def summary(self) -> str:
        return (
            f"family={self.family} A={self.measure_a.label} B={self.measure_b.label} "
            f"seed={self.seed} pairs={self.pairs_tested} ties={self.ties} "
            f"violations={self.violation_count}"
        )


def _values(states: np.ndarray, measure_id: MeasureId) -> np.ndarray:
    out = np.empty(states.shape[0])
    for lo in range(0, states.shape[0], CHUNK):
        out[lo:lo + CHUNK] = evaluate(states[lo:lo + CHUNK], measure_id)
    return out


def _scan(states1, states2, describe, family, measure_a, measure_b, seed, eps):
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps!r}")
    a1, a2 = _values(states1, measure_a), _values(states2, measure_a)
    if measure_b == measure_a:
        b1, b2 = a1, a2
    else:
        b1, b2 = _values(states1, measure_b), _values(states2, measure_b)
    codes = verdict_codes(a1 - a2, b1 - b2, eps)
    report = ViolationReport(
        family=family, measure_a=measure_a, measure_b=measure_b, seed=seed,
        pairs_tested=int(codes.size), eps=eps, ties=int(np.sum(codes == 2)),
    )
    for k in np.flatnonzero(codes == 1):
        k = int(k)
        p1, p2 = describe(k)
        rec = ComparisonRecord(
            measure_a, measure_b, float(a1[k]), float(a2[k]), float(b1[k]), float(b2[k]),
            Verdict.VIOLATION, eps,
        )
        report.violations.append(ScanViolation(k, p1, p2, rec))
    return report


def sample_half_disk(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """``n`` points uniform on ``{t >= 0, t^2 + z^2 <= 1}`` by rejection from the square."""
    ts, zs, have = [], [], 0
    while have < n:
        m = max(2 * (n - have), 64)
        t = rng.uniform(0.0, 1.0, m)
        z = rng.uniform(-1.0, 1.0, m)
        keep = t * t + z * z <= 1.0
        ts.append(t[keep])
        zs.append(z[keep])
        have += int(keep.sum())
    return np.concatenate(ts)[:n], np.concatenate(zs)[:n]


def scan_qubit_pairs(family, measure_a: MeasureId, measure_b: MeasureId, n: int,
                     seed: int, eps: float = DEFAULT_EPS) -> ViolationReport:
    """Search ``n`` random qubit pairs for ordering violations.

    ``PURE`` draws ``p`` uniform on [0, 1] and a uniform relative phase;
    ``MIXED_DISK`` draws ``(t, z)`` uniformly on the half disk.
    """
    family = Family(family)
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    if family is Family.PURE:
        p = rng.uniform(0.0, 1.0, (n, 2))
        phi = rng.uniform(0.0, 2 * math.pi, (n, 2))
        amps = np.stack([np.sqrt(p), np.exp(1j * phi) * np.sqrt(1.0 - p)], axis=-1)
        states = projector(amps)

        def describe(k):
            return ({"p": float(p[k, 0]), "phi": float(phi[k, 0])},
                    {"p": float(p[k, 1]), "phi": float(phi[k, 1])})
    else:
        t, z = sample_half_disk(2 * n, rng)
        t, z = t.reshape(n, 2), z.reshape(n, 2)
        states = rho_tz_array(t, z)

        def describe(k):
            return ({"t": float(t[k, 0]), "z": float(z[k, 0])},
                    {"t": float(t[k, 1]), "z": float(z[k, 1])})
    return _scan(states[:, 0], states[:, 1], describe, family.value,
                 measure_a, measure_b, seed, eps)


def _amps_json(v: np.ndarray) -> list:
    return [[float(c.real), float(c.imag)] for c in v]


def scan_pure_qudit_pairs(dim: int, measure_a: MeasureId, measure_b: MeasureId, n: int,
                          seed: int, eps: float = DEFAULT_EPS) -> ViolationReport:
    """Search ``n`` Haar-random pure-state pairs in dimension ``dim >= 3``."""
    if dim < 3:
        raise ValidationError(f"dim must be at least 3, got {dim}")
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    amps = haar_random_pure_batch(dim, 2 * n, rng).reshape(n, 2, dim)
    states = projector(amps)

    def describe(k):
        return ({"amplitudes": _amps_json(amps[k, 0])},
                {"amplitudes": _amps_json(amps[k, 1])})

    return _scan(states[:, 0], states[:, 1], describe, f"pure_qudit_d{dim}",
                 measure_a, measure_b, seed, eps)


def classify_region(reference: QubitParams, candidate: QubitParams, alpha: float,
                    eps: float = DEFAULT_EPS) -> RegionVerdict:
    """Where ``candidate`` sits relative to ``reference`` in the (C_l1, C_alpha) plane.

    Violating when the l1 coordinate ``t`` and ``C_alpha`` move in opposite
    directions, Boundary when either moves by at most ``eps``.
    """
    fn = closed_form(alpha)
    dt = candidate.t - reference.t
    dc = fn(candidate) - fn(reference)
    if abs(dt) <= eps or abs(dc) <= eps:
        return RegionVerdict.BOUNDARY
    if dt * dc < 0:
        return RegionVerdict.VIOLATING
    return RegionVerdict.SAME_ORDER
