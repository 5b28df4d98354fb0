"""Incoherent Kraus channels and numerical monotonicity checks.

The checks cover monotonicity under incoherent channels (``check_c2a``),
under selective incoherent measurements (``check_c2b``), convexity
(``check_c3_convexity``), and the weighted inequality
``sum_i p_i^a q_i^(1-a) C_a(rho_i) <= C_a(rho)`` satisfied by the Tsallis
measures (``check_generalized_monotonicity``), where ``p_i = Tr(K_i rho K_i^+)``
and ``q_i = Tr(K_i delta_rho K_i^+)``.

The ``run_*`` harnesses evaluate many seeded cases at once; case ``k`` of a
run with seed ``s`` is regenerated exactly by ``generate_case(dim, s, k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadEnsembleError,
    ConstructionFailedError,
    DimensionMismatchError,
    IllConditionedBranchError,
    ValidationError,
)
from .hermitian import as_matrix, dagger, projector
from .measures import MeasureId, _check_alpha, c_alpha, evaluate, nearest_incoherent
from .sampling import ginibre_random_density_batch, haar_random_pure_batch

COMPLETENESS_TOL = 1e-10
BRANCH_CUTOFF = 1e-12
PASS_TOL = 1e-8
MAX_ATTEMPTS = 100
MAX_BRANCHES = 4


@dataclass(frozen=True, eq=False)
class IncoherentChannel:
    """Kraus operators ``K_i`` (stacked as ``(branches, d, d)``).

    Construction checks ``sum_i K_i^+ K_i = I`` within 1e-10 and that every
    ``K_i`` has at most one nonzero entry per column. Zero operators are
    allowed and simply never fire.
    """

    kraus: np.ndarray

    def __post_init__(self):
        k = np.array(self.kraus, dtype=np.complex128)
        if k.ndim == 2:
            k = k[None]
        if k.ndim != 3 or k.shape[1] != k.shape[2]:
            raise ValidationError(f"Kraus stack must have shape (B, d, d), got {k.shape}")
        err = completeness_residual(k)
        if err > COMPLETENESS_TOL:
            raise ValidationError(f"Kraus operators are not complete (residual {err:.3e})", err)
        per_column = np.sum(np.abs(k) > 1e-14, axis=1)
        if np.any(per_column > 1):
            raise ValidationError("Kraus operator has more than one nonzero entry in a column")
        k.setflags(write=False)
        object.__setattr__(self, "kraus", k)

    @property
    def dim(self) -> int:
        return self.kraus.shape[-1]

    @property
    def branches(self) -> int:
        return self.kraus.shape[0]

    def apply(self, rho) -> np.ndarray:
        a = as_matrix(rho)
        return np.sum(self.kraus @ a[..., None, :, :] @ dagger(self.kraus), axis=-3)

    @classmethod
    def identity(cls, dim: int) -> "IncoherentChannel":
        return cls(np.eye(dim)[None])

    @classmethod
    def dephasing(cls, dim: int) -> "IncoherentChannel":
        k = np.zeros((dim, dim, dim))
        for i in range(dim):
            k[i, i, i] = 1.0
        return cls(k)


def completeness_residual(kraus) -> float:
    k = np.asarray(kraus, dtype=np.complex128)
    s = np.sum(dagger(k) @ k, axis=-3)
    return float(np.max(np.abs(s - np.eye(k.shape[-1]))))


def _partial_permutation_op(perm, coeffs) -> np.ndarray:
    d = len(perm)
    k = np.zeros((d, d), dtype=np.complex128)
    k[perm, np.arange(d)] = coeffs
    return k


def random_incoherent_channel(dim: int, branches: int, seed) -> IncoherentChannel:
    """Random incoherent channel with ``branches`` Kraus operators.

    Each operator is a permutation times a random complex diagonal, with some
    columns zeroed. All but the last are rescaled so their column weights stay
    below one; the last operator takes up the remaining weight. A single
    branch is a permutation with random phases.
    """
    if branches < 1:
        raise ValidationError(f"branches must be positive, got {branches}")
    ss = np.random.SeedSequence(seed)
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(ss if attempt == 0 else ss.spawn(1)[0])
        phases = np.exp(2j * np.pi * rng.uniform(size=(branches, dim)))
        perms = [rng.permutation(dim) for _ in range(branches)]
        if branches == 1:
            return IncoherentChannel(_partial_permutation_op(perms[0], phases[0])[None])
        coeffs = rng.standard_normal((branches - 1, dim)) + 1j * rng.standard_normal(
            (branches - 1, dim)
        )
        coeffs *= rng.uniform(size=(branches - 1, dim)) < 0.8
        weight = np.sum(np.abs(coeffs) ** 2, axis=0)
        top = float(weight.max())
        if top > 0:
            coeffs *= np.sqrt(rng.uniform(0.2, 1.0) / top)
        residual = 1.0 - np.sum(np.abs(coeffs) ** 2, axis=0)
        if np.any(residual < -BRANCH_CUTOFF):
            continue
        last = np.sqrt(np.maximum(residual, 0.0)) * phases[-1]
        ops = [_partial_permutation_op(perms[i], coeffs[i]) for i in range(branches - 1)]
        ops.append(_partial_permutation_op(perms[-1], last))
        kraus = np.stack(ops)
        if completeness_residual(kraus) <= COMPLETENESS_TOL:
            return IncoherentChannel(kraus)
    raise ConstructionFailedError(
        f"no complete incoherent channel after {MAX_ATTEMPTS} attempts (seed {seed!r})"
    )


@dataclass
class MonotonicityReport:
    lhs: float
    rhs: float
    slack: float
    passed: bool
    branch_probabilities: np.ndarray
    reference_probabilities: np.ndarray | None = None


def _branches(rho: np.ndarray, kraus: np.ndarray):
    """Branch weights ``p`` (..., B) and normalized post-measurement states."""
    out = kraus @ rho[..., None, :, :] @ dagger(kraus)
    p = np.real(np.trace(out, axis1=-2, axis2=-1))
    live = p > BRANCH_CUTOFF
    d = rho.shape[-1]
    safe = np.where(live, p, 1.0)[..., None, None]
    states = np.where(live[..., None, None], out / safe, np.eye(d) / d)
    return p, live, states


def _eq3(rho, kraus, alpha):
    p, live, states = _branches(rho, kraus)
    delta = np.asarray(nearest_incoherent(rho, alpha))
    q = np.real(np.trace(kraus @ delta[..., None, :, :] @ dagger(kraus), axis1=-2, axis2=-1))
    if alpha > 1 and np.any(live & (q <= BRANCH_CUTOFF)):
        raise IllConditionedBranchError(
            "branch with p_i > 0 has q_i = 0, so q_i^(1-alpha) diverges"
        )
    qpow = np.zeros_like(q)
    pos = q > BRANCH_CUTOFF
    qpow[pos] = q[pos] ** (1.0 - alpha)
    vals = np.asarray(c_alpha(states, alpha))
    pw = np.where(live, np.maximum(p, 0.0), 0.0) ** alpha
    lhs = np.sum(np.where(live, pw * qpow * vals, 0.0), axis=-1)
    rhs = np.asarray(c_alpha(rho, alpha))
    return lhs, rhs, p, q


def _c2b(rho, kraus, measure_id):
    p, live, states = _branches(rho, kraus)
    vals = np.asarray(evaluate(states, measure_id))
    lhs = np.sum(np.where(live, p * vals, 0.0), axis=-1)
    rhs = np.asarray(evaluate(rho, measure_id))
    return lhs, rhs, p


def _c2a(rho, kraus, measure_id):
    phi = np.sum(kraus @ rho[..., None, :, :] @ dagger(kraus), axis=-3)
    return np.asarray(evaluate(phi, measure_id)), np.asarray(evaluate(rho, measure_id))


def _c3(weights, states, measure_id):
    mixture = np.sum(weights[..., None, None] * states, axis=-3)
    lhs = np.asarray(evaluate(mixture, measure_id))
    rhs = np.sum(weights * np.asarray(evaluate(states, measure_id)), axis=-1)
    return lhs, rhs


def _report(lhs, rhs, p, q=None) -> MonotonicityReport:
    lhs, rhs = float(lhs), float(rhs)
    return MonotonicityReport(lhs, rhs, rhs - lhs, lhs <= rhs + PASS_TOL, np.asarray(p), q)


def _pair(rho, ch: IncoherentChannel):
    a = as_matrix(rho)
    if a.shape != (ch.dim, ch.dim):
        raise DimensionMismatchError(f"state of shape {a.shape} vs channel on dim {ch.dim}")
    return a, ch.kraus


def check_generalized_monotonicity(rho, ch: IncoherentChannel, alpha: float) -> MonotonicityReport:
    alpha = float(alpha)
    _check_alpha(alpha)
    MeasureId.tsallis(alpha)  # rejects alpha ~ 1
    a, k = _pair(rho, ch)
    lhs, rhs, p, q = _eq3(a, k, alpha)
    return _report(lhs, rhs, p, np.asarray(q))


def check_c2b(rho, ch: IncoherentChannel, measure_id: MeasureId) -> MonotonicityReport:
    a, k = _pair(rho, ch)
    lhs, rhs, p = _c2b(a, k, measure_id)
    return _report(lhs, rhs, p)


def check_c2a(rho, ch: IncoherentChannel, measure_id: MeasureId) -> MonotonicityReport:
    a, k = _pair(rho, ch)
    lhs, rhs = _c2a(a, k, measure_id)
    return _report(lhs, rhs, np.ones(1))


def check_c3_convexity(ensemble, measure_id: MeasureId) -> MonotonicityReport:
    """Convexity: ``C(sum_i w_i rho_i) <= sum_i w_i C(rho_i)``."""
    if not ensemble:
        raise BadEnsembleError("ensemble is empty")
    weights = np.array([float(w) for w, _ in ensemble])
    states = [as_matrix(s) for _, s in ensemble]
    if len({s.shape for s in states}) != 1:
        raise BadEnsembleError("ensemble members have different dimensions")
    if np.any(weights < 0):
        raise BadEnsembleError("ensemble weights must be nonnegative")
    if abs(weights.sum() - 1.0) > 1e-10:
        raise BadEnsembleError(f"ensemble weights sum to {weights.sum()!r}, not 1")
    lhs, rhs = _c3(weights, np.stack(states), measure_id)
    return _report(lhs, rhs, weights)


# Seeded batch harnesses -------------------------------------------------


def _case_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def generate_case(dim: int, seed: int, index: int):
    """State and channel of case ``index``; every third state is pure."""
    rng = _case_rng(seed, index)
    if index % 3 == 2:
        rho = projector(haar_random_pure_batch(dim, 1, rng)[0])
    else:
        rho = ginibre_random_density_batch(dim, 1, rng)[0]
    branches = int(rng.integers(1, MAX_BRANCHES + 1))
    ch = random_incoherent_channel(dim, branches, int(rng.integers(2**62)))
    return rho, ch


def generate_cases(dim: int, cases: int, seed: int):
    """Stacked states ``(N, d, d)`` and zero-padded Kraus ops ``(N, 4, d, d)``."""
    rhos = np.empty((cases, dim, dim), dtype=np.complex128)
    kraus = np.zeros((cases, MAX_BRANCHES, dim, dim), dtype=np.complex128)
    for k in range(cases):
        rho, ch = generate_case(dim, seed, k)
        rhos[k] = rho
        kraus[k, : ch.branches] = ch.kraus
    return rhos, kraus


def generate_ensembles(dim: int, cases: int, seed: int, size: int = 3):
    weights = np.empty((cases, size))
    states = np.empty((cases, size, dim, dim), dtype=np.complex128)
    for k in range(cases):
        rng = _case_rng(seed, k)
        weights[k] = rng.dirichlet(np.ones(size))
        states[k] = ginibre_random_density_batch(dim, size, rng)
    return weights, states


@dataclass
class BatchResult:
    """Outcome of one harness run; ``passed[k]`` is ``lhs[k] <= rhs[k] + 1e-8``."""

    kind: str
    label: str
    dim: int
    seed: int
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def slack(self) -> np.ndarray:
        return self.rhs - self.lhs

    @property
    def passed(self) -> np.ndarray:
        return self.lhs <= self.rhs + PASS_TOL

    @property
    def cases(self) -> int:
        return int(self.lhs.size)

    @property
    def failures(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(~self.passed)]

    @property
    def all_passed(self) -> bool:
        return bool(np.all(self.passed))

    def summary(self) -> str:
        return (
            f"{self.kind} {self.label} dim={self.dim} seed={self.seed} cases={self.cases} "
            f"failures={len(self.failures)} min_slack={float(self.slack.min()):.3e}"
        )


def run_eq3(dim: int, cases: int, alpha: float, seed: int, data=None) -> BatchResult:
    alpha = float(alpha)
    MeasureId.tsallis(alpha)
    rhos, kraus = data if data is not None else generate_cases(dim, cases, seed)
    lhs, rhs, _, _ = _eq3(rhos, kraus, alpha)
    return BatchResult("eq3", f"alpha={alpha:g}", dim, seed, lhs, rhs)


def run_c2a(dim: int, cases: int, measure_id: MeasureId, seed: int, data=None) -> BatchResult:
    rhos, kraus = data if data is not None else generate_cases(dim, cases, seed)
    lhs, rhs = _c2a(rhos, kraus, measure_id)
    return BatchResult("c2a", measure_id.label, dim, seed, lhs, rhs)


def run_c2b(dim: int, cases: int, measure_id: MeasureId, seed: int, data=None) -> BatchResult:
    rhos, kraus = data if data is not None else generate_cases(dim, cases, seed)
    lhs, rhs, _ = _c2b(rhos, kraus, measure_id)
    return BatchResult("c2b", measure_id.label, dim, seed, lhs, rhs)


def run_c3(dim: int, cases: int, measure_id: MeasureId, seed: int, size: int = 3,
           data=None) -> BatchResult:
    weights, states = data if data is not None else generate_ensembles(dim, cases, seed, size)
    lhs, rhs = _c3(weights, states, measure_id)
    return BatchResult("c3", measure_id.label, dim, seed, lhs, rhs)


def _matrix_json(m) -> list:
    m = np.asarray(m)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def _matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def explore_c2b(dim: int, cases: int, alpha: float, seed: int, data=None):
    """Search for visible C2b violations of ``C_alpha``.

    Returns ``(result, witnesses)``: the batch result and one JSON-ready record
    per failing case, each carrying the exact state and Kraus operators so
    :func:`replay_c2b_witness` can recompute it.
    """
    mid = MeasureId.tsallis(alpha)
    rhos, kraus = data if data is not None else generate_cases(dim, cases, seed)
    result = run_c2b(dim, cases, mid, seed, data=(rhos, kraus))
    witnesses = []
    for k in result.failures:
        ops = [op for op in kraus[k] if np.any(op != 0)]
        witnesses.append({
            "kind": "c2b",
            "measure": mid.label,
            "alpha": mid.alpha,
            "dim": dim,
            "seed": seed,
            "index": k,
            "rho": _matrix_json(rhos[k]),
            "kraus": [_matrix_json(op) for op in ops],
            "lhs": float(result.lhs[k]),
            "rhs": float(result.rhs[k]),
        })
    return result, witnesses


def replay_c2b_witness(record: dict) -> MonotonicityReport:
    rho = _matrix_from_json(record["rho"])
    ch = IncoherentChannel(np.stack([_matrix_from_json(op) for op in record["kraus"]]))
    return check_c2b(rho, ch, MeasureId.parse(record["measure"]))
