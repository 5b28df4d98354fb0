
import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from tsallis_coherence.errors import AlphaOutOfRangeError, SupportMismatchError, ValidationError
from tsallis_coherence.hermitian import PureState
from tsallis_coherence.measures import (
    MeasureId,
    MeasureKind,
    c2_entrywise,
    c_alpha,
    c_l1,
    c_l2,
    c_rel_entropy,
    evaluate,
    measure,
    nearest_incoherent,
    tsallis_divergence,
    tsallis_r,
)

from conftest import S21, random_density, tz

L1, L2, REL = MeasureId.l1(), MeasureId.l2(), MeasureId.rel_entropy()


def psi(weights):
    return PureState(np.sqrt(np.asarray(weights, dtype=float))).density()


def oracle_power(rho, a):
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0, None)
    return (v * w**a) @ v.conj().T


def oracle_c_alpha(rho, a):
    d = np.real(np.diag(oracle_power(rho, a)))
    r = np.sum(np.clip(d, 0, None) ** (1 / a))
    return (r**a - 1) / (a - 1)


def oracle_rel(rho):
    w = np.clip(np.linalg.eigvalsh(rho), 0, None)
    p = np.clip(np.real(np.diag(rho)), 0, None)
    h = lambda x: -np.sum(x[x > 0] * np.log(x[x > 0]))
    return h(p) - h(w)


# reference values ------------------------------------------------------


@pytest.mark.parametrize(
    "state, mid, expected",
    [
        (psi([0.7, 0.2, 0.1]), L1, 1.5603),
        (psi([12 / 25, 12 / 25, 1 / 25]), L1, 1.5143),
        (psi([12 / 25, 12 / 25, 1 / 25]), MeasureId.tsallis(0.5), 0.6400),
        (psi([0.7, 0.2, 0.1]), MeasureId.tsallis(0.5), 0.5303),
        (tz(0.5, 0.5), MeasureId.tsallis(2), 0.3090),
        (tz(0.5, 0.5), REL, 0.1458),
        (tz(0.5, 0.0), REL, 0.13081),
        (tz(0.5, 0.0), MeasureId.tsallis(0.5), 0.0681),
        (tz(0.48, 0.64), MeasureId.tsallis(2), 0.3326),
        (tz(0.4, S21), REL, 0.17344),
    ],
)
def test_reference_values(state, mid, expected):
    assert measure(state, mid).value == pytest.approx(expected, abs=5e-4)


# simple closed forms -----------------------------------------------------


@pytest.mark.parametrize("t, z", [(0.0, 0.3), (0.5, 0.5), (0.4, S21), (1.0, 0.0), (0.2, -0.7)])
def test_l1_l2_on_disk(t, z):
    rho = tz(t, z)
    assert c_l1(rho) == pytest.approx(t, abs=1e-14)
    assert c_l2(rho) == pytest.approx(t * t / 2, abs=1e-14)


@pytest.mark.parametrize("mid", [L1, L2, REL, MeasureId.tsallis(0.3), MeasureId.tsallis(2)])
def test_incoherent_zero(mid):
    rho = np.diag([0.2, 0.5, 0.3])
    assert evaluate(rho, mid) == pytest.approx(0.0, abs=1e-14)
    assert evaluate(np.diag([1.0, 0.0]), mid) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 1.5, 2.0])
@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.9])
def test_pure_qubit_r(alpha, p):
    rho = psi([p, 1 - p])
    assert tsallis_r(rho, alpha) == pytest.approx(p ** (1 / alpha) + (1 - p) ** (1 / alpha), abs=1e-12)


def test_r_half_example():
    assert tsallis_r(tz(0.5, 0.5), 0.5) == pytest.approx(0.9267767, abs=1e-7)


def test_r_incoherent_is_one():
    assert tsallis_r(np.diag([0.1, 0.6, 0.3]), 0.7) == pytest.approx(1.0, abs=1e-14)


# independent oracles -----------------------------------------------------


def test_agreement_with_numpy_oracle(rng):
    for k in range(1000):
        dim = 2 + k % 3
        rho = random_density(rng, dim)
        for a in (0.3, 0.5, 1.5, 2.0):
            assert c_alpha(rho, a) == pytest.approx(oracle_c_alpha(rho, a), abs=1e-10)
        assert c_rel_entropy(rho) == pytest.approx(oracle_rel(rho), abs=1e-10)
        off = rho - np.diag(np.diag(rho))
        assert c_l1(rho) == pytest.approx(np.abs(off).sum(), abs=1e-12)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.5])
def test_power_against_scipy(rng, alpha):
    rho = random_density(rng, 3)
    ref = sla.fractional_matrix_power(rho, alpha)
    d = np.real(np.diag(ref)) ** (1 / alpha)
    assert tsallis_r(rho, alpha) == pytest.approx(d.sum(), abs=1e-9)


def test_rel_entropy_against_scipy_logm(rng):
    rho = random_density(rng, 3)
    s = -np.trace(rho @ sla.logm(rho)).real
    p = np.real(np.diag(rho))
    assert c_rel_entropy(rho) == pytest.approx(-np.sum(p * np.log(p)) - s, abs=1e-9)


def test_c2_entrywise(rng):
    for k in range(200):
        rho = random_density(rng, 2 + k % 4)
        assert c2_entrywise(rho) == pytest.approx(c_alpha(rho, 2.0), abs=1e-10)


def test_batched_matches_single(rng):
    stack = np.stack([random_density(rng, 3) for _ in range(30)])
    out = c_alpha(stack, 0.5)
    assert out.shape == (30,)
    assert np.allclose(out, [c_alpha(r, 0.5) for r in stack], atol=1e-14)


# structure ---------------------------------------------------------------


@pytest.mark.parametrize("sign", [-1, 1])
def test_alpha_one_continuity(rng, sign):
    for _ in range(50):
        rho = random_density(rng, 2)
        assert abs(c_alpha(rho, 1 + sign * 1e-4) - c_rel_entropy(rho)) <= 1e-3


def test_alpha_one_routes_to_rel(rng):
    rho = random_density(rng, 3)
    assert c_alpha(rho, 1.0) == c_rel_entropy(rho)


@pytest.mark.parametrize("alpha", [0.0, -0.5, 2.0001, 3.0])
def test_alpha_range(alpha):
    with pytest.raises(AlphaOutOfRangeError):
        c_alpha(np.eye(2) / 2, alpha)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([0.3, 0.5, 1.0, 1.5, 2.0]))
def test_diagonal_phase_invariance(seed, alpha):
    g = np.random.default_rng(seed)
    rho = random_density(g, 3)
    u = np.diag(np.exp(1j * g.uniform(0, 2 * np.pi, 3)))
    rho2 = u @ rho @ u.conj().T
    assert c_alpha(rho2, alpha) == pytest.approx(c_alpha(rho, alpha), abs=1e-10)
    assert c_l1(rho2) == pytest.approx(c_l1(rho), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([0.3, 0.7, 1.5, 2.0]))
def test_bounded_by_max_coherent(seed, alpha):
    # maximally coherent state is the maximizer among qubits
    rho = random_density(np.random.default_rng(seed), 2)
    top = c_alpha(np.full((2, 2), 0.5), alpha)
    assert -1e-12 <= c_alpha(rho, alpha) <= top + 1e-12


# nearest incoherent state and divergence ----------------------------------


def test_nearest_incoherent_fixed_point():
    rho = np.diag([0.3, 0.7])
    assert np.allclose(nearest_incoherent(rho, 0.5).matrix, rho)


def test_nearest_incoherent_max_coherent():
    out = nearest_incoherent(np.full((2, 2), 0.5), 2.0)
    assert np.allclose(out.matrix, np.eye(2) / 2)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_nearest_incoherent_is_minimizer(rng, alpha):
    rho = random_density(rng, 3)
    best = tsallis_divergence(rho, nearest_incoherent(rho, alpha), alpha)
    assert best == pytest.approx(c_alpha(rho, alpha), abs=1e-10)
    # brute force over diagonal references: Tr(rho^a d^(1-a)) only sees diag(rho^a)
    w = rng.dirichlet(np.ones(3), size=10_000)
    diag_pow = np.real(np.diag(oracle_power(rho, alpha)))
    values = (np.sum(diag_pow * w ** (1 - alpha), axis=1) - 1) / (alpha - 1)
    assert values.min() >= best - 1e-12
    for d in w[:20]:
        assert tsallis_divergence(rho, np.diag(d), alpha) >= best - 1e-12


def test_divergence_examples():
    rho = np.diag([0.4, 0.6])
    assert tsallis_divergence(rho, rho, 0.5) == pytest.approx(0.0, abs=1e-14)
    r1 = tz(0.5, 0.0)
    assert tsallis_divergence(r1, nearest_incoherent(r1, 0.5), 0.5) == pytest.approx(0.0681, abs=5e-4)
    plus = np.full((2, 2), 0.5)
    assert tsallis_divergence(plus, np.eye(2) / 2, 2.0) == pytest.approx(1.0, abs=1e-12)


def test_divergence_support_mismatch():
    with pytest.raises(SupportMismatchError):
        tsallis_divergence(np.full((2, 2), 0.5), np.diag([1.0, 0.0]), 2.0)
    # alpha < 1 needs no support condition
    tsallis_divergence(np.full((2, 2), 0.5), np.diag([1.0, 0.0]), 0.5)


# MeasureId ----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, kind, alpha",
    [("l1", MeasureKind.L1, None), ("L2", MeasureKind.L2, None), ("rel", MeasureKind.REL_ENTROPY, None),
     ("tsallis:0.5", MeasureKind.TSALLIS, 0.5), ("tsallis:2", MeasureKind.TSALLIS, 2.0)],
)
def test_measure_parse(text, kind, alpha):
    m = MeasureId.parse(text)
    assert m.kind is kind and m.alpha == alpha
    assert MeasureId.parse(m.label) == m


@pytest.mark.parametrize("text", ["tsallis:1", "tsallis:0", "tsallis:2.5", "foo", "tsallis:x"])
def test_measure_parse_rejects(text):
    with pytest.raises(ValidationError):
        MeasureId.parse(text)


def test_for_alpha():
    assert MeasureId.for_alpha(1.0) == REL
    assert MeasureId.for_alpha(0.5) == MeasureId.tsallis(0.5)
