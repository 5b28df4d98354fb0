import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsallis_coherence.errors import NotHermitianError, NotPositiveError, TraceNotOneError
from tsallis_coherence.hermitian import (
    DensityMatrix,
    PureState,
    eigh,
    matrix_power,
    projector,
    validate_density,
)
from tsallis_coherence.sampling import random_hermitian_with_spectrum

from conftest import random_density, tz


def test_validate_examples():
    validate_density(np.diag([0.5, 0.5]))
    validate_density([[0.75, 0.25], [0.25, 0.25]])
    with pytest.raises(NotPositiveError) as exc:
        validate_density([[0.75, 0.5], [0.5, 0.25]])
    assert exc.value.residual == pytest.approx((1 - np.sqrt(1.25)) / 2, abs=1e-12)


@pytest.mark.parametrize(
    "m, err",
    [
        ([[0.5, 0.1], [0.2, 0.5]], NotHermitianError),
        ([[0.6, 0.0], [0.0, 0.6]], TraceNotOneError),
        ([[1.2, 0.0], [0.0, -0.2]], NotPositiveError),
    ],
)
def test_validate_rejects(m, err):
    with pytest.raises(err):
        DensityMatrix(np.array(m, dtype=complex))


def test_density_is_read_only():
    d = validate_density(np.eye(2) / 2)
    with pytest.raises(ValueError):
        d.matrix[0, 0] = 1.0


def test_eigh_identity():
    s = eigh(np.eye(3))
    assert np.allclose(s.eigenvalues, [1, 1, 1], atol=1e-14)


def test_eigh_rho_tz():
    s = eigh(tz(0.5, 0.5))
    r = np.sqrt(0.5)
    assert np.allclose(s.eigenvalues, [(1 + r) / 2, (1 - r) / 2], atol=1e-14)


def test_eigh_constructed_spectrum():
    spec = [0.4, 0.3, 0.2, 0.1]
    h = random_hermitian_with_spectrum(spec, seed=5)
    assert np.allclose(eigh(h).eigenvalues, spec, atol=1e-10)


def test_eigh_against_numpy(rng):
    # 1000 random Hermitian matrices, dims 2..8
    for k in range(1000):
        n = 2 + k % 7
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (g + g.conj().T) / 2
        s = eigh(h, check=False)
        ref = np.sort(np.linalg.eigvalsh(h))[::-1]
        assert np.allclose(s.eigenvalues, ref, atol=1e-10)
        assert np.allclose(s.reconstruct(), h, atol=1e-10)
        v = s.eigenvectors
        assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-10)


def test_eigh_batched_matches_single(rng):
    stack = np.stack([random_density(rng, 4) for _ in range(20)])
    batch = eigh(stack)
    for i, m in enumerate(stack):
        assert np.allclose(batch.eigenvalues[i], eigh(m).eigenvalues, atol=1e-13)


def test_eigenvalues_descending(rng):
    lam = eigh(random_density(rng, 6)).eigenvalues
    assert np.all(np.diff(lam) <= 0)


def test_matrix_power_identity_exponent(rng):
    rho = random_density(rng, 3)
    assert np.allclose(matrix_power(rho, 1.0), rho, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.5, 2.0])
def test_matrix_power_projector(rng, alpha):
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    p = projector(v / np.linalg.norm(v))
    assert np.allclose(matrix_power(p, alpha), p, atol=1e-12)


def test_matrix_power_diagonal():
    out = matrix_power(np.diag([0.25, 0.75]), 0.5)
    assert np.allclose(out, np.diag([0.5, 0.8660254037844386]), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 2.0), st.integers(0, 2**31))
def test_matrix_power_semigroup(alpha, seed):
    rho = random_density(np.random.default_rng(seed), 3)
    half = matrix_power(rho, alpha / 2)
    assert np.allclose(half @ half, matrix_power(rho, alpha), atol=1e-10)


def test_pure_state_normalization():
    psi = PureState.normalized([3, 4j])
    assert np.isclose(np.vdot(psi.amplitudes, psi.amplitudes).real, 1.0)
    rho = psi.density()
    assert np.allclose(rho.matrix @ rho.matrix, rho.matrix)
