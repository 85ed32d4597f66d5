"""State containers, projectors, and linear-algebra helpers."""

import numpy as np
import pytest

from swapsim import (
    BellKind,
    DensityMatrix,
    Ket,
    ProjectorBasis,
    bell_state,
    expectation,
    partial_trace,
    phase_projector,
    psd_sqrt,
    tensor,
    z_projector,
)

RT2 = 1.0 / np.sqrt(2.0)

# basis order: |ee>, |el>, |le>, |ll>
BELL_VECTORS = {
    BellKind.PHI_PLUS: np.array([RT2, 0.0, 0.0, RT2]),
    BellKind.PHI_MINUS: np.array([RT2, 0.0, 0.0, -RT2]),
    BellKind.PSI_PLUS: np.array([0.0, RT2, RT2, 0.0]),
    BellKind.PSI_MINUS: np.array([0.0, RT2, -RT2, 0.0]),
}


def random_density(rng, dim=4):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def test_bell_states_match_frozen_vectors():
    for kind, vec in BELL_VECTORS.items():
        np.testing.assert_allclose(bell_state(kind).vector, vec, atol=1e-12)


def test_bell_states_are_orthonormal():
    kets = [bell_state(k).vector for k in BellKind]
    gram = np.array([[np.vdot(a, b) for b in kets] for a in kets])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)


def test_ket_rejects_unnormalized_vector():
    with pytest.raises(ValueError):
        Ket(np.array([1.0, 1.0]))


def test_ket_density_is_projector():
    k = bell_state(BellKind.PSI_MINUS)
    rho = k.density()
    np.testing.assert_allclose(rho.matrix @ rho.matrix, rho.matrix, atol=1e-12)
    assert abs(np.trace(rho.matrix) - 1.0) < 1e-12


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[1.0, 1.0], [0.0, 0.0]]))  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))  # negative eigenvalue
    with pytest.raises(ValueError):
        DensityMatrix(np.ones((2, 3)))  # not square


def test_density_matrix_accepts_tiny_negative_eigenvalue():
    # numerical dust below the floor magnitude is clamped, not rejected
    m = np.diag([1.0 + 5e-9, -5e-9])
    DensityMatrix(m)


def test_tensor_of_kets_matches_kron():
    a = Ket(np.array([1.0, 0.0]))
    b = Ket(np.array([RT2, RT2]))
    np.testing.assert_allclose(
        tensor(a, b).vector, np.kron(a.vector, b.vector), atol=1e-12
    )


def test_tensor_of_densities_matches_kron():
    rng = np.random.default_rng(3)
    ra, rb = random_density(rng, 2), random_density(rng, 2)
    np.testing.assert_allclose(
        tensor(ra, rb).matrix, np.kron(ra.matrix, rb.matrix), atol=1e-12
    )


def test_tensor_rejects_mixed_types():
    with pytest.raises(TypeError):
        tensor(Ket(np.array([1.0, 0.0])), random_density(np.random.default_rng(0), 2))


def test_partial_trace_of_bell_state_is_maximally_mixed():
    rho = bell_state(BellKind.PHI_PLUS).density()
    for keep in ((0,), (1,)):
        red = partial_trace(rho, (2, 2), keep)
        np.testing.assert_allclose(red.matrix, np.eye(2) / 2.0, atol=1e-12)


def test_partial_trace_of_product_state_recovers_factors():
    rng = np.random.default_rng(11)
    ra, rb = random_density(rng, 2), random_density(rng, 2)
    rho = tensor(ra, rb)
    np.testing.assert_allclose(partial_trace(rho, (2, 2), (0,)).matrix, ra.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, (2, 2), (1,)).matrix, rb.matrix, atol=1e-12)


def test_partial_trace_keep_order_swaps_subsystems():
    rng = np.random.default_rng(12)
    ra, rb = random_density(rng, 2), random_density(rng, 2)
    rho = tensor(ra, rb)
    swapped = partial_trace(rho, (2, 2), (1, 0))
    np.testing.assert_allclose(swapped.matrix, np.kron(rb.matrix, ra.matrix), atol=1e-12)


def test_partial_trace_three_parties_mixed_dims():
    rng = np.random.default_rng(13)
    ra, rb, rc = random_density(rng, 2), random_density(rng, 3), random_density(rng, 2)
    m = np.kron(np.kron(ra.matrix, rb.matrix), rc.matrix)
    rho = DensityMatrix(m)
    red = partial_trace(rho, (2, 3, 2), (2, 0))
    np.testing.assert_allclose(red.matrix, np.kron(rc.matrix, ra.matrix), atol=1e-12)


def test_partial_trace_validates_arguments():
    rho = bell_state(BellKind.PHI_PLUS).density()
    with pytest.raises(ValueError):
        partial_trace(rho, (2, 3), (0,))  # dims do not match shape
    with pytest.raises(ValueError):
        partial_trace(rho, (2, 2), (0, 0))  # repeated subsystem
    with pytest.raises(ValueError):
        partial_trace(rho, (2, 2), (2,))  # out of range


def test_z_projectors_sum_to_identity():
    early, late = z_projector("early"), z_projector("late")
    np.testing.assert_allclose(early.matrix + late.matrix, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(early.matrix, np.diag([1.0, 0.0]), atol=1e-12)


def test_phase_projector_matrix():
    phi = 0.7
    p = phase_projector(phi)
    expected = 0.5 * np.array(
        [[1.0, np.exp(-1j * phi)], [np.exp(1j * phi), 1.0]]
    )
    np.testing.assert_allclose(p.matrix, expected, atol=1e-12)
    assert p.basis is ProjectorBasis.PHASE
    # orthogonal partner at phi + pi completes the basis
    q = phase_projector(phi + np.pi)
    np.testing.assert_allclose(p.matrix + q.matrix, np.eye(2), atol=1e-12)


def test_phase_projector_ket_roundtrip():
    p = phase_projector(1.2)
    k = p.ket()
    np.testing.assert_allclose(np.outer(k.vector, k.vector.conj()), p.matrix, atol=1e-12)


def test_expectation_of_bell_correlations():
    z = np.diag([1.0, -1.0])
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    phi = bell_state(BellKind.PHI_PLUS).density()
    psi_m = bell_state(BellKind.PSI_MINUS).density()
    assert abs(expectation(phi, np.kron(z, z)) - 1.0) < 1e-12
    assert abs(expectation(phi, np.kron(x, x)) - 1.0) < 1e-12
    assert abs(expectation(psi_m, np.kron(z, z)) + 1.0) < 1e-12
    assert abs(expectation(psi_m, np.kron(x, x)) + 1.0) < 1e-12


def test_expectation_accepts_projector():
    rho = z_projector("early").ket().density()
    assert abs(expectation(rho, z_projector("early")) - 1.0) < 1e-12
    assert abs(expectation(rho, z_projector("late"))) < 1e-12


def test_expectation_rejects_nonreal_result():
    rho = bell_state(BellKind.PHI_PLUS).density()
    op = np.zeros((4, 4), dtype=complex)
    op[3, 0] = 1.0j  # pairs with the rho_{03} coherence, trace = i/2
    with pytest.raises(ValueError):
        expectation(rho, op)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(21)
    rho = random_density(rng, 4)
    s = psd_sqrt(rho.matrix)
    np.testing.assert_allclose(s @ s, rho.matrix, atol=1e-10)
    np.testing.assert_allclose(s, s.conj().T, atol=1e-12)


def test_psd_sqrt_rejects_indefinite_matrix():
    with pytest.raises(ValueError):
        psd_sqrt(np.diag([1.0, -0.5]))
