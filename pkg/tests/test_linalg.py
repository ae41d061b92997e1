import numpy as np
import pytest

from collisim import linalg


def test_pauli_algebra():
    assert np.allclose(linalg.SX @ linalg.SY, 1j * linalg.SZ)
    assert np.allclose(linalg.SMINUS, (linalg.SX + 1j * linalg.SY) / 2)
    # sigma^- |e> = |g> with |e> = |1>.
    assert np.allclose(linalg.SMINUS @ [0, 1], [1, 0])


def test_hermitian_checks():
    A = np.array([[1, 1j], [-1j, 2]])
    assert linalg.is_hermitian(A)
    assert not linalg.is_hermitian(A + 1e-6 * linalg.SMINUS)
    H = linalg.hermitianize(A + 0.1 * linalg.SMINUS)
    assert linalg.is_hermitian(H)


def test_density_matrix_validation():
    linalg.check_density_matrix(linalg.RHO_SUP)
    with pytest.raises(ValueError):
        linalg.check_density_matrix(2 * linalg.RHO_SUP)
    with pytest.raises(ValueError):
        linalg.check_density_matrix(np.diag([1.5, -0.5, 0, 0]).astype(complex))


def test_project_to_density():
    bad = np.diag([1.1, -0.1, 0, 0]).astype(complex)
    rho = linalg.project_to_density(bad)
    w = np.linalg.eigvalsh(rho)
    assert w.min() >= 0 and abs(np.trace(rho) - 1) < 1e-12


def test_norms():
    A = np.array([[0, 2], [0, 0]], dtype=complex)
    assert linalg.trace_norm(A) == pytest.approx(2)
    assert linalg.operator_norm(A) == pytest.approx(2)
    U = linalg.matrix_exp(1j * 0.3 * linalg.SX)
    assert linalg.operator_norm(U) == pytest.approx(1)


def test_fidelity_and_trace_distance():
    assert linalg.fidelity(linalg.RHO_GG, linalg.RHO_GG) == pytest.approx(1)
    assert linalg.fidelity(linalg.RHO_GG, linalg.RHO_EE) == pytest.approx(0, abs=1e-12)
    assert linalg.trace_distance(linalg.RHO_GG, linalg.RHO_EE) == pytest.approx(1)
    # Pure states: F = |<a|b>|^2.
    rho = linalg.projector([1, 1, 0, 0])
    assert linalg.fidelity(linalg.RHO_GG, rho) == pytest.approx(0.5)


def test_partial_trace():
    rho = linalg.tensor(linalg.RHO_SUP, np.diag([0.25, 0.75]).astype(complex))
    assert np.allclose(linalg.partial_trace(rho, [4, 2], keep=[0]), linalg.RHO_SUP)
    assert np.allclose(linalg.partial_trace(rho, [4, 2], keep=[1]),
                       np.diag([0.25, 0.75]))
    assert np.allclose(linalg.partial_trace(rho, [2, 2, 2], keep=[0, 1]),
                       linalg.RHO_SUP)


def test_vec_unvec_column_stacking():
    A = np.arange(4).reshape(2, 2).astype(complex)
    v = linalg.vec(A)
    assert np.allclose(v, [0, 2, 1, 3])
    assert np.allclose(linalg.unvec(v), A)
    # vec(A X B) = (B^T (x) A) vec(X).
    rng = np.random.default_rng(0)
    A, X, B = (rng.standard_normal((3, 3)) + 0j for _ in range(3))
    assert np.allclose(linalg.vec(A @ X @ B),
                       np.kron(B.T, A) @ linalg.vec(X))


def test_matrix_exp_rejects_nonfinite():
    with pytest.raises(ValueError):
        linalg.matrix_exp(np.array([[np.inf, 0], [0, 0]]))


def test_state_constants():
    # |sup> = (|ge> + |eg>)/sqrt(2) with qubit 1 the left factor.
    assert linalg.RHO_SUP[1, 1] == pytest.approx(0.5)
    assert linalg.RHO_SUP[1, 2] == pytest.approx(0.5)
    assert linalg.RHO_SUB[1, 2] == pytest.approx(-0.5)
    for rho in linalg.STATE_LABELS.values():
        linalg.check_density_matrix(rho)
