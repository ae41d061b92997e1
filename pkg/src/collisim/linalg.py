"""Dense complex linear algebra for few-qubit operators.

All operators are plain ``numpy.ndarray`` with complex dtype. Dimensions in
scope are small (<= 64), so everything goes through dense eigensolvers.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

HERMITICITY_TOL = 1e-12
PSD_EIG_FLOOR = -1e-10
TRACE_TOL = 1e-10

# Pauli matrices in the computational basis.
ID2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
# Lowering operator |g><e| with the excited state mapped to |1>.
SMINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SPLUS = SMINUS.conj().T


class DimensionError(ValueError):
    """Raised when operator shapes are incompatible."""


def _as_square(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def is_hermitian(A: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    A = _as_square(A)
    return bool(np.max(np.abs(A - A.conj().T)) <= tol)


def hermitianize(A: np.ndarray) -> np.ndarray:
    A = _as_square(A)
    return (A + A.conj().T) / 2


def check_density_matrix(rho: np.ndarray, tol_trace: float = TRACE_TOL,
                         eig_floor: float = PSD_EIG_FLOOR) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, eigenvalues >= floor."""
    rho = _as_square(rho)
    if not is_hermitian(rho, tol=1e-10):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol_trace:
        raise ValueError(f"density matrix trace {tr} differs from 1")
    w = np.linalg.eigvalsh(hermitianize(rho))
    if w.min() < eig_floor:
        raise ValueError(f"density matrix has eigenvalue {w.min()} below floor")
    return rho


def project_to_density(A: np.ndarray, eig_floor: float = PSD_EIG_FLOOR) -> np.ndarray:
    """Clip eigenvalues below the floor to zero and rescale to unit trace."""
    A = hermitianize(A)
    w, V = np.linalg.eigh(A)
    w = np.where(w < eig_floor, 0.0, np.maximum(w, 0.0))
    tr = w.sum()
    if tr <= 0:
        raise ValueError("matrix has no positive weight to renormalize")
    return (V * (w / tr)) @ V.conj().T


def pure_state(amplitudes: np.ndarray) -> np.ndarray:
    """Normalize a complex amplitude vector to a unit-norm pure state."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero amplitude vector")
    return v / n


def projector(psi: np.ndarray) -> np.ndarray:
    psi = pure_state(psi)
    return np.outer(psi, psi.conj())


def singular_values(A: np.ndarray) -> np.ndarray:
    """Singular values via a Hermitian eigensolve of A^dag A (descending)."""
    A = _as_square(A)
    w = np.linalg.eigvalsh(A.conj().T @ A)
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def schatten_norm(A: np.ndarray, p) -> float:
    """Schatten norm of a square matrix for p = 1 (trace) or p = inf (operator)."""
    s = singular_values(A)
    if p == 1:
        return float(s.sum())
    if p == np.inf or p == "inf":
        return float(s[0]) if s.size else 0.0
    raise ValueError("only p = 1 and p = inf are supported")


def trace_norm(A: np.ndarray) -> float:
    return schatten_norm(A, 1)


def operator_norm(A: np.ndarray) -> float:
    return schatten_norm(A, np.inf)


def sqrtm_psd(A: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix."""
    A = hermitianize(A)
    w, V = np.linalg.eigh(A)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (V * w) @ V.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0, 1]."""
    rho = _as_square(rho)
    sigma = _as_square(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError("fidelity requires equal dimensions")
    s = sqrtm_psd(rho)
    w = np.linalg.eigvalsh(hermitianize(s @ sigma @ s))
    f = np.sqrt(np.clip(w, 0.0, None)).sum() ** 2
    return float(min(max(f, 0.0), 1.0))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of rho - sigma."""
    rho = _as_square(rho)
    sigma = _as_square(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError("trace_distance requires equal dimensions")
    return 0.5 * trace_norm(rho - sigma)


def matrix_exp(A: np.ndarray) -> np.ndarray:
    A = _as_square(A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix_exp requires finite entries")
    return scipy.linalg.expm(A)


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices, left factor most significant."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out the subsystems not listed in ``keep``.

    ``dims`` are subsystem dimensions ordered with the leftmost tensor factor
    first; ``keep`` is an iterable of subsystem indices to retain (in the
    given order of ``dims``).
    """
    rho = _as_square(rho)
    dims = list(dims)
    if int(np.prod(dims)) != rho.shape[0]:
        raise DimensionError(
            f"subsystem dims {dims} do not factor dimension {rho.shape[0]}")
    keep = sorted(set(keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError("keep indices out of range")
    t = rho.reshape(dims + dims)
    # Contract traced subsystems pairwise.
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(traced):
        axis1 = i - sum(1 for j in traced[:count] if j < i)
        offset = n - count
        t = np.trace(t, axis1=axis1, axis2=axis1 + offset)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def vec(A: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization (the convention used package-wide)."""
    return np.asarray(A, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if rows is None:
        rows = int(round(np.sqrt(v.size)))
    return v.reshape(rows, v.size // rows, order="F")


# Two-qubit states of the collective-decay problem. Qubit 1 is the left
# tensor factor and |e> is the computational |1>, so "10" reads |eg>.
KET_GG = pure_state([1, 0, 0, 0])
KET_GE = pure_state([0, 1, 0, 0])
KET_EG = pure_state([0, 0, 1, 0])
KET_EE = pure_state([0, 0, 0, 1])
KET_SUP = pure_state([0, 1, 1, 0])
KET_SUB = pure_state([0, -1, 1, 0])

RHO_GG = projector(KET_GG)
RHO_EE = projector(KET_EE)
RHO_SUP = projector(KET_SUP)
RHO_SUB = projector(KET_SUB)

STATE_LABELS = {
    "gg": RHO_GG,
    "ee": RHO_EE,
    "sup": RHO_SUP,
    "sub": RHO_SUB,
}
