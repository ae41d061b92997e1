"""Quantum channel representations: Choi, Kraus and Liouville.

Conventions fixed once and used everywhere:

* vectorization is column-stacking, so a Kraus map rho -> K rho K^dag has
  Liouville matrix conj(K) (x) K;
* the Choi matrix carries the input space as the left tensor factor,
  J = sum_ij |i><j| (x) T[|i><j|], so trace preservation reads
  Tr_out(J) = I over the second factor;
* the identity channel therefore has Choi sum_ij |ii><jj| with trace d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import DimensionError, tensor, unvec, vec

CPTP_TOL = 1e-8
KRAUS_EIG_CUTOFF = 1e-10


def _matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((d, d), dtype=complex)
    E[i, j] = 1.0
    return E


@dataclass(frozen=True)
class QuantumChannel:
    """A linear map on operators, stored in one canonical representation."""

    dim_in: int
    dim_out: int
    rep: str                      # "choi" | "kraus" | "liouville"
    data: object = field(repr=False)

    def __post_init__(self):
        if self.rep == "choi":
            J = np.asarray(self.data, dtype=complex)
            n = self.dim_in * self.dim_out
            if J.shape != (n, n):
                raise DimensionError(f"Choi matrix shape {J.shape} != ({n},{n})")
        elif self.rep == "kraus":
            for K in self.data:
                if np.asarray(K).shape != (self.dim_out, self.dim_in):
                    raise DimensionError("Kraus operator shape mismatch")
        elif self.rep == "liouville":
            S = np.asarray(self.data, dtype=complex)
            if S.shape != (self.dim_out ** 2, self.dim_in ** 2):
                raise DimensionError("Liouville matrix shape mismatch")
        else:
            raise ValueError(f"unknown representation {self.rep!r}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_kraus(kraus, dim_in=None, dim_out=None) -> "QuantumChannel":
        kraus = [np.asarray(K, dtype=complex) for K in kraus]
        dout, din = kraus[0].shape
        return QuantumChannel(dim_in=din if dim_in is None else dim_in,
                              dim_out=dout if dim_out is None else dim_out,
                              rep="kraus", data=kraus)

    @staticmethod
    def from_unitary(U) -> "QuantumChannel":
        U = np.asarray(U, dtype=complex)
        d = U.shape[0]
        if np.max(np.abs(U @ U.conj().T - np.eye(d))) > 1e-10:
            raise ValueError("matrix is not unitary")
        return QuantumChannel.from_kraus([U])

    @staticmethod
    def from_choi(J, dim_in: int, dim_out: int) -> "QuantumChannel":
        return QuantumChannel(dim_in=dim_in, dim_out=dim_out, rep="choi",
                              data=np.asarray(J, dtype=complex))

    @staticmethod
    def from_liouville(S, dim_in: int, dim_out: int) -> "QuantumChannel":
        return QuantumChannel(dim_in=dim_in, dim_out=dim_out, rep="liouville",
                              data=np.asarray(S, dtype=complex))

    @staticmethod
    def identity(d: int) -> "QuantumChannel":
        return QuantumChannel.from_kraus([np.eye(d, dtype=complex)])

    # -- representation accessors -----------------------------------------

    def choi(self) -> np.ndarray:
        if self.rep == "choi":
            return np.asarray(self.data, dtype=complex)
        if self.rep == "kraus":
            n = self.dim_in * self.dim_out
            J = np.zeros((n, n), dtype=complex)
            for K in self.data:
                v = K.T.reshape(-1)   # component (i, m) = K[m, i]
                J += np.outer(v, v.conj())
            return J
        return _liouville_to_choi(self.liouville(), self.dim_in, self.dim_out)

    def kraus(self) -> list[np.ndarray]:
        if self.rep == "kraus":
            return list(self.data)
        J = linalg.hermitianize(self.choi())
        w, V = np.linalg.eigh(J)
        ops = []
        for lam, v in zip(w, V.T):
            if lam > KRAUS_EIG_CUTOFF:
                K = np.sqrt(lam) * v.reshape(self.dim_in, self.dim_out).T
                ops.append(K)
        if not ops:
            ops = [np.zeros((self.dim_out, self.dim_in), dtype=complex)]
        return ops

    def liouville(self) -> np.ndarray:
        if self.rep == "liouville":
            return np.asarray(self.data, dtype=complex)
        if self.rep == "kraus":
            S = np.zeros((self.dim_out ** 2, self.dim_in ** 2), dtype=complex)
            for K in self.data:
                S += np.kron(K.conj(), K)
            return S
        return _choi_to_liouville(self.choi(), self.dim_in, self.dim_out)

    # -- actions -----------------------------------------------------------

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimensionError(
                f"state dim {rho.shape} incompatible with channel input {self.dim_in}")
        return unvec(self.liouville() @ vec(rho), self.dim_out)

    def convert(self, target: str) -> "QuantumChannel":
        if target == "choi":
            return QuantumChannel.from_choi(self.choi(), self.dim_in, self.dim_out)
        if target == "kraus":
            return QuantumChannel.from_kraus(self.kraus(), self.dim_in, self.dim_out)
        if target == "liouville":
            return QuantumChannel.from_liouville(self.liouville(),
                                                 self.dim_in, self.dim_out)
        raise ValueError(f"unknown representation {target!r}")


def _liouville_to_choi(S: np.ndarray, din: int, dout: int) -> np.ndarray:
    J = np.zeros((din * dout, din * dout), dtype=complex)
    for i in range(din):
        for j in range(din):
            out = unvec(S @ vec(_matrix_unit(din, i, j)), dout)
            J[i * dout:(i + 1) * dout, j * dout:(j + 1) * dout] = out
    return J


def _choi_to_liouville(J: np.ndarray, din: int, dout: int) -> np.ndarray:
    S = np.zeros((dout ** 2, din ** 2), dtype=complex)
    for i in range(din):
        for j in range(din):
            out = J[i * dout:(i + 1) * dout, j * dout:(j + 1) * dout]
            S[:, vec_index(din, i, j)] = vec(out)
    return S


def vec_index(d: int, i: int, j: int) -> int:
    """Index of matrix entry (i, j) in the column-stacked vectorization."""
    return j * d + i


def convert(ch: QuantumChannel, target: str) -> QuantumChannel:
    return ch.convert(target)


def apply(ch: QuantumChannel, rho: np.ndarray) -> np.ndarray:
    return ch.apply(rho)


def compose(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """Channel a after b (a[b[rho]])."""
    if a.dim_in != b.dim_out:
        raise DimensionError("compose: a.dim_in must equal b.dim_out")
    return QuantumChannel.from_liouville(a.liouville() @ b.liouville(),
                                         b.dim_in, a.dim_out)


def tensor_channels(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """Parallel application a (x) b, with a on the left tensor factor."""
    ka, kb = a.kraus(), b.kraus()
    kraus = [tensor(Ka, Kb) for Ka in ka for Kb in kb]
    return QuantumChannel.from_kraus(kraus, a.dim_in * b.dim_in,
                                     a.dim_out * b.dim_out)


def tp_residual(ch: QuantumChannel) -> float:
    """Max-abs deviation of Tr_out(Choi) from the identity."""
    J = ch.choi()
    tr_out = linalg.partial_trace(J, [ch.dim_in, ch.dim_out], keep=[0])
    return float(np.max(np.abs(tr_out - np.eye(ch.dim_in))))


def is_cptp(ch: QuantumChannel, tol: float = CPTP_TOL):
    """CPTP check with diagnostics (min Choi eigenvalue, TP residual)."""
    J = ch.choi()
    min_eig = float(np.linalg.eigvalsh(linalg.hermitianize(J)).min())
    herm_residual = float(np.max(np.abs(J - J.conj().T)))
    residual = tp_residual(ch)
    ok = min_eig >= -tol and residual <= tol and herm_residual <= tol
    return ok, {"min_eigenvalue": min_eig, "tp_residual": residual,
                "hermiticity_residual": herm_residual}


# -- normalized Pauli (Hermitian operator basis) Liouville ------------------

def hermitian_basis(d: int) -> list[np.ndarray]:
    """Orthonormal Hermitian basis {I/sqrt(d), B_1, ...} with Tr[Bj Bk] = d_jk.

    For qubit registers this is the normalized Pauli tensor basis.
    """
    n = d.bit_length() - 1
    if 2 ** n != d:
        raise DimensionError("normalized Pauli basis requires a power-of-2 dim")
    paulis = [linalg.ID2, linalg.SX, linalg.SY, linalg.SZ]
    basis = []
    for idx in range(4 ** n):
        ops = []
        rem = idx
        for _ in range(n):
            ops.append(paulis[rem % 4])
            rem //= 4
        B = tensor(*ops[::-1]) if n else np.eye(1, dtype=complex)
        basis.append(B / np.sqrt(d))
    # Move the identity to slot 0 (it already is, since idx 0 is I..I).
    return basis


def pauli_liouville(ch: QuantumChannel) -> np.ndarray:
    """Channel matrix in the normalized Pauli basis.

    For a trace-preserving channel the first row is (1, 0, ..., 0); the
    lower-right (d^2-1) block is the unital block and the remainder of the
    first column the non-unital vector.
    """
    if ch.dim_in != ch.dim_out:
        raise DimensionError("Pauli Liouville requires equal input/output dims")
    d = ch.dim_in
    basis = hermitian_basis(d)
    S = ch.liouville()
    R = np.zeros((d * d, d * d), dtype=complex)
    outs = [unvec(S @ vec(B), d) for B in basis]
    for a, Ba in enumerate(basis):
        for b in range(d * d):
            R[a, b] = np.trace(Ba.conj().T @ outs[b])
    return R


def unital_block(ch: QuantumChannel) -> np.ndarray:
    return pauli_liouville(ch)[1:, 1:]


# -- Choi JSON interchange format -------------------------------------------

def choi_to_json_dict(ch: QuantumChannel) -> dict:
    J = ch.choi()
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "choi_re": J.real.reshape(-1).tolist(),
        "choi_im": J.imag.reshape(-1).tolist(),
    }


def choi_from_json_dict(doc: dict) -> QuantumChannel:
    din, dout = int(doc["dim_in"]), int(doc["dim_out"])
    n = din * dout
    re = np.asarray(doc["choi_re"], dtype=float).reshape(n, n)
    im = np.asarray(doc["choi_im"], dtype=float).reshape(n, n)
    return QuantumChannel.from_choi(re + 1j * im, din, dout)


def save_choi(path, ch: QuantumChannel) -> None:
    with open(path, "w") as fh:
        json.dump(choi_to_json_dict(ch), fh)


def load_choi(path) -> QuantumChannel:
    with open(path) as fh:
        return choi_from_json_dict(json.load(fh))
