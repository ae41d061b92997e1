"""Simulated measurement sampling, readout-error modeling and mitigation,
state and process tomography with projected-least-squares fitting, and
bootstrap statistics.

Fitting is linear inversion followed by projection onto the physical set
(PSD/unit-trace for states, CPTP for processes) rather than maximum
likelihood; the projection is deterministic and convergence-checked.
Preparation and measurement rotations are ideal by default.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channels import QuantumChannel
from .linalg import DimensionError

CPTP_PROJECTION_TOL = 1e-8
CPTP_PROJECTION_MAX_ITERS = 1000
DEFAULT_RESAMPLES = 100

PAULI_1Q = {"I": linalg.ID2, "X": linalg.SX, "Y": linalg.SY, "Z": linalg.SZ}
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
# W such that P = W Z W^dag; measuring P = rotating by W^dag, then Z.
MEAS_ROT = {"Z": np.eye(2, dtype=complex), "X": _H, "Y": _S @ _H}

SETTINGS_2Q = tuple(a + b for a in "XYZ" for b in "XYZ")
PREP_LABELS = ("0", "1", "+", "i")
PREP_STATES = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "i": np.array([1, 1j], dtype=complex) / np.sqrt(2),
}


class ProjectionError(RuntimeError):
    """CPTP projection failed to converge; carries the achieved residual."""

    def __init__(self, residual: float):
        super().__init__(f"CPTP projection stalled at residual {residual:.3e}")
        self.residual = residual


# -- counts ------------------------------------------------------------------

@dataclass(frozen=True)
class CountsTable:
    shots: int
    counts: dict     # bitstring -> count

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to shots")

    def frequencies(self, n_bits: int) -> np.ndarray:
        out = np.zeros(2 ** n_bits)
        for bits, c in self.counts.items():
            out[int(bits, 2)] = c / self.shots
        return out

    def to_json_dict(self) -> dict:
        return {"shots": self.shots, "counts": dict(self.counts)}

    @staticmethod
    def from_json_dict(doc: dict) -> "CountsTable":
        return CountsTable(int(doc["shots"]),
                           {k: int(v) for k, v in doc["counts"].items()})


def save_counts(path, tables: dict) -> None:
    with open(path, "w") as fh:
        json.dump({k: t.to_json_dict() for k, t in tables.items()}, fh)


def load_counts(path) -> dict:
    with open(path) as fh:
        return {k: CountsTable.from_json_dict(v)
                for k, v in json.load(fh).items()}


def measurement_probabilities(state: np.ndarray, rotation=None) -> np.ndarray:
    """Born-rule computational-basis probabilities after an optional basis
    rotation W (the state is conjugated by W^dag)."""
    rho = np.asarray(state, dtype=complex)
    if rotation is not None:
        W = np.asarray(rotation, dtype=complex)
        rho = W.conj().T @ rho @ W
    p = np.real(np.diag(rho)).clip(min=0.0)
    return p / p.sum()


def sample_counts(state: np.ndarray, rotation=None, shots: int = 8192,
                  seed: int = 0) -> CountsTable:
    """Multinomial draw from the rotated state; deterministic given seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = measurement_probabilities(state, rotation)
    n_bits = int(np.log2(p.size))
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p)
    return CountsTable(shots, {format(i, f"0{n_bits}b"): int(c)
                               for i, c in enumerate(draws) if c})


def setting_rotation(setting: str) -> np.ndarray:
    return linalg.tensor(*(MEAS_ROT[c] for c in setting))


# -- readout error ------------------------------------------------------------

@dataclass(frozen=True)
class ConfusionMatrix:
    """Per-qubit column-stochastic 2x2 matrices, cm[q][j, i] = P(read j | true i)."""

    matrices: tuple

    def __post_init__(self):
        for M in self.matrices:
            M = np.asarray(M)
            if M.shape != (2, 2) or np.any(M < -1e-12) or np.any(M > 1 + 1e-12):
                raise ValueError("confusion matrices must be 2x2 with entries in [0,1]")
            if np.max(np.abs(M.sum(axis=0) - 1)) > 1e-9:
                raise ValueError("confusion-matrix columns must sum to 1")

    @staticmethod
    def symmetric(p_flip: float, n_qubits: int) -> "ConfusionMatrix":
        M = np.array([[1 - p_flip, p_flip], [p_flip, 1 - p_flip]])
        return ConfusionMatrix(tuple(M.copy() for _ in range(n_qubits)))

    def full_matrix(self) -> np.ndarray:
        out = np.eye(1)
        for M in self.matrices:
            out = np.kron(out, np.asarray(M, dtype=float))
        return out


def apply_readout_error(counts: CountsTable, cm: ConfusionMatrix,
                        seed: int = 0) -> CountsTable:
    """Stochastic forward model: each recorded shot is re-read through cm."""
    n_bits = len(cm.matrices)
    A = cm.full_matrix()
    rng = np.random.default_rng(seed)
    out = np.zeros(2 ** n_bits, dtype=int)
    for bits, c in counts.counts.items():
        out += rng.multinomial(c, A[:, int(bits, 2)])
    return CountsTable(counts.shots, {format(i, f"0{n_bits}b"): int(c)
                                      for i, c in enumerate(out) if c})


def mitigate(counts_or_freqs, cm: ConfusionMatrix) -> np.ndarray:
    """Least-squares inversion of the readout map, clipped to nonnegative
    probabilities and renormalized."""
    for M in cm.matrices:
        if abs(np.linalg.det(np.asarray(M, dtype=float))) < 1e-12:
            raise ValueError("singular confusion matrix cannot be mitigated")
    n_bits = len(cm.matrices)
    if isinstance(counts_or_freqs, CountsTable):
        f = counts_or_freqs.frequencies(n_bits)
    else:
        f = np.asarray(counts_or_freqs, dtype=float)
    A = cm.full_matrix()
    p, *_ = np.linalg.lstsq(A, f, rcond=None)
    p = p.clip(min=0.0)
    s = p.sum()
    return p / s if s > 0 else np.full_like(p, 1 / p.size)


# -- state tomography ----------------------------------------------------------

def project_psd_unit_trace(rho: np.ndarray) -> np.ndarray:
    """Closest PSD unit-trace matrix: eigenvalue clipping with uniform
    redistribution of the deficit (ties broken by eigenvalue then index)."""
    rho = linalg.hermitianize(np.asarray(rho, dtype=complex))
    w, V = np.linalg.eigh(rho)
    w = w + (1 - w.sum()) / w.size      # rescale to unit trace first
    order = sorted(range(w.size), key=lambda i: (w[i], i))      # ascending
    acc = 0.0
    vals = w.copy()
    for pos, i in enumerate(order):
        remaining = w.size - pos
        if vals[i] + acc / remaining < 0:
            acc += vals[i]
            vals[i] = 0.0
        else:
            for j in order[pos:]:
                vals[j] += acc / remaining
            break
    return (V * vals) @ V.conj().T


def expectations_from_frequencies(freqs_by_setting: dict) -> dict:
    """Two-qubit Pauli expectations from per-setting outcome frequencies.

    Single-qubit terms are averaged over every setting that measures them.
    """
    if set(freqs_by_setting) != set(SETTINGS_2Q):
        raise ValueError("all 9 two-qubit Pauli settings are required")
    signs = np.array([1, -1])
    ev = {}
    singles = {}
    for setting, f in freqs_by_setting.items():
        f = np.asarray(f, dtype=float).reshape(2, 2)
        a, b = setting
        ev[setting] = float(np.einsum("i,j,ij->", signs, signs, f))
        singles.setdefault(a + "I", []).append(float(np.einsum("i,ij->", signs, f)))
        singles.setdefault("I" + b, []).append(float(np.einsum("j,ij->", signs, f)))
    for key, vals in singles.items():
        ev[key] = float(np.mean(vals))
    ev["II"] = 1.0
    return ev


def state_from_expectations(ev: dict) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    for a, b in itertools.product("IXYZ", repeat=2):
        rho += ev[a + b] * linalg.tensor(PAULI_1Q[a], PAULI_1Q[b]) / 4
    return rho


def state_tomography(state: np.ndarray, shots: int | None = 8192,
                     seed: int = 0, readout: ConfusionMatrix | None = None,
                     mitigated: bool = True, project: bool = True) -> np.ndarray:
    """Two-qubit state estimate over the 9 Pauli settings.

    ``shots=None`` uses exact Born probabilities (infinite-shot limit). With a
    readout model, outcomes are corrupted and optionally mitigated.
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (4, 4):
        raise DimensionError("state tomography supports two qubits")
    freqs = {}
    for idx, setting in enumerate(SETTINGS_2Q):
        W = setting_rotation(setting)
        if shots is None:
            f = measurement_probabilities(state, W)
            if readout is not None:
                f = readout.full_matrix() @ f
                if mitigated:
                    f = mitigate(f, readout)
        else:
            table = sample_counts(state, W, shots, seed=seed * 100 + idx)
            if readout is not None:
                table = apply_readout_error(table, readout,
                                            seed=seed * 100 + idx + 50)
                f = (mitigate(table, readout) if mitigated
                     else table.frequencies(2))
            else:
                f = table.frequencies(2)
        freqs[setting] = f
    rho = state_from_expectations(expectations_from_frequencies(freqs))
    return project_psd_unit_trace(rho) if project else rho


# -- process tomography ---------------------------------------------------------

def prep_states_2q() -> dict:
    out = {}
    for a, b in itertools.product(PREP_LABELS, repeat=2):
        psi = linalg.tensor(PREP_STATES[a].reshape(2, 1),
                            PREP_STATES[b].reshape(2, 1)).reshape(-1)
        out[a + b] = linalg.projector(psi)
    return out


def project_cptp(J: np.ndarray, dim_in: int, dim_out: int,
                 tol: float = CPTP_PROJECTION_TOL,
                 max_iters: int = CPTP_PROJECTION_MAX_ITERS) -> np.ndarray:
    """Alternating projection of a Choi matrix onto the CPTP set."""
    J = np.asarray(J, dtype=complex)
    ident = np.eye(dim_in, dtype=complex)
    psd_resid = tp_resid = np.inf
    for _ in range(max_iters):
        # PSD projection.
        Jh = linalg.hermitianize(J)
        w, V = np.linalg.eigh(Jh)
        J_psd = (V * w.clip(min=0.0)) @ V.conj().T
        # TP affine projection: fix Tr_out to the identity.
        tr_out = linalg.partial_trace(J_psd, [dim_in, dim_out], keep=[0])
        J_next = J_psd + np.kron(ident - tr_out,
                                 np.eye(dim_out, dtype=complex) / dim_out)
        psd_resid = float(max(0.0, -np.linalg.eigvalsh(
            linalg.hermitianize(J_next)).min()))
        tp_resid = float(np.max(np.abs(
            linalg.partial_trace(J_next, [dim_in, dim_out], keep=[0]) - ident)))
        J = J_next
        if max(psd_resid, tp_resid) <= tol:
            return J
    raise ProjectionError(max(psd_resid, tp_resid))


def process_tomography(channel: QuantumChannel, shots: int | None = 8192,
                       seed: int = 0, readout: ConfusionMatrix | None = None,
                       project: bool = True) -> QuantumChannel:
    """Two-qubit process tomography: 16 product preparations, 9 settings each,
    linear inversion to a Liouville matrix, then CPTP projection of the Choi."""
    if channel.dim_in != 4 or channel.dim_out != 4:
        raise DimensionError("process tomography supports two-qubit channels")
    preps = prep_states_2q()
    V_in = np.column_stack([linalg.vec(rho) for rho in preps.values()])
    outs = []
    for idx, rho_in in enumerate(preps.values()):
        rho_out = channel.apply(rho_in)
        est = state_tomography(rho_out, shots=shots, seed=seed * 1000 + idx,
                               readout=readout, project=False)
        outs.append(linalg.vec(est))
    S = np.column_stack(outs) @ np.linalg.inv(V_in)
    est = QuantumChannel.from_liouville(S, 4, 4)
    if not project:
        return est
    J = project_cptp(est.choi(), 4, 4)
    return QuantumChannel.from_choi(J, 4, 4)


# -- bootstrap -------------------------------------------------------------------

@dataclass(frozen=True)
class BootstrapResult:
    estimate: float
    resamples: int
    std: float
    mean: float

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("std must be nonnegative")


def resample_counts(table: CountsTable, rng: np.random.Generator) -> CountsTable:
    keys = list(table.counts)
    p = np.array([table.counts[k] for k in keys], dtype=float) / table.shots
    draws = rng.multinomial(table.shots, p)
    return CountsTable(table.shots, {k: int(c) for k, c in zip(keys, draws) if c})


def bootstrap(tables: dict, statistic, resamples: int = DEFAULT_RESAMPLES,
              seed: int = 0) -> BootstrapResult:
    """Multinomial resampling of per-setting counts; refits ``statistic``
    (a function of the {setting: CountsTable} map) on each resample."""
    if resamples < 2:
        raise ValueError("resamples must be >= 2")
    point = float(statistic(tables))
    streams = np.random.SeedSequence(seed).spawn(resamples)
    values = []
    for ss in streams:
        rng = np.random.default_rng(ss)
        re = {k: resample_counts(t, rng) for k, t in tables.items()}
        values.append(float(statistic(re)))
    values = np.asarray(values)
    return BootstrapResult(estimate=point, resamples=resamples,
                           std=float(values.std(ddof=1)),
                           mean=float(values.mean()))
