"""Gate-attached noise models for circuit simulation.

Two families: an IBM-style model (two-qubit depolarizing after each CNOT with
per-qubit thermal relaxation, weaker single-qubit analogue after rotations)
and a Choi-injection model that replaces every CNOT wholesale by a measured
channel while keeping single-qubit gates ideal. Thermal relaxation after a
two-qubit gate is applied independently on both qubits using the two-qubit
gate duration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import circuits as _circuits
from . import collision as _collision
from . import linalg
from .channels import (QuantumChannel, choi_from_json_dict, choi_to_json_dict,
                       compose, is_cptp, tensor_channels)

INJECTION_CPTP_TOL = 1e-6


def depolarizing(d: int, p: float) -> QuantumChannel:
    """rho -> (1-p) rho + p I/d."""
    if not 0 <= p <= 1:
        raise ValueError("depolarizing rate must lie in [0, 1]")
    ident = np.eye(d * d, dtype=complex)
    J_ident = QuantumChannel.identity(d).choi()
    # Fully depolarizing channel has Choi I/d (input-left convention: the
    # Choi of rho -> Tr[rho] I/d is I_{d^2}/d).
    J = (1 - p) * J_ident + p * ident / d
    return QuantumChannel.from_choi(J, d, d)


def thermal_relaxation(T1: float, T2: float, duration: float) -> QuantumChannel:
    """Zero-temperature relaxation: amplitude damping with
    g = 1 - exp(-duration/T1) composed with the pure dephasing needed for the
    off-diagonal to decay as exp(-duration/T2)."""
    if T1 <= 0 or T2 <= 0:
        raise ValueError("T1 and T2 must be positive")
    if T2 > 2 * T1:
        raise ValueError("T2 <= 2 T1 required")
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    g = 1 - np.exp(-duration / T1)
    ad = QuantumChannel.from_kraus([
        np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex),
        np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex),
    ])
    # Residual dephasing factor beyond the T1-induced exp(-t/(2 T1)).
    f = np.exp(-duration / T2 + duration / (2 * T1))
    deph = QuantumChannel.from_kraus([
        np.sqrt((1 + f) / 2) * np.eye(2, dtype=complex),
        np.sqrt((1 - f) / 2) * linalg.SZ,
    ])
    return compose(deph, ad)


@dataclass(frozen=True)
class GateNoiseParams:
    """Per-gate IBM-style noise knobs."""

    depolarizing_rate: float = 0.0
    T1: float = np.inf
    T2: float = np.inf
    duration: float = 0.0

    def __post_init__(self):
        if not 0 <= self.depolarizing_rate <= 1:
            raise ValueError("rate must lie in [0, 1]")
        if np.isfinite(self.T2) and self.T2 > 2 * self.T1:
            raise ValueError("T2 <= 2 T1 required")


@dataclass(frozen=True)
class NoiseModel:
    """kind "none", "ibm_style" (gate_1q/gate_2q params) or "choi_injection"
    (map (control, target) -> channel; single-qubit gates stay ideal)."""

    kind: str = "none"
    gate_1q: GateNoiseParams = field(default_factory=GateNoiseParams)
    gate_2q: GateNoiseParams = field(default_factory=GateNoiseParams)
    injection: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("none", "ibm_style", "choi_injection"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        for pair, ch in self.injection.items():
            ok, diag = is_cptp(ch, tol=INJECTION_CPTP_TOL)
            if not ok:
                raise ValueError(f"injected channel for {pair} is not CPTP: {diag}")

    # -- channel sequences ---------------------------------------------------

    def gate_channels(self, op: _circuits.GateOp) -> list:
        """(qubits, channel) sequence realizing the gate under this model."""
        ideal = (op.qubits, QuantumChannel.from_unitary(op.unitary()))
        if self.kind == "none":
            return [ideal]
        if self.kind == "choi_injection":
            if op.kind == "rot1q":
                return [ideal]
            if op.kind != "cnot":
                raise ValueError("choi_injection covers CNOT circuits only")
            key = tuple(op.qubits)
            if key not in self.injection:
                raise KeyError(f"no injected channel for CNOT {key}")
            return [(op.qubits, self.injection[key])]
        # ibm_style
        seq = [ideal]
        if op.kind == "rot1q":
            par = self.gate_1q
            if par.depolarizing_rate:
                seq.append((op.qubits, depolarizing(2, par.depolarizing_rate)))
            relax = _relaxation_of(par)
            if relax is not None:
                seq.append((op.qubits, relax))
        else:
            par = self.gate_2q
            if par.depolarizing_rate:
                seq.append((op.qubits, depolarizing(4, par.depolarizing_rate)))
            relax = _relaxation_of(par)
            if relax is not None:
                for q in op.qubits:
                    seq.append(((q,), relax))
        return seq

    def noisy_gate_channel(self, op: _circuits.GateOp) -> QuantumChannel:
        """Single composite channel for the gate (used to build injections)."""
        seq = self.gate_channels(op)
        n = len(op.qubits)
        total = QuantumChannel.identity(2 ** n)
        order = list(op.qubits)
        for qubits, ch in seq:
            if list(qubits) == order:
                full = ch
            elif len(qubits) == 1 and n == 2:
                ident = QuantumChannel.identity(2)
                full = (tensor_channels(ch, ident) if qubits[0] == order[0]
                        else tensor_channels(ident, ch))
            else:
                raise ValueError("unsupported channel layout")
            total = compose(full, total)
        return total

    # -- JSON ------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {"kind": self.kind}
        if self.kind == "ibm_style":
            for name, par in (("gate_1q", self.gate_1q), ("gate_2q", self.gate_2q)):
                doc[name] = {"depolarizing_rate": par.depolarizing_rate,
                             "T1": par.T1, "T2": par.T2,
                             "duration": par.duration}
        if self.kind == "choi_injection":
            doc["injection"] = {f"{c}-{t}": choi_to_json_dict(ch)
                                for (c, t), ch in self.injection.items()}
        return doc

    @staticmethod
    def from_json_dict(doc: dict) -> "NoiseModel":
        kind = doc.get("kind", "none")
        if kind == "ibm_style":
            pars = {}
            for name in ("gate_1q", "gate_2q"):
                sub = doc.get(name, {})
                pars[name] = GateNoiseParams(
                    depolarizing_rate=sub.get("depolarizing_rate", 0.0),
                    T1=sub.get("T1", np.inf), T2=sub.get("T2", np.inf),
                    duration=sub.get("duration", 0.0))
            return NoiseModel(kind=kind, **pars)
        if kind == "choi_injection":
            inj = {}
            for key, sub in doc.get("injection", {}).items():
                c, t = (int(x) for x in key.split("-"))
                inj[(c, t)] = choi_from_json_dict(sub)
            return NoiseModel(kind=kind, injection=inj)
        return NoiseModel(kind="none")


def _relaxation_of(par: GateNoiseParams):
    if par.duration == 0 or (not np.isfinite(par.T1) and not np.isfinite(par.T2)):
        return None
    return thermal_relaxation(par.T1, par.T2, par.duration)


def ibm_style_default() -> NoiseModel:
    """Demo magnitudes: T1, T2 ~ 100 us, 2q gates ~ 400 ns at ~1e-2
    depolarizing, 1q gates ~ 50 ns at ~1e-4. Placeholder values, not
    calibration data."""
    return NoiseModel(
        kind="ibm_style",
        gate_1q=GateNoiseParams(1e-4, 100e-6, 100e-6, 50e-9),
        gate_2q=GateNoiseParams(1e-2, 100e-6, 100e-6, 400e-9),
    )


def injection_from_model(model: NoiseModel,
                         circuit: _circuits.CompiledCircuit) -> NoiseModel:
    """Choi-injection model whose CNOT channels are the exact noisy CNOTs of
    another model (closure construction)."""
    inj = {}
    for op in circuit.ops:
        if op.kind == "cnot" and tuple(op.qubits) not in inj:
            inj[tuple(op.qubits)] = model.noisy_gate_channel(op)
    return NoiseModel(kind="choi_injection", injection=inj)


def attach(model: NoiseModel, circuit: _circuits.CompiledCircuit) -> list:
    """Flattened (qubits, channel) sequence for the whole circuit."""
    seq = []
    for op in circuit.ops:
        seq.extend(model.gate_channels(op))
    return seq


BASIS_LABELS_2Q = ("00", "01", "10", "11")


def populations(rho: np.ndarray) -> dict:
    probs = np.real(np.diag(rho))
    return {lab: float(p) for lab, p in zip(BASIS_LABELS_2Q, probs)}


def noisy_simulate(spec: _collision.CollisionSpec, topology: _circuits.Topology,
                   placement: _circuits.Placement, model: NoiseModel | None,
                   initial: str, n: int):
    """Compile, run under the noise model, and tabulate populations.

    Returns (trajectory, table): reduced system states at step boundaries and
    the per-step computational-basis populations.
    """
    circuit = _circuits.compile_mcm(spec, topology, placement, initial, n)
    traj = _circuits.simulate_circuit(circuit, noise=model)
    table = [populations(rho) for rho in traj]
    return traj, table
