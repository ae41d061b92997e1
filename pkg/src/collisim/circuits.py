"""Compile collision-model steps to CNOTs and single-qubit rotations on a
fixed hardware topology, with swap-train routing for ancilla refresh and a
dense density-matrix circuit simulator.

Swap accounting: a swap whose incoming qubit is a never-touched ancilla in
|0> is implemented with 2 CNOTs (S_01 |0> (x) |psi> = C_01 C_10 |0> (x) |psi>);
every other swap takes the usual 3 CNOTs. Freshness is static: a qubit is
fresh until its first gate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import collision as _collision
from . import linalg
from .channels import QuantumChannel
from .linalg import DimensionError, tensor

RECONSTRUCTION_TOL = 1e-10
DENSE_QUBIT_BUDGET = 8


class UnsupportedGateError(ValueError):
    """Raised when a unitary falls outside the decomposable gate family."""


class BudgetError(RuntimeError):
    """Raised when a circuit needs more live wires than the dense budget."""


# -- topology ----------------------------------------------------------------

@dataclass(frozen=True)
class Topology:
    """Undirected coupling graph; edges are the allowed CNOT pairs."""

    qubits: int
    edges: frozenset    # of frozenset({a, b})

    def __post_init__(self):
        for e in self.edges:
            a, b = sorted(e)
            if a == b:
                raise ValueError("self-loop in topology")
            if not (0 <= a < self.qubits and 0 <= b < self.qubits):
                raise ValueError("edge references an invalid qubit")

    @staticmethod
    def from_edges(qubits: int, edges) -> "Topology":
        return Topology(qubits=qubits,
                        edges=frozenset(frozenset(e) for e in edges))

    @staticmethod
    def from_json_dict(doc: dict) -> "Topology":
        return Topology.from_edges(int(doc["qubits"]), doc["edges"])

    @staticmethod
    def load(path) -> "Topology":
        with open(path) as fh:
            return Topology.from_json_dict(json.load(fh))

    @staticmethod
    def default() -> "Topology":
        """The bundled 16-qubit heavy-hexagon-style layout."""
        text = resources.files("collisim.data").joinpath(
            "guadalupe16.json").read_text()
        return Topology.from_json_dict(json.loads(text))

    def has_edge(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.edges

    def to_json_dict(self) -> dict:
        return {"qubits": self.qubits,
                "edges": sorted(sorted(e) for e in self.edges)}


# -- gate ops ----------------------------------------------------------------

_RX_HALF = None     # filled lazily


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    """The standard three-Euler-angle single-qubit rotation."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
                    dtype=complex)


def rx_angles(alpha: float) -> tuple:
    return (alpha, -np.pi / 2, np.pi / 2)      # u3 of these equals Rx exactly


def rz_angles(alpha: float) -> tuple:
    return (0.0, 0.0, alpha)                   # u3 equals Rz up to global phase


def ry_angles(alpha: float) -> tuple:
    return (alpha, 0.0, 0.0)


CNOT_2Q = np.array([[1, 0, 0, 0],
                    [0, 1, 0, 0],
                    [0, 0, 0, 1],
                    [0, 0, 1, 0]], dtype=complex)

SWAP_2Q = np.array([[1, 0, 0, 0],
                    [0, 0, 1, 0],
                    [0, 1, 0, 0],
                    [0, 0, 0, 1]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """One elementary operation on physical qubits.

    kinds: "cnot" (qubits = (control, target)), "rot1q" (qubits = (q,),
    params = three Euler angles), "swap" (qubits = (a, b)).
    """

    kind: str
    qubits: tuple
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in ("cnot", "rot1q", "swap"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate operands must be distinct")
        n = {"cnot": 2, "rot1q": 1, "swap": 2}[self.kind]
        if len(self.qubits) != n:
            raise ValueError(f"{self.kind} takes {n} operand(s)")
        if self.kind == "rot1q" and len(self.params) != 3:
            raise ValueError("rot1q takes three Euler angles")

    def unitary(self) -> np.ndarray:
        """Matrix on the listed qubits, first operand as left tensor factor."""
        if self.kind == "cnot":
            return CNOT_2Q
        if self.kind == "swap":
            return SWAP_2Q
        return u3(*self.params)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "qubits": list(self.qubits),
                "params": [float(p) for p in self.params]}

    @staticmethod
    def from_json_dict(doc: dict) -> "GateOp":
        return GateOp(doc["kind"], tuple(doc["qubits"]),
                      tuple(doc.get("params", ())))


def cnot(control: int, target: int) -> GateOp:
    return GateOp("cnot", (control, target))


def rot1q(qubit: int, angles) -> GateOp:
    return GateOp("rot1q", (qubit,), tuple(angles))


# -- placement ---------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    """Physical layout: the system qubit pair and one ancilla train per jump.

    Each train is ordered outward from the system; its first element is the
    ancilla that actually collides and must neighbour every system qubit the
    jump touches.
    """

    system: tuple
    trains: tuple       # tuple of tuples of qubit indices

    def __post_init__(self):
        used = list(self.system)
        for tr in self.trains:
            used.extend(tr)
        if len(set(used)) != len(used):
            raise ValueError("placement reuses a physical qubit")

    @staticmethod
    def make(system, trains) -> "Placement":
        trains = tuple(tuple(t) for t in trains)
        return Placement(system=tuple(system), trains=trains)

    @property
    def train(self) -> tuple:
        if len(self.trains) != 1:
            raise ValueError("placement has multiple trains")
        return self.trains[0]


def default_placement(mode: str = "collective") -> Placement:
    """The bundled placements on the default 16-qubit topology."""
    if mode == "collective":
        return Placement.make((0, 2), [(1, 4, 7, 10, 12)])
    if mode == "local":
        return Placement.make((0, 2), [(1, 4, 7, 10, 12), (3, 5, 8, 11, 14)])
    raise ValueError(f"unknown mode {mode!r}")


def validate_placement(topology: Topology, placement: Placement,
                       spec: _collision.CollisionSpec | None = None) -> None:
    """Check adjacency requirements of a placement on a topology.

    With a spec, the head of train k must neighbour exactly the system qubits
    jump k acts on; without one, it must neighbour both system qubits.
    """
    all_qubits = list(placement.system)
    for tr in placement.trains:
        all_qubits.extend(tr)
    for q in all_qubits:
        if not 0 <= q < topology.qubits:
            raise ValueError(f"qubit {q} outside topology")
    for k, tr in enumerate(placement.trains):
        if spec is None:
            touched = list(placement.system)
        else:
            touched = [placement.system[m]
                       for m in range(spec.n_subsystems)
                       if spec.jumps[k][1][m] is not None]
        for s in touched:
            if not topology.has_edge(tr[0], s):
                raise ValueError(
                    f"train head {tr[0]} not adjacent to system qubit {s}")
        for a, b in zip(tr, tr[1:]):
            if not topology.has_edge(a, b):
                raise ValueError(f"train link {a}-{b} off the topology")
    if spec is not None and len(placement.trains) != spec.n_jumps:
        raise ValueError("one ancilla train per jump required")


# -- gate decomposition --------------------------------------------------------

def xy_exchange(theta: float) -> np.ndarray:
    """exp[-i theta (sigma^- sigma^+ + sigma^+ sigma^-)] on two qubits."""
    h = tensor(linalg.SMINUS, linalg.SPLUS)
    h = h + h.conj().T
    return linalg.matrix_exp(-1j * theta * h)


def decompose_collision_gate(U: np.ndarray, system_qubit: int,
                             ancilla_qubit: int) -> list[GateOp]:
    """2-CNOT decomposition of an XY-exchange unitary.

    Uses the identity exp[-i th (XX+YY)/2] = V C (Rx(th) (x) Rz(th)) C V^dag
    with C the CNOT and V = Rx(pi/2) (x) Rx(pi/2). Raises UnsupportedGateError
    if U is not of this family (up to global phase).
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (4, 4):
        raise DimensionError("decompose_collision_gate expects a 4x4 unitary")
    phase = U[0, 0]
    if abs(abs(phase) - 1) > RECONSTRUCTION_TOL:
        raise UnsupportedGateError("gate outside the XY-exchange family")
    V = U / phase
    theta = float(np.arctan2(-np.imag(V[1, 2]), np.real(V[1, 1])))
    if np.max(np.abs(V - xy_exchange(theta))) > RECONSTRUCTION_TOL:
        raise UnsupportedGateError("gate outside the XY-exchange family")
    if theta == 0.0:
        return []
    s, a = system_qubit, ancilla_qubit
    return [
        rot1q(s, rx_angles(-np.pi / 2)),
        rot1q(a, rx_angles(-np.pi / 2)),
        cnot(s, a),
        rot1q(s, rx_angles(theta)),
        rot1q(a, rz_angles(theta)),
        cnot(s, a),
        rot1q(s, rx_angles(np.pi / 2)),
        rot1q(a, rx_angles(np.pi / 2)),
    ]


def reconstruct(ops: list[GateOp], qubits: list[int]) -> np.ndarray:
    """Dense unitary of a gate list on the given wire ordering."""
    n = len(qubits)
    pos = {q: i for i, q in enumerate(qubits)}
    U = np.eye(2 ** n, dtype=complex)
    for op in ops:
        U = _embed_unitary(op.unitary(), [pos[q] for q in op.qubits], n) @ U
    return U


def _embed_unitary(G: np.ndarray, wires: list[int], n: int) -> np.ndarray:
    k = len(wires)
    Gt = G.reshape((2,) * (2 * k))
    full = np.eye(2 ** n, dtype=complex).reshape((2,) * (2 * n))
    out = np.tensordot(Gt, full, axes=(list(range(k, 2 * k)), wires))
    out = np.moveaxis(out, list(range(k)), wires)
    return out.reshape(2 ** n, 2 ** n)


# -- swaps and routing ---------------------------------------------------------

def swap_ops(a: int, b: int, fresh_b: bool) -> list[GateOp]:
    """Swap as CNOTs; 2-CNOT variant when b is a fresh |0> ancilla."""
    if fresh_b:
        return [cnot(a, b), cnot(b, a)]
    return [cnot(a, b), cnot(b, a), cnot(a, b)]


def route_step(topology: Topology, placement: Placement, n: int,
               train_index: int = 0) -> list[GateOp]:
    """Swap segment refreshing the colliding ancilla before collision n.

    Brings the |0> of the (n-1)th train qubit down to the head, pushing used
    states one slot outward. Under static freshness only the incoming far
    qubit is fresh, so exactly the first swap of the segment is 2-CNOT.
    """
    if n < 1:
        raise ValueError("collision index must be >= 1")
    train = placement.trains[train_index]
    if n > len(train):
        raise ValueError(f"ancilla train exhausted after {len(train)} collisions")
    if n == 1:
        return []
    for a, b in zip(train, train[1:]):
        if not topology.has_edge(a, b):
            raise ValueError(f"train link {a}-{b} off the topology")
    ops = []
    for j in range(n - 2, -1, -1):          # swap (train[j], train[j+1])
        ops.extend(swap_ops(train[j], train[j + 1], fresh_b=(j == n - 2)))
    return ops


def cnot_count_train(n: int) -> int:
    """Non-optimized CNOT cost of the ancilla train at the nth collision."""
    if n < 1:
        raise ValueError("collision index must be >= 1")
    return (n - 1) * (3 * n - 1)


# -- compiled circuits ---------------------------------------------------------

@dataclass(frozen=True)
class CompiledCircuit:
    """Ordered gate list with its placement and per-step gate ranges.

    ``step_ranges[i]`` is the half-open op range of step i; step 0 is state
    preparation and step i >= 1 is the routing segment plus collision i.
    """

    ops: tuple
    placement: Placement
    topology: Topology
    step_ranges: tuple
    n_swaps: int = 0
    n_fresh_swaps: int = 0

    def cnot_count(self) -> int:
        return sum(1 for op in self.ops if op.kind == "cnot")

    def cnots_saved(self) -> int:
        """CNOTs removed relative to implementing every swap with 3 CNOTs."""
        return self.n_fresh_swaps

    def wires(self) -> list[int]:
        live = set(self.placement.system)
        for op in self.ops:
            live.update(op.qubits)
        return sorted(live)

    def validate_edges(self) -> None:
        for op in self.ops:
            if op.kind in ("cnot", "swap"):
                a, b = op.qubits
                if not self.topology.has_edge(a, b):
                    raise ValueError(f"two-qubit gate {a}-{b} off the topology")

    def to_json_dict(self) -> dict:
        return {
            "ops": [op.to_json_dict() for op in self.ops],
            "system": list(self.placement.system),
            "trains": [list(t) for t in self.placement.trains],
            "step_ranges": [list(r) for r in self.step_ranges],
            "n_swaps": self.n_swaps,
            "n_fresh_swaps": self.n_fresh_swaps,
        }


def _prep_ops(initial: str, placement: Placement, topology: Topology):
    """State-preparation gate list; returns (ops, n_swaps, n_fresh_swaps).

    The entangled pair is prepared on (system qubit 1, head ancilla) and the
    ancilla's half is swapped into the second system qubit, which is still a
    fresh |0>; the two system qubits never interact directly.
    """
    s0, s1 = placement.system
    if initial == "gg":
        return [], 0, 0
    if initial == "ee":
        return [rot1q(s0, rx_angles(np.pi)), rot1q(s1, rx_angles(np.pi))], 0, 0
    if initial in ("sup", "sub"):
        head = placement.trains[0][0]
        if not (topology.has_edge(s0, head) and topology.has_edge(head, s1)):
            raise ValueError("head ancilla must neighbour both system qubits")
        sign = 1.0 if initial == "sup" else -1.0
        ops = [rot1q(s0, ry_angles(sign * np.pi / 2)),
               cnot(s0, head),
               rot1q(head, rx_angles(np.pi))]
        ops.extend(swap_ops(head, s1, fresh_b=True))
        return ops, 1, 1
    raise ValueError(f"unknown initial state {initial!r}")


def compile_mcm(spec: _collision.CollisionSpec, topology: Topology,
                placement: Placement, initial: str,
                n_collisions: int | None = None) -> CompiledCircuit:
    """Full circuit: state preparation, then per collision a routing segment
    followed by the decomposed Trotter sandwich of collision gates."""
    validate_placement(topology, placement, spec)
    if spec.subsystem_dim != 2:
        raise ValueError("compilation supports qubit subsystems only")
    n = spec.n_collisions if n_collisions is None else n_collisions
    for tr in placement.trains:
        if n > len(tr):
            raise ValueError(f"ancilla train exhausted after {len(tr)} collisions")

    ops, ranges = [], []
    prep, n_swaps, n_fresh = _prep_ops(initial, placement, topology)
    ops.extend(prep)
    ranges.append((0, len(ops)))

    for step in range(1, n + 1):
        start = len(ops)
        for k in range(spec.n_jumps):
            seg = route_step(topology, placement, step, train_index=k)
            ops.extend(seg)
            if step >= 2:
                n_swaps += step - 1
                n_fresh += 1
        for k, m, duration in _trotter_schedule(spec):
            U = _pair_unitary(spec, k, m, duration)
            ops.extend(decompose_collision_gate(
                U, placement.system[m], placement.trains[k][0]))
        ranges.append((start, len(ops)))

    circuit = CompiledCircuit(ops=tuple(ops), placement=placement,
                              topology=topology, step_ranges=tuple(ranges),
                              n_swaps=n_swaps, n_fresh_swaps=n_fresh)
    circuit.validate_edges()
    return circuit


def _trotter_schedule(spec: _collision.CollisionSpec):
    """(jump, subsystem, duration) triples in application order for one step."""
    out = []
    for k in range(spec.n_jumps):
        active = [m for m in range(spec.n_subsystems)
                  if spec.jumps[k][1][m] is not None]
        if spec.trotter_order == 1 or len(active) == 1:
            out.extend((k, m, spec.dt) for m in active)
        else:
            first, rest = active[0], active[1:]
            out.extend((k, m, spec.dt / 2) for m in reversed(rest))
            out.append((k, first, spec.dt))
            out.extend((k, m, spec.dt / 2) for m in rest)
    return out


def _pair_unitary(spec: _collision.CollisionSpec, k: int, m: int,
                  duration: float) -> np.ndarray:
    h = _collision.pair_hamiltonian(spec, k, m)
    return linalg.matrix_exp(-1j * spec.coupling * duration * h)


# -- dense simulation ----------------------------------------------------------

def simulate_circuit(circuit: CompiledCircuit, noise=None):
    """Dense density-matrix execution over the circuit's live wires.

    All wires start in |0>. ``noise``, if given, must provide
    ``gate_channels(op) -> list[(qubit_tuple, QuantumChannel)]`` returning the
    channel sequence that realizes the (possibly noisy) gate. Returns the list
    of reduced system states at step boundaries (entry 0 after preparation).
    """
    wires = circuit.wires()
    nq = len(wires)
    if nq > DENSE_QUBIT_BUDGET:
        raise BudgetError(f"{nq} live wires exceed the dense budget "
                          f"of {DENSE_QUBIT_BUDGET}")
    pos = {q: i for i, q in enumerate(wires)}
    rho = np.zeros((2 ** nq, 2 ** nq), dtype=complex)
    rho[0, 0] = 1.0
    rho = rho.reshape((2,) * (2 * nq))

    snapshots = []
    sys_axes = [pos[q] for q in circuit.placement.system]
    for start, end in circuit.step_ranges:
        for op in circuit.ops[start:end]:
            if noise is None:
                seq = [(op.qubits, QuantumChannel.from_unitary(op.unitary()))]
            else:
                seq = noise.gate_channels(op)
            for qubits, ch in seq:
                axes = [pos[q] for q in qubits]
                rho = _apply_kraus(rho, ch.kraus(), axes, nq)
        snapshots.append(_reduced_state(rho, sys_axes, nq))
    return snapshots


def _apply_kraus(rho_t, kraus, axes, nq):
    k = len(axes)
    out = np.zeros_like(rho_t)
    col_axes = [a + nq for a in axes]
    for K in kraus:
        Kt = K.reshape((2,) * (2 * k))
        term = np.tensordot(Kt, rho_t, axes=(list(range(k, 2 * k)), axes))
        term = np.moveaxis(term, list(range(k)), axes)
        term = np.tensordot(Kt.conj(), term, axes=(list(range(k, 2 * k)),
                                                   col_axes))
        term = np.moveaxis(term, list(range(k)), col_axes)
        out += term
    return out


def _reduced_state(rho_t, sys_axes, nq):
    other = [a for a in range(nq) if a not in sys_axes]
    t = rho_t
    for a in sorted(other, reverse=True):
        t = np.trace(t, axis1=a, axis2=a + t.ndim // 2)
    # Remaining axes run in ascending original position; reorder so the
    # first system qubit is the left tensor factor.
    k = len(sys_axes)
    srt = sorted(sys_axes)
    perm = [srt.index(a) for a in sys_axes]
    if perm != list(range(k)):
        t = np.transpose(t, perm + [p + k for p in perm])
    d = 2 ** k
    return t.reshape(d, d)


def save_circuit(path, circuit: CompiledCircuit) -> None:
    with open(path, "w") as fh:
        json.dump(circuit.to_json_dict(), fh)
