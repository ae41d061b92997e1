"""The multipartite collision model: collision gates, Trotter composition,
the single-step channel, and n-step simulation with exact-dynamics
diagnostics.

Subsystems are qubits; each jump operator k owns one ancilla qubit,
initialized in |0>. The full register order is
(subsystem 1, ..., subsystem M, ancilla 1, ..., ancilla J) with the left
tensor factor most significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, lindblad
from .channels import QuantumChannel
from .linalg import SMINUS, SPLUS, DimensionError, matrix_exp, tensor, trace_norm


@dataclass(frozen=True)
class CollisionSpec:
    """Parameters of one collision-model instance.

    Each jump k carries a dimensionless amplitude ``lam`` with rate
    Gamma_k = |lam|^2 and one local factor per subsystem (a d x d matrix, or
    None when the jump does not touch that subsystem). The coupling is fixed
    to g_I = dt**-0.5, so a full-dt collision gate has angle g_I*dt = sqrt(dt).
    """

    n_subsystems: int
    dt: float
    jumps: list = field(default_factory=list)   # list of (lam, [factor or None]*M)
    hamiltonian: np.ndarray | None = None
    trotter_order: int = 2                      # 2: palindromic sandwich, 1: plain
    subsystem_dim: int = 2
    n_collisions: int = 10

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.trotter_order not in (1, 2):
            raise ValueError("trotter_order must be 1 or 2")
        for lam, factors in self.jumps:
            if len(factors) != self.n_subsystems:
                raise DimensionError("one local factor per subsystem required")

    @property
    def coupling(self) -> float:
        return self.dt ** -0.5

    @property
    def n_jumps(self) -> int:
        return len(self.jumps)

    @property
    def system_dim(self) -> int:
        return self.subsystem_dim ** self.n_subsystems

    @property
    def total_dim(self) -> int:
        return self.system_dim * 2 ** self.n_jumps

    def generator(self) -> lindblad.LindbladGenerator:
        """The GKLS generator this collision model targets."""
        d = self.system_dim
        H = self.hamiltonian
        H = np.zeros((d, d), dtype=complex) if H is None else np.asarray(H)
        jumps = []
        for lam, factors in self.jumps:
            L = np.zeros((d, d), dtype=complex)
            for m, F in enumerate(factors):
                if F is not None:
                    L += _embed_subsystem(self, np.asarray(F, dtype=complex), m)
            jumps.append((abs(lam) ** 2, L))
        return lindblad.LindbladGenerator(dim=d, hamiltonian=H, jumps=jumps)


def superradiance_spec(gamma: float = 1.0, dt: float = 0.1, mode: str = "collective",
                       n_collisions: int = 10) -> CollisionSpec:
    """Collision spec for the two-emitter collective or local decay model."""
    lam = np.sqrt(gamma)
    if mode == "collective":
        jumps = [(lam, [SMINUS, SMINUS])]
        order = 2
    elif mode == "local":
        jumps = [(lam, [SMINUS, None]), (lam, [None, SMINUS])]
        order = 1
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CollisionSpec(n_subsystems=2, dt=dt, jumps=jumps,
                         trotter_order=order, n_collisions=n_collisions)


def _embed_subsystem(spec: CollisionSpec, op: np.ndarray, m: int) -> np.ndarray:
    """Embed a single-subsystem operator in the system space."""
    ops = [np.eye(spec.subsystem_dim, dtype=complex)] * spec.n_subsystems
    ops[m] = op
    return tensor(*ops)


def _embed_pair(spec: CollisionSpec, pair_op: np.ndarray, m: int, k: int) -> np.ndarray:
    """Embed an operator on (subsystem m, ancilla k) in the full register.

    ``pair_op`` acts on subsystem (x) ancilla with the subsystem on the left.
    """
    d = spec.subsystem_dim
    M, J = spec.n_subsystems, spec.n_jumps
    t = pair_op.reshape(d, 2, d, 2)
    full = np.zeros((spec.total_dim, spec.total_dim), dtype=complex)
    # Build by summing embedded matrix units of the pair operator.
    for si in range(d):
        for ai in range(2):
            for sj in range(d):
                for aj in range(2):
                    c = t[si, ai, sj, aj]
                    if c == 0:
                        continue
                    ops = []
                    for mm in range(M):
                        if mm == m:
                            E = np.zeros((d, d), dtype=complex)
                            E[si, sj] = 1.0
                        else:
                            E = np.eye(d, dtype=complex)
                        ops.append(E)
                    for kk in range(J):
                        if kk == k:
                            E = np.zeros((2, 2), dtype=complex)
                            E[ai, aj] = 1.0
                        else:
                            E = np.eye(2, dtype=complex)
                        ops.append(E)
                    full += c * tensor(*ops)
    return full


def pair_hamiltonian(spec: CollisionSpec, k: int, m: int) -> np.ndarray:
    """lam_k F_m^(k) sigma_k^+ + h.c. on the (subsystem, ancilla) pair space."""
    lam, factors = spec.jumps[k]
    F = factors[m]
    if F is None:
        return np.zeros((spec.subsystem_dim * 2,) * 2, dtype=complex)
    h = lam * tensor(np.asarray(F, dtype=complex), SPLUS)
    return h + h.conj().T


def collision_gate(spec: CollisionSpec, k: int, m: int, duration: float) -> np.ndarray:
    """Unitary exp[-i g_I duration (lam_k F_m sigma_k^+ + h.c.)] on the full register."""
    if not (0 <= k < spec.n_jumps and 0 <= m < spec.n_subsystems):
        raise IndexError("invalid jump or subsystem index")
    h_pair = pair_hamiltonian(spec, k, m)
    h = _embed_pair(spec, h_pair, m, k)
    return matrix_exp(-1j * spec.coupling * duration * h)


def step_unitary(spec: CollisionSpec) -> np.ndarray:
    """U_sim(dt) on system (x) ancillas.

    Second order composes, per jump, the palindromic half-duration sweep over
    subsystems M..1 then 1..M, with the two adjacent subsystem-1 half gates
    merged into one full-dt gate. First order applies one full-dt gate per
    active subsystem.
    """
    d = spec.total_dim
    U = np.eye(d, dtype=complex)
    for k in range(spec.n_jumps):
        active = [m for m in range(spec.n_subsystems)
                  if spec.jumps[k][1][m] is not None]
        Uk = np.eye(d, dtype=complex)
        if spec.trotter_order == 1 or len(active) == 1:
            for m in active:
                Uk = collision_gate(spec, k, m, spec.dt) @ Uk
        else:
            first, rest = active[0], active[1:]
            for m in reversed(rest):             # descending sweep, halves
                Uk = collision_gate(spec, k, m, spec.dt / 2) @ Uk
            Uk = collision_gate(spec, k, first, spec.dt) @ Uk   # merged pair
            for m in rest:                       # ascending sweep, halves
                Uk = collision_gate(spec, k, m, spec.dt / 2) @ Uk
        U = Uk @ U
    if spec.hamiltonian is not None and np.any(spec.hamiltonian):
        HS = _system_embed(spec, np.asarray(spec.hamiltonian, dtype=complex))
        U = matrix_exp(-1j * HS * spec.dt) @ U
    return U


def _system_embed(spec: CollisionSpec, op: np.ndarray) -> np.ndarray:
    return tensor(op, np.eye(2 ** spec.n_jumps, dtype=complex))


def step_map(spec: CollisionSpec) -> QuantumChannel:
    """The single-timestep channel phi_dt = Tr_E[U (rho (x) |0..0><0..0|) U^dag]."""
    U = step_unitary(spec)
    ds = spec.system_dim
    de = 2 ** spec.n_jumps
    # Kraus operators K_j = (I (x) <j|) U (I (x) |0>).
    blocks = U.reshape(ds, de, ds, de)
    kraus = [np.ascontiguousarray(blocks[:, j, :, 0]) for j in range(de)]
    return QuantumChannel.from_kraus(kraus, ds, ds)


def simulate(spec: CollisionSpec, rho0: np.ndarray, n: int) -> list[np.ndarray]:
    """Apply the step channel n times; returns states at 0, dt, ..., n dt."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rho = np.asarray(rho0, dtype=complex)
    if rho.shape != (spec.system_dim, spec.system_dim):
        raise DimensionError("initial state dimension mismatch")
    phi = step_map(spec)
    out = [rho]
    for _ in range(n):
        rho = phi.apply(rho)
        # Guard against round-off drift over many steps.
        if np.linalg.eigvalsh(linalg.hermitianize(rho)).min() < -1e-10:
            rho = linalg.project_to_density(rho)
        out.append(rho)
    return out


def ideal_error(spec: CollisionSpec, rho0: np.ndarray, n: int) -> float:
    """||exp(L n dt)[rho0] - (phi_dt)^n[rho0]||_1 against the exact semigroup."""
    if n < 1:
        raise ValueError("n must be >= 1")
    exact = lindblad.evolve(spec.generator(), rho0, n * spec.dt)
    simulated = simulate(spec, rho0, n)[-1]
    return trace_norm(exact - simulated)
