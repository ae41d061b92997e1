"""GKLS generators, exact semigroup evolution, and collective-decay oracles.

The two-qubit conventions: qubit 1 is the left tensor factor, the excited
state |e> is the computational |1>, so the bitstring "00" reads |gg>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import (ID2, RHO_EE, RHO_GG, RHO_SUB, RHO_SUP, SMINUS, SZ,
                     DimensionError, matrix_exp, tensor, unvec, vec)


@dataclass(frozen=True)
class LindbladGenerator:
    """Effective Hamiltonian plus weighted jump operators (hbar = 1)."""

    dim: int
    hamiltonian: np.ndarray
    jumps: list = field(default_factory=list)   # list of (rate, operator)

    def __post_init__(self):
        H = np.asarray(self.hamiltonian, dtype=complex)
        if H.shape != (self.dim, self.dim):
            raise DimensionError("Hamiltonian dimension mismatch")
        if not linalg.is_hermitian(H):
            raise ValueError("Hamiltonian must be Hermitian")
        for rate, L in self.jumps:
            if rate < 0:
                raise ValueError("jump rates must be nonnegative")
            if np.asarray(L).shape != (self.dim, self.dim):
                raise DimensionError("jump operator dimension mismatch")
        if len(self.jumps) > self.dim ** 2 - 1:
            import warnings
            warnings.warn("more jump operators than d^2 - 1", stacklevel=2)


def liouville_superop(gen: LindbladGenerator) -> np.ndarray:
    """Matrix of the GKLS generator under column-stacking vectorization."""
    d = gen.dim
    H = np.asarray(gen.hamiltonian, dtype=complex)
    I = np.eye(d, dtype=complex)
    L = -1j * (np.kron(I, H) - np.kron(H.T, I))
    for rate, Lk in gen.jumps:
        Lk = np.asarray(Lk, dtype=complex)
        LdL = Lk.conj().T @ Lk
        L += rate * (np.kron(Lk.conj(), Lk)
                     - 0.5 * (np.kron(I, LdL) + np.kron(LdL.T, I)))
    return L


def evolve(gen: LindbladGenerator, rho0: np.ndarray, t: float) -> np.ndarray:
    """exp(L t)[rho0]; rejects negative times (semigroup domain)."""
    if t < 0:
        raise ValueError("evolve requires t >= 0")
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (gen.dim, gen.dim):
        raise DimensionError("state dimension mismatch")
    prop = matrix_exp(liouville_superop(gen) * t)
    return unvec(prop @ vec(rho0), gen.dim)


# -- two-qubit collective / local decay --------------------------------------

# System energy H = (sigma_1^z + sigma_2^z)/2 with sigma^z|e> = +|e>;
# in the computational basis that is -(Z x I + I x Z)/2.
ENERGY_2Q = -0.5 * (tensor(SZ, ID2) + tensor(ID2, SZ))

SIGMA1_MINUS = tensor(SMINUS, ID2)
SIGMA2_MINUS = tensor(ID2, SMINUS)


@dataclass(frozen=True)
class SuperradianceModel:
    """Two emitters in a common (collective) or separate (local) bath."""

    gamma: float = 1.0
    mode: str = "collective"      # "collective" | "local"

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.mode not in ("collective", "local"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def generator(self) -> LindbladGenerator:
        H = np.zeros((4, 4), dtype=complex)
        if self.mode == "collective":
            jumps = [(self.gamma, SIGMA1_MINUS + SIGMA2_MINUS)]
        else:
            jumps = [(self.gamma, SIGMA1_MINUS), (self.gamma, SIGMA2_MINUS)]
        return LindbladGenerator(dim=4, hamiltonian=H, jumps=jumps)


def analytic_oracle(model: SuperradianceModel, initial: str, t: float) -> np.ndarray:
    """Closed-form evolved state, evaluated without matrix exponentials."""
    g = model.gamma
    if model.mode == "collective":
        if initial == "sub":
            return RHO_SUB.copy()
        if initial == "gg":
            return RHO_GG.copy()
        if initial == "sup":
            f = np.exp(-2 * g * t)
            return f * RHO_SUP + (1 - f) * RHO_GG
        if initial == "ee":
            f = np.exp(-2 * g * t)
            return f * RHO_EE + 2 * g * t * f * RHO_SUP \
                + (1 - f * (1 + 2 * g * t)) * RHO_GG
    else:
        if initial == "sub":
            f = np.exp(-g * t)
            return f * RHO_SUB + (1 - f) * RHO_GG
        if initial == "gg":
            return RHO_GG.copy()
    raise ValueError(f"unsupported (mode, initial) pair ({model.mode}, {initial})")


def emission_power(model: SuperradianceModel, rho0: np.ndarray, t: float) -> float:
    """P_em(t) = -Tr[H L[rho(t)]] for the two-qubit energy H."""
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (4, 4):
        raise DimensionError("emission_power expects a two-qubit state")
    gen = model.generator()
    rho_t = evolve(gen, rho0, t)
    drho = unvec(liouville_superop(gen) @ vec(rho_t), 4)
    return float(np.real(-np.trace(ENERGY_2Q @ drho)))
