"""Analytic error bounds for the collision-model simulation: the rate scale
Lambda, the single-step Trotter bound, the noisy-map bound, the global
triangle-inequality bound, and composed-gate infidelity scaling.

The auxiliary constant R appearing in the single-step bound has no published
value, so it is a mandatory parameter here; likewise the subleading
polynomial coefficients are accepted from the caller but never guessed, and
outputs without them are labeled leading-term-only.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from . import collision as _collision
from .linalg import operator_norm

VACUOUS_LEVEL = 1.0


@dataclass(frozen=True)
class BoundParams:
    """Inputs of the single-step and global bounds.

    ``R`` is dimensionless and must be supplied explicitly; ``pol1`` and
    ``pol2`` are optional user-supplied coefficients of the Dt^2 and Dt^3
    corrections (the leading term alone is used when they are None).
    """

    M: int
    J: int
    Lambda: float
    R: float
    dt: float
    n: int = 1
    gate_diamond_distances: tuple = ()
    prep_diamond_distances: tuple = ()
    pol1: float | None = None
    pol2: float | None = None

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.M < 1 or self.J < 0 or self.n < 0:
            raise ValueError("invalid counts")
        if self.Lambda < 0 or self.R < 0:
            raise ValueError("Lambda and R must be nonnegative")
        for x in (*self.gate_diamond_distances, *self.prep_diamond_distances):
            if not 0 <= x <= 1:
                raise ValueError("diamond distances must lie in [0, 1]")


def lambda_of(spec: _collision.CollisionSpec) -> float:
    """Lambda = max over (k, m) of {||H_S||, ||lam_k F_m sigma_k^+ + h.c.||}
    in the operator norm."""
    best = 0.0
    if spec.hamiltonian is not None:
        best = operator_norm(np.asarray(spec.hamiltonian, dtype=complex))
    for k in range(spec.n_jumps):
        for m in range(spec.n_subsystems):
            if spec.jumps[k][1][m] is None:
                continue
            best = max(best, operator_norm(_collision.pair_hamiltonian(spec, k, m)))
    return best


def single_step_bound(params: BoundParams, dt: float | None = None) -> float:
    """Single-collision simulation error bound.

    Returns the leading term 2e (M Lambda (1 + J R Lambda) dt)^2 plus the
    user-supplied corrections pol1*dt^2 + pol2*dt^3 when given. The same value
    bounds the error in both the 1->1 and the diamond norm.
    """
    dt = params.dt if dt is None else dt
    if dt == 0:
        return 0.0
    lead = 2 * np.e * (params.M * params.Lambda
                       * (1 + params.J * params.R * params.Lambda) * dt) ** 2
    extra = 0.0
    if params.pol1 is not None:
        extra += params.pol1 * dt ** 2
    if params.pol2 is not None:
        extra += params.pol2 * dt ** 3
    return float(lead + extra)


def noisy_map_bound(gate_distances, prep_distances=()) -> float:
    """eps_m* <= 2 (sum_j d_dia(U_j, E_j) + sum_i d_dia(I, G_i))."""
    for x in (*gate_distances, *prep_distances):
        if not 0 <= x <= 1:
            raise ValueError("diamond distances must lie in [0, 1]")
    return 2.0 * (float(np.sum(gate_distances)) + float(np.sum(prep_distances)))


def global_bound(n: int, eps_s_diamond: float, eps_m_star: float):
    """n (eps_s + eps_m*); returns (value, vacuous flag at trace-norm scale)."""
    if n < 0 or eps_s_diamond < 0 or eps_m_star < 0:
        raise ValueError("inputs must be nonnegative")
    value = n * (eps_s_diamond + eps_m_star)
    return value, value > VACUOUS_LEVEL


def composed_infidelity_bound(m: int, infidelity: float, regime: str) -> float:
    """Infidelity of m composed gates: m^2 (1-phi) if coherent errors may add
    up in amplitude, m (1-phi) for incoherent errors; capped at 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= infidelity <= 1:
        raise ValueError("infidelity must lie in [0, 1]")
    if regime == "coherent":
        value = m ** 2 * infidelity
    elif regime == "incoherent":
        value = m * infidelity
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return min(value, 1.0)


def bound_report(params: BoundParams) -> dict:
    """Aggregated JSON-ready report of every bound for one configuration."""
    eps_s = single_step_bound(params)
    eps_m = noisy_map_bound(params.gate_diamond_distances,
                            params.prep_diamond_distances)
    total, vacuous = global_bound(params.n, eps_s, eps_m)
    return {
        "params": {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in asdict(params).items()},
        "leading_term_only": params.pol1 is None and params.pol2 is None,
        "single_step": eps_s,
        "noisy_map": eps_m,
        "global": total,
        "vacuous": bool(vacuous),
    }
