# PROCESS TOMOGRAPHY WITH BOOTSTRAP ERROR BARS
#
# Reconstructs a depolarized CNOT from simulated measurement counts:
# sixteen product-state preparations, nine Pauli measurement settings,
# linear inversion, then projection onto the set of completely positive
# trace-preserving maps.  Bootstrap resampling of the raw count tables
# gives the statistical uncertainty on the average gate fidelity.

import numpy as np

from collisim import linalg, metrics, tomo
from collisim.channels import QuantumChannel, compose
from collisim.circuits import CNOT_2Q
from collisim.noise import depolarizing

p = 0.04
noisy = compose(depolarizing(4, p), QuantumChannel.from_unitary(CNOT_2Q))
agf_true = metrics.average_gate_fidelity(CNOT_2Q, noisy)
print(f"true AGF of CNOT + depolarizing(p={p}): {agf_true:.6f}")

# Infinite-shot reconstruction is exact up to numerical round-off.
est = tomo.process_tomography(noisy, shots=None)
print("exact reconstruction Choi error:",
      np.max(np.abs(est.choi() - noisy.choi())))

# Finite shots: reconstruct at increasing shot budgets.
print(f"\n{'shots':>7} {'AGF estimate':>13} {'|error|':>9}")
for shots in (1024, 8192, 65536):
    est = tomo.process_tomography(noisy, shots=shots, seed=7)
    agf = metrics.average_gate_fidelity(CNOT_2Q, est)
    print(f"{shots:7d} {agf:13.6f} {abs(agf - agf_true):9.2e}")

# Bootstrap error bar from the state-tomography counts of one preparation.
rho_out = noisy.apply(linalg.RHO_SUP)
tables = {s: tomo.sample_counts(rho_out, tomo.setting_rotation(s), 8192,
                                seed=10 + i)
          for i, s in enumerate(tomo.SETTINGS_2Q)}


def purity(tb):
    freqs = {s: t.frequencies(2) for s, t in tb.items()}
    ev = tomo.expectations_from_frequencies(freqs)
    rho = tomo.project_psd_unit_trace(tomo.state_from_expectations(ev))
    return float(np.real(np.trace(rho @ rho)))


boot = tomo.bootstrap(tables, purity, resamples=200, seed=0)
truth = float(np.real(np.trace(rho_out @ rho_out)))
print(f"\noutput-state purity: estimate {boot.estimate:.4f} "
      f"+/- {boot.std:.4f} (truth {truth:.4f})")
