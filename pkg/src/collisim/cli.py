"""Batch experiment driver.

Subcommands: exact | mcm | noisy | metrics | bounds | tomo. Each reads a JSON
config (validated against a schema), runs deterministically from (config,
seed), and writes CSV time/step series and JSON reports into the output
directory. CSVs carry a header line with the toolkit version and the config
hash.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__, bounds, circuits, collision, lindblad, linalg
from . import metrics as metrics_mod
from . import noise as noise_mod
from . import tomo
from .channels import QuantumChannel, choi_to_json_dict, is_cptp, load_choi

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "model": {
            "type": "object",
            "properties": {
                "gamma": {"type": "number", "minimum": 0},
                "mode": {"enum": ["collective", "local"]},
            },
            "additionalProperties": False,
        },
        "mcm": {
            "type": "object",
            "properties": {
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "n": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
        "initial": {"enum": ["gg", "ee", "sup", "sub"]},
        "topology": {"type": "string"},
        "placement": {
            "type": "object",
            "properties": {
                "system": {"type": "array", "items": {"type": "integer"}},
                "trains": {"type": "array",
                           "items": {"type": "array",
                                     "items": {"type": "integer"}}},
            },
            "required": ["system", "trains"],
            "additionalProperties": False,
        },
        "noise": {"type": "object"},
        "tomography": {
            "type": "object",
            "properties": {
                "shots": {"type": "integer", "minimum": 1},
                "repetitions": {"type": "integer", "minimum": 1},
                "resamples": {"type": "integer", "minimum": 2},
            },
            "additionalProperties": False,
        },
        "bounds": {
            "type": "object",
            "properties": {
                "R": {"type": "number", "minimum": 0},
                "pol1": {"type": ["number", "null"]},
                "pol2": {"type": ["number", "null"]},
                "gate_diamond_distances": {"type": "array",
                                           "items": {"type": "number"}},
                "prep_diamond_distances": {"type": "array",
                                           "items": {"type": "number"}},
            },
            "additionalProperties": False,
        },
        "metrics": {
            "type": "object",
            "properties": {
                "chois": {"type": "array", "items": {"type": "string"}},
            },
            "additionalProperties": False,
        },
        "seed": {"type": "integer"},
    },
    "additionalProperties": False,
}

DEFAULTS = {
    "model": {"gamma": 1.0, "mode": "collective"},
    "mcm": {"dt": 0.1, "n": 5},
    "initial": "sub",
    "tomography": {"shots": 8192, "repetitions": 37, "resamples": 100},
    "seed": 0,
}


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config {path}: at {loc}: {exc.message}") from exc
    merged = {}
    for key, val in DEFAULTS.items():
        got = doc.get(key)
        if isinstance(val, dict):
            merged[key] = {**val, **(got or {})}
        else:
            merged[key] = val if got is None else got
    for key in ("topology", "placement", "noise", "bounds", "metrics"):
        if key in doc:
            merged[key] = doc[key]
    return merged


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _csv_header(config: dict) -> str:
    return (f"# collisim {__version__} config_sha256={config_hash(config)} "
            f"seed={config['seed']}")


def write_csv(path, config: dict, columns: list, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_csv_header(config) + "\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([f"{x:.12g}" if isinstance(x, float) else x
                             for x in row])


def _setup(config: dict):
    model = lindblad.SuperradianceModel(gamma=config["model"]["gamma"],
                                        mode=config["model"]["mode"])
    spec = collision.superradiance_spec(
        gamma=config["model"]["gamma"], dt=config["mcm"]["dt"],
        mode=config["model"]["mode"], n_collisions=config["mcm"]["n"])
    if "topology" in config:
        topo = circuits.Topology.load(config["topology"])
    else:
        topo = circuits.Topology.default()
    if "placement" in config:
        pl = circuits.Placement.make(config["placement"]["system"],
                                     config["placement"]["trains"])
    else:
        pl = circuits.default_placement(config["model"]["mode"])
    return model, spec, topo, pl


def _noise_model(config: dict) -> noise_mod.NoiseModel:
    return noise_mod.NoiseModel.from_json_dict(config.get("noise", {}))


POP_LABELS = noise_mod.BASIS_LABELS_2Q


# -- subcommands ---------------------------------------------------------------

def cmd_exact(config: dict, out: Path) -> Path:
    """Analytic populations and emission power versus time."""
    model, _, _, _ = _setup(config)
    labels = (["gg", "ee", "sup", "sub"] if model.mode == "collective"
              else ["gg", "sub"])
    dt, n = config["mcm"]["dt"], config["mcm"]["n"]
    rows = []
    for label in labels:
        rho0 = linalg.STATE_LABELS[label]
        for step in range(n + 1):
            t = step * dt
            rho = lindblad.analytic_oracle(model, label, t)
            pops = np.real(np.diag(rho))
            pem = lindblad.emission_power(model, rho0, t)
            rows.append([label, t, pem, *pops])
    path = out / "exact.csv"
    write_csv(path, config, ["initial", "t", "P_em", "p_gg", "p_ge",
                             "p_eg", "p_ee"], rows)
    return path


def cmd_mcm(config: dict, out: Path) -> Path:
    """Ideal collision-model populations and the per-step error vs the exact
    semigroup."""
    _, spec, _, _ = _setup(config)
    label = config["initial"]
    rho0 = linalg.STATE_LABELS[label]
    n = config["mcm"]["n"]
    traj = collision.simulate(spec, rho0, n)
    gen = spec.generator()
    rows = []
    for step, rho in enumerate(traj):
        exact = lindblad.evolve(gen, rho0, step * spec.dt)
        eps = linalg.trace_norm(exact - rho)
        rows.append([step, step * spec.dt, *np.real(np.diag(rho)), eps])
    path = out / "mcm.csv"
    write_csv(path, config, ["step", "t", "p_gg", "p_ge", "p_eg", "p_ee",
                             "eps_ideal"], rows)
    return path


def cmd_noisy(config: dict, out: Path) -> Path:
    """Noisy populations plus distances to the ideal trajectory and to both
    noise-model predictions, with cumulative CNOT counts."""
    _, spec, topo, pl = _setup(config)
    model = _noise_model(config)
    if model.kind == "none":
        raise ConfigError("cmd_noisy requires a noise model in the config")
    label, n = config["initial"], config["mcm"]["n"]
    circuit = circuits.compile_mcm(spec, topo, pl, label, n)
    ideal = circuits.simulate_circuit(circuit)
    noisy = circuits.simulate_circuit(circuit, noise=model)
    if model.kind == "ibm_style":
        ibm_pred = noisy
        inj_model = noise_mod.injection_from_model(model, circuit)
    else:
        ibm_pred = None
        inj_model = model
    inj_pred = (noisy if model.kind == "choi_injection"
                else circuits.simulate_circuit(circuit, noise=inj_model))
    cum_cnots = 0
    rows = []
    for step, rho in enumerate(noisy):
        s, e = circuit.step_ranges[step]
        cum_cnots += sum(1 for op in circuit.ops[s:e] if op.kind == "cnot")
        row = [step, cum_cnots, *np.real(np.diag(rho)),
               1 - linalg.fidelity(ideal[step], rho),
               linalg.trace_distance(ideal[step], rho)]
        row.append(linalg.trace_distance(ibm_pred[step], rho)
                   if ibm_pred is not None else "")
        row.append(linalg.trace_distance(inj_pred[step], rho))
        rows.append(row)
    path = out / "noisy.csv"
    write_csv(path, config, ["step", "cnots", "p_gg", "p_ge", "p_eg", "p_ee",
                             "infidelity_to_ideal", "tracedist_to_ideal",
                             "tracedist_to_ibm", "tracedist_to_injection"],
              rows)
    return path


def _metrics_row(name: str, ch: QuantumChannel, ideal: np.ndarray) -> dict:
    ok, diag = is_cptp(ch)
    row = {"gate": name, "cptp": bool(ok)}
    if not ok:
        row["cptp_diagnostics"] = diag
    rep = metrics_mod.metrics_report(ideal, ch)
    row.update(rep.as_dict())
    row["omega_over_r"] = (rep.incoherence / rep.infidelity
                           if rep.infidelity > 0 else float("nan"))
    return row


def cmd_metrics(config: dict, out: Path) -> Path:
    """Per-gate metrics table: r, omega, u, diamond distance and its two
    upper bounds, for Choi files or the configured noise model's CNOT."""
    rows = []
    ideal = circuits.CNOT_2Q
    for path in config.get("metrics", {}).get("chois", []):
        rows.append(_metrics_row(path, load_choi(path), ideal))
    model = _noise_model(config)
    if model.kind == "ibm_style":
        op = circuits.cnot(0, 1)
        rows.append(_metrics_row("ibm_style_cnot",
                                 model.noisy_gate_channel(op), ideal))
    if not rows:
        rows.append(_metrics_row("ideal_cnot",
                                 QuantumChannel.from_unitary(ideal), ideal))
    path = out / "metrics.json"
    with open(path, "w") as fh:
        json.dump({"version": __version__, "config_sha256": config_hash(config),
                   "gates": rows}, fh, indent=2)
    return path


def cmd_bounds(config: dict, out: Path) -> Path:
    """Single-step, noisy-map and global bounds with vacuity flags."""
    _, spec, _, _ = _setup(config)
    bcfg = config.get("bounds", {})
    if "R" not in bcfg:
        raise ConfigError("bounds.R is required (no default exists)")
    params = bounds.BoundParams(
        M=spec.n_subsystems, J=spec.n_jumps, Lambda=bounds.lambda_of(spec),
        R=bcfg["R"], dt=spec.dt, n=config["mcm"]["n"],
        gate_diamond_distances=tuple(bcfg.get("gate_diamond_distances", ())),
        prep_diamond_distances=tuple(bcfg.get("prep_diamond_distances", ())),
        pol1=bcfg.get("pol1"), pol2=bcfg.get("pol2"))
    report = bounds.bound_report(params)
    eps_s = report["single_step"]
    eps_m = report["noisy_map"]
    per_step = []
    for n in range(config["mcm"]["n"] + 1):
        val, vac = bounds.global_bound(n, eps_s, eps_m)
        per_step.append({"n": n, "global": val, "vacuous": vac})
    report["per_step"] = per_step
    report["dt_sweep"] = [
        {"dt": dt, "single_step": bounds.single_step_bound(params, dt=dt)}
        for dt in [spec.dt / 2 ** k for k in range(4)]]
    report["version"] = __version__
    report["config_sha256"] = config_hash(config)
    path = out / "bounds.json"
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
    return path


def cmd_tomo(config: dict, out: Path) -> Path:
    """Standalone tomography round trip on the configured noisy CNOT."""
    model = _noise_model(config)
    op = circuits.cnot(0, 1)
    if model.kind == "none":
        target = QuantumChannel.from_unitary(circuits.CNOT_2Q)
    else:
        target = model.noisy_gate_channel(op)
    tcfg = config["tomography"]
    seed = config["seed"]
    estimates = []
    for rep in range(tcfg["repetitions"]):
        est = tomo.process_tomography(target, shots=tcfg["shots"],
                                      seed=seed + rep)
        estimates.append(metrics_mod.average_gate_fidelity(circuits.CNOT_2Q, est))
    est_channel = tomo.process_tomography(target, shots=tcfg["shots"], seed=seed)

    def agf_stat(tables_by_key):
        # Refit the process from resampled counts of every (prep, setting).
        freqs = {}
        for key, table in tables_by_key.items():
            prep, setting = key.split(":")
            freqs.setdefault(prep, {})[setting] = table.frequencies(2)
        preps = tomo.prep_states_2q()
        V_in = np.column_stack([linalg.vec(r) for r in preps.values()])
        outs = []
        for prep in preps:
            ev = tomo.expectations_from_frequencies(freqs[prep])
            outs.append(linalg.vec(tomo.state_from_expectations(ev)))
        S = np.column_stack(outs) @ np.linalg.inv(V_in)
        est = QuantumChannel.from_liouville(S, 4, 4)
        J = tomo.project_cptp(est.choi(), 4, 4)
        return metrics_mod.average_gate_fidelity(
            circuits.CNOT_2Q, QuantumChannel.from_choi(J, 4, 4))

    tables = {}
    for pidx, (prep, rho_in) in enumerate(tomo.prep_states_2q().items()):
        rho_out = target.apply(rho_in)
        for sidx, setting in enumerate(tomo.SETTINGS_2Q):
            tables[f"{prep}:{setting}"] = tomo.sample_counts(
                rho_out, tomo.setting_rotation(setting), tcfg["shots"],
                seed=(seed * 1000 + pidx) * 100 + sidx)
    boot = tomo.bootstrap(tables, agf_stat, resamples=tcfg["resamples"],
                          seed=seed)
    truth = metrics_mod.average_gate_fidelity(circuits.CNOT_2Q, target)
    report = {
        "version": __version__,
        "config_sha256": config_hash(config),
        "agf_true": truth,
        "agf_estimates": estimates,
        "agf_mean": float(np.mean(estimates)),
        "agf_std": float(np.std(estimates, ddof=1)) if len(estimates) > 1 else 0.0,
        "bootstrap": {"estimate": boot.estimate, "mean": boot.mean,
                      "std": boot.std, "resamples": boot.resamples},
    }
    with open(out / "tomo_choi.json", "w") as fh:
        json.dump(choi_to_json_dict(est_channel), fh)
    path = out / "tomo.json"
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
    return path


COMMANDS = {
    "exact": cmd_exact,
    "mcm": cmd_mcm,
    "noisy": cmd_noisy,
    "metrics": cmd_metrics,
    "bounds": cmd_bounds,
    "tomo": cmd_tomo,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="collisim",
        description="Collision-model simulation experiment driver")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--out", default=".", help="output directory")
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if args.seed is not None:
        config["seed"] = args.seed
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        path = COMMANDS[args.command](config, out)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
