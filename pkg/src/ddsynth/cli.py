"""Command-line front end: synthesis, evaluation, resource sweeps, trajectories.

Config schema (JSON)
--------------------
::

    {
      "problem": "dephasing" | "dipolar",     # required
      "seed": 0,                              # required (reproducible runs)
      "period": 1.0,
      "optimizer": { ... OptimizerConfig fields ... },
      "evaluation": {
        "n_steps": 4096, "cycles": 1,
        "dbeta_grid": [...], "dphi_grid": [...],      # dephasing sweeps
        "qubit_counts": [2, 3, 4, 5],                 # dipolar sweep
        "states": ["css", "ghz", "mes", "dicke"]
      },
      "sweep": { "peak_limits": [...], "p_harmonics": [...] }
    }

Exit codes: 0 success, 2 malformed config or inputs, 3 numerical failure
(including an infeasible synthesis, whose best-effort artifacts are still
written).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import waveform as wf
from .cost_functions import dephasing_cost, dipolar_cost
from .evaluator import (build_dephasing_system, build_dipolar_chain,
                        benchmark_state, evolve, gate_fidelity,
                        normalized_fidelity, state_fidelity, trace_fidelity,
                        SimulatedSystem, instrument_errors)
from .modulation import modulation_from_waveform
from .optimizer import OptimizerConfig, optimize
from .reference_sequences import (make_qdd, make_udd, make_mrev16,
                                  QDD3_BUDGET, UDD12_BUDGET, MREV16_BUDGET)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

PROBLEMS = ("dephasing", "dipolar")

_OPTIMIZER_FIELDS = set(OptimizerConfig.__dataclass_fields__)


class ConfigError(ValueError):
    pass


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be an object")
    problem = cfg.get("problem")
    if problem not in PROBLEMS:
        raise ConfigError(f"problem must be one of {PROBLEMS}, got {problem!r}")
    if not isinstance(cfg.get("seed"), int):
        raise ConfigError("config must carry an integer seed")
    extra = set(cfg.get("optimizer", {})) - _OPTIMIZER_FIELDS
    if extra:
        raise ConfigError(f"unknown optimizer fields: {sorted(extra)}")
    return cfg


def _optimizer_config(cfg: dict, seed_override=None) -> OptimizerConfig:
    kwargs = dict(cfg.get("optimizer", {}))
    kwargs.setdefault("period", cfg.get("period", 1.0))
    kwargs["seed"] = cfg["seed"] if seed_override is None else seed_override
    try:
        return OptimizerConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad optimizer config: {exc}") from exc


def _objective(problem: str, n_steps: int, n_max: int):
    if problem == "dephasing":
        def fn(w):
            m = modulation_from_waveform(w, n_steps=n_steps, n_max=n_max)
            return dephasing_cost(m, w)
    else:
        def fn(w):
            m = modulation_from_waveform(w, n_steps=n_steps, n_max=n_max)
            return dipolar_cost(m)
    return fn


def _write_csv(path: str, fieldnames, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def cmd_synth(args) -> int:
    cfg = _load_config(args.config)
    ocfg = _optimizer_config(cfg, args.seed)
    objective = _objective(cfg["problem"], ocfg.n_steps, ocfg.n_max)
    w, trace = optimize(objective, ocfg)

    os.makedirs(args.out, exist_ok=True)
    wf.save(w, os.path.join(args.out, "waveform.json"))
    trace.to_csv(os.path.join(args.out, "trace.csv"))
    report = objective(w)
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        json.dump({
            "problem": cfg["problem"],
            "phi0": report.phi0,
            "phi1": report.phi1,
            "penalty": report.penalty,
            "figure_of_merit": report.figure_of_merit,
            "energy": wf.energy(w),
            "peak_amplitude": wf.peak_amplitude(w),
            "feasible": trace.feasible,
            "message": trace.message,
        }, fh, indent=2)
        fh.write("\n")
    if not trace.feasible:
        print(f"synthesis infeasible: {trace.message}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"synthesized waveform written to {args.out} "
          f"(figure of merit {report.figure_of_merit:.6f})")
    return EXIT_OK


def _eval_dephasing(cfg: dict, w, out_dir: str) -> None:
    ev_cfg = cfg.get("evaluation", {})
    n_steps = ev_cfg.get("n_steps", 4096)
    cycles = ev_cfg.get("cycles", 1)
    period = cfg.get("period", 1.0)
    dbeta = ev_cfg.get("dbeta_grid", list(np.linspace(-0.05, 0.05, 5)))
    dphi = ev_cfg.get("dphi_grid", list(np.linspace(-0.05, 0.05, 5)))
    sequences = {
        "generated": w,
        "udd12": make_udd(12, period, UDD12_BUDGET),
        "qdd3": make_qdd(3, period, QDD3_BUDGET),
        "zero": wf.FourierWaveform(period, {}),
    }
    base = build_dephasing_system(period)
    rows = []
    for kind, grid in (("dbeta", dbeta), ("dphi", dphi)):
        for value in grid:
            eps = (instrument_errors(dbeta=value) if kind == "dbeta"
                   else instrument_errors(dphi=value))
            sys_ = SimulatedSystem(1, base.n_bath, base.h0, base.frame, eps)
            for label, seq in sequences.items():
                u = evolve(sys_, seq, cycles=cycles, n_steps=n_steps)
                rows.append({
                    "error_kind": kind, "error_value": value,
                    "sequence": label,
                    "gate_fidelity": gate_fidelity(sys_, u),
                })
    _write_csv(os.path.join(out_dir, "error_sweep.csv"),
               ["error_kind", "error_value", "sequence", "gate_fidelity"],
               rows)


def _eval_dipolar(cfg: dict, w, out_dir: str) -> None:
    ev_cfg = cfg.get("evaluation", {})
    n_steps = ev_cfg.get("n_steps", 4096)
    cycles = ev_cfg.get("cycles", 1)
    period = cfg.get("period", 1.0)
    counts = ev_cfg.get("qubit_counts", [2, 3, 4, 5])
    states = ev_cfg.get("states", ["css", "ghz", "mes", "dicke"])
    sequences = {"generated": w, "mrev16": make_mrev16(period, MREV16_BUDGET)}
    rows = []
    for n in counts:
        sys_ = build_dipolar_chain(n, period)
        norm = sys_.h0_norm() * period
        for label, seq in sequences.items():
            u = evolve(sys_, seq, cycles=cycles, n_steps=n_steps)
            row = {"n_qubits": n, "sequence": label,
                   "trace_fidelity": trace_fidelity(u)}
            for st in states:
                f = state_fidelity(benchmark_state(st, n), u)
                row[st] = f
                row[st + "_normalized"] = normalized_fidelity(f, norm)
            rows.append(row)
    fields = ["n_qubits", "sequence", "trace_fidelity"]
    for st in states:
        fields += [st, st + "_normalized"]
    _write_csv(os.path.join(out_dir, "qubit_sweep.csv"), fields, rows)


def cmd_eval(args) -> int:
    cfg = _load_config(args.config)
    try:
        w = wf.load(args.waveform)
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot load waveform: {exc}") from exc
    if abs(w.period - cfg.get("period", 1.0)) > 1e-12:
        raise ConfigError("waveform period does not match the config period")
    os.makedirs(args.out, exist_ok=True)
    if cfg["problem"] == "dephasing":
        _eval_dephasing(cfg, w, args.out)
    else:
        _eval_dipolar(cfg, w, args.out)
    print(f"evaluation CSVs written to {args.out}")
    return EXIT_OK


def _sweep_cell(task: dict) -> dict:
    """One (peak_limit, p_harmonics) synthesis; exceptions become a record."""
    row = {"peak_limit": task["peak"], "p_harmonics": task["p"],
           "figure_of_merit": "", "phi0": "", "phi1": "", "penalty": "",
           "feasible": "", "status": "ok"}
    try:
        ocfg = OptimizerConfig(**{**task["optimizer"],
                                  "peak_limit": task["peak"],
                                  "p_harmonics": task["p"],
                                  "seed": task["seed"]})
        objective = _objective(task["problem"], ocfg.n_steps, ocfg.n_max)
        w, trace = optimize(objective, ocfg)
        report = objective(w)
        row.update(figure_of_merit=report.figure_of_merit, phi0=report.phi0,
                   phi1=report.phi1, penalty=report.penalty,
                   feasible=trace.feasible)
    except Exception as exc:  # record and let the sweep continue
        row["status"] = f"failed: {exc}"
    return row


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    sweep = cfg.get("sweep")
    if not sweep or not sweep.get("peak_limits") or not sweep.get("p_harmonics"):
        raise ConfigError("sweep config needs non-empty peak_limits and p_harmonics")
    tasks = [{"problem": cfg["problem"], "peak": peak, "p": p,
              "seed": cfg["seed"] if args.seed is None else args.seed,
              "optimizer": dict(cfg.get("optimizer", {}))}
             for peak in sweep["peak_limits"] for p in sweep["p_harmonics"]]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]
    rows.sort(key=lambda r: (r["peak_limit"], r["p_harmonics"]))
    os.makedirs(args.out, exist_ok=True)
    _write_csv(os.path.join(args.out, "sweep.csv"),
               ["peak_limit", "p_harmonics", "figure_of_merit", "phi0",
                "phi1", "penalty", "feasible", "status"], rows)
    failures = [r for r in rows if r["status"] != "ok"]
    print(f"sweep finished: {len(rows) - len(failures)}/{len(rows)} cells ok")
    return EXIT_OK


def cmd_traj(args) -> int:
    try:
        w = wf.load(args.waveform)
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot load waveform: {exc}") from exc
    m = modulation_from_waveform(w, n_steps=args.n_steps,
                                 n_max=min(64, args.n_steps // 2 - 1))
    labels = [f"c_{b}{a}" for a in "xyz" for b in "xyz"]
    rows = []
    for k, t in enumerate(m.times):
        row = {"t": t}
        for a in range(3):
            for b in range(3):
                row[f"c_{'xyz'[b]}{'xyz'[a]}"] = m.samples[k, b, a]
        rows.append(row)
    os.makedirs(args.out, exist_ok=True)
    _write_csv(os.path.join(args.out, "trajectory.csv"), ["t"] + labels, rows)
    print(f"trajectory CSV written to {args.out}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddsynth",
        description="Synthesize and evaluate dynamical-decoupling waveforms.",
        epilog=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True, waveform=False):
        if config:
            p.add_argument("--config", required=True, help="JSON config file")
        if waveform:
            p.add_argument("--waveform", required=True,
                           help="waveform JSON (as written by synth)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--threads", type=int, default=1,
                       help="worker processes for sweep cells")

    p = sub.add_parser("synth", help="synthesize a waveform; writes "
                       "waveform.json, trace.csv, report.json")
    common(p)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("eval", help="simulate a waveform against reference "
                       "sequences; writes error_sweep.csv / qubit_sweep.csv")
    common(p, waveform=True)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("sweep", help="resource-tradeoff grid over peak "
                       "amplitude and harmonic count; writes sweep.csv")
    common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("traj", help="export the modulation-matrix "
                       "trajectory of a waveform; writes trajectory.csv")
    common(p, config=False, waveform=True)
    p.add_argument("--n-steps", type=int, default=4096,
                   help="time-grid resolution (power of two)")
    p.set_defaults(fn=cmd_traj)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
