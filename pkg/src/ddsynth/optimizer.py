"""Hybrid genetic-algorithm / steepest-descent waveform synthesis.

The search space is the stacked sine-series coefficient vector (x harmonics
then y harmonics, pi/T units).  The frame-continuity constraint is handled
by penalty continuation: minimize phi0 + phi1 + lambda * penalty, and if the
best feasible penalty is still above tolerance, restart with lambda * 10
(warm-started from the previous best).  The peak-amplitude constraint is
kept satisfied throughout by radial rescaling of candidate vectors.

Everything is driven by one seeded generator, so a config reproduces its
trace bit for bit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import waveform as wf

PENALTY_TOL = 1e-8


@dataclass(frozen=True)
class OptimizerConfig:
    p_harmonics: int = 9
    peak_limit: float = 10.0          # T/2pi units
    period: float = 1.0
    population: int = 24
    generations: int = 60
    sd_iterations: int = 80
    fd_step: float = 1e-5
    seed: int = 0
    penalty_lambda0: float = 1e3
    restarts: int = 8
    init_scale: float = 3.0           # stddev of initial coefficients, pi/T
    mutation_sigma: float = 0.5
    mutation_decay: float = 0.95
    n_steps: int = 1024               # modulation grid during search
    n_max: int = 32                   # harmonic cutoff during search

    def __post_init__(self):
        if self.population < 4 or self.population % 2:
            raise ValueError("population must be an even integer >= 4")
        if self.p_harmonics < 1:
            raise ValueError("p_harmonics must be >= 1")
        if self.fd_step <= 0:
            raise ValueError("fd_step must be positive")


@dataclass
class OptimizationTrace:
    """Per-evaluation bookkeeping of the synthesis run."""

    records: list = field(default_factory=list)  # dict rows
    final_vector: np.ndarray | None = None
    feasible: bool = False
    message: str = ""

    def log(self, phase: str, iteration: int, cost: float, phi0: float,
            phi1: float, penalty: float, peak: float, energy: float):
        best = self.best_cost()
        self.records.append({
            "phase": phase, "iteration": iteration, "cost": cost,
            "best_cost": min(cost, best) if math.isfinite(best) else cost,
            "phi0": phi0, "phi1": phi1, "penalty": penalty,
            "peak": peak, "energy": energy,
        })

    def best_cost(self) -> float:
        if not self.records:
            return math.inf
        return self.records[-1]["best_cost"]

    def best_history(self) -> np.ndarray:
        return np.array([r["best_cost"] for r in self.records])

    def to_csv(self, path) -> None:
        fields = ["phase", "iteration", "cost", "best_cost", "phi0", "phi1",
                  "penalty", "peak", "energy"]
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(self.records)


def gradient_fd(objective, x: np.ndarray, fd_step: float) -> np.ndarray:
    """Central finite-difference gradient, one coordinate at a time."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        xp = x.copy(); xp[i] += fd_step
        xm = x.copy(); xm[i] -= fd_step
        fp, fm = objective(xp), objective(xm)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise FloatingPointError("objective returned a non-finite value")
        grad[i] = (fp - fm) / (2.0 * fd_step)
    return grad


def _project_peak(vec: np.ndarray, cfg: OptimizerConfig) -> np.ndarray:
    """Rescale the coefficient vector so the waveform peak obeys the limit."""
    w = wf.FourierWaveform.from_vector(vec, cfg.period)
    peak = wf.peak_amplitude(w)
    if peak > cfg.peak_limit:
        vec = vec * (cfg.peak_limit / peak)
    return vec


def optimize(objective, cfg: OptimizerConfig):
    """Minimize a CostReport-valued objective over sine coefficients.

    ``objective(waveform)`` must return a CostReport; the scalarized search
    target is phi0 + phi1 + lambda * penalty with the continuation schedule
    described in the module docstring.  Returns (FourierWaveform,
    OptimizationTrace); the waveform satisfies the peak limit exactly, and
    ``trace.feasible`` reports whether the continuity tolerance was met.
    """
    rng = np.random.default_rng(cfg.seed)
    trace = OptimizationTrace()
    dim = 2 * cfg.p_harmonics

    def evaluate(vec):
        report = objective(wf.FourierWaveform.from_vector(vec, cfg.period))
        return report

    def scalar(report, lam):
        return report.phi0 + report.phi1 + lam * report.penalty

    best_vec = None
    best_report = None
    best_val = math.inf

    lam = cfg.penalty_lambda0
    warm = None
    for restart in range(cfg.restarts):
        pop = rng.normal(0.0, cfg.init_scale, size=(cfg.population, dim))
        if warm is not None:
            pop[0] = warm
        pop = np.array([_project_peak(v, cfg) for v in pop])
        reports = [evaluate(v) for v in pop]
        fit = np.array([scalar(r, lam) for r in reports])

        sigma = cfg.mutation_sigma
        for gen in range(cfg.generations):
            elite = int(np.argmin(fit))
            children = [pop[elite].copy()]
            while len(children) < cfg.population:
                # tournament selection, uniform crossover, gaussian mutation
                idx = rng.integers(0, cfg.population, size=(2, 3))
                pa = pop[idx[0][np.argmin(fit[idx[0]])]]
                pb = pop[idx[1][np.argmin(fit[idx[1]])]]
                mask = rng.random(dim) < 0.5
                child = np.where(mask, pa, pb)
                child = child + rng.normal(0.0, sigma, size=dim)
                children.append(_project_peak(child, cfg))
            pop = np.array(children)
            reports = [evaluate(v) for v in pop]
            fit = np.array([scalar(r, lam) for r in reports])
            sigma *= cfg.mutation_decay
            k = int(np.argmin(fit))
            r = reports[k]
            w = wf.FourierWaveform.from_vector(pop[k], cfg.period)
            trace.log("ga", restart * cfg.generations + gen, fit[k],
                      r.phi0, r.phi1, r.penalty,
                      wf.peak_amplitude(w), wf.energy(w))

        # steepest-descent polish with backtracking line search
        x = pop[int(np.argmin(fit))].copy()
        rep = evaluate(x)
        val = scalar(rep, lam)
        for it in range(cfg.sd_iterations):
            grad = gradient_fd(lambda v: scalar(evaluate(v), lam),
                               x, cfg.fd_step)
            gnorm = float(np.linalg.norm(grad))
            if gnorm < 1e-14:
                break
            step = 1.0 / gnorm
            improved = False
            for _ in range(30):
                cand = _project_peak(x - step * grad, cfg)
                crep = evaluate(cand)
                cval = scalar(crep, lam)
                if cval < val - 1e-15:
                    x, rep, val = cand, crep, cval
                    improved = True
                    break
                step *= 0.5
            w = wf.FourierWaveform.from_vector(x, cfg.period)
            trace.log("sd", restart * cfg.sd_iterations + it, val,
                      rep.phi0, rep.phi1, rep.penalty,
                      wf.peak_amplitude(w), wf.energy(w))
            if not improved:
                break

        if val < best_val:
            best_vec, best_report, best_val = x, rep, val
        if rep.penalty < PENALTY_TOL:
            break
        # tighten the continuity constraint and warm-start from the best
        lam *= 10.0
        warm = best_vec.copy()

    trace.final_vector = best_vec
    trace.feasible = bool(best_report.penalty < PENALTY_TOL)
    if not trace.feasible:
        trace.message = ("continuity tolerance not reached; best penalty "
                         f"{best_report.penalty:.3e}")
    return wf.FourierWaveform.from_vector(best_vec, cfg.period), trace
