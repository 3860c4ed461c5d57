"""Control waveforms: sine Fourier series and piecewise-constant pulse trains.

Conventions
-----------
Fourier coefficients are stored in pi/T units (the unit the bundled example
waveforms are tabulated in); ``evaluate`` returns the physical amplitude
``v(t) = (pi/T) * sum_n a_n sin(2 pi n t / T)``.  ``energy`` returns
``sqrt(int_0^T sum_axis v^2 dt)`` and ``peak_amplitude`` reports
``max_t sqrt(sum_axis v^2) * T / (2 pi)``, the dimensionless peak unit used
throughout for amplitude budgets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

AXES = ("x", "y")


class WaveformError(ValueError):
    pass


@dataclass(frozen=True)
class FourierWaveform:
    """Sine series v_a(t) = (pi/T) sum_n coeffs[a][n-1] sin(2 pi n t / T)."""

    period: float
    coeffs: dict = field(default_factory=dict)  # axis -> 1d float array, pi/T units

    def __post_init__(self):
        if self.period <= 0:
            raise WaveformError("period must be positive")
        cleaned = {}
        for ax in AXES:
            c = np.asarray(self.coeffs.get(ax, ()), dtype=float)
            cleaned[ax] = np.atleast_1d(c)
        object.__setattr__(self, "coeffs", cleaned)

    @property
    def n_harmonics(self) -> int:
        return max(len(self.coeffs[ax]) for ax in AXES)

    @property
    def bandwidth(self) -> float:
        """f_BW = 2p/T with p the highest harmonic carrying a nonzero coefficient."""
        p = 0
        for ax in AXES:
            nz = np.nonzero(self.coeffs[ax])[0]
            if nz.size:
                p = max(p, int(nz[-1]) + 1)
        return 2.0 * p / self.period

    def coefficient_vector(self) -> np.ndarray:
        """Concatenated (x then y) coefficient vector, zero-padded to a common p."""
        p = self.n_harmonics
        return np.concatenate([
            np.pad(self.coeffs[ax], (0, p - len(self.coeffs[ax]))) for ax in AXES
        ])

    @classmethod
    def from_vector(cls, vec, period: float) -> "FourierWaveform":
        vec = np.asarray(vec, dtype=float)
        if vec.size % 2:
            raise WaveformError("coefficient vector must split evenly into x and y")
        p = vec.size // 2
        return cls(period, {"x": vec[:p], "y": vec[p:]})

    def scaled(self, s: float) -> "FourierWaveform":
        return FourierWaveform(self.period, {ax: s * self.coeffs[ax] for ax in AXES})


@dataclass(frozen=True)
class Pulse:
    start: float
    width: float
    phase: float      # axis angle in the xy plane, radians
    amplitude: float  # physical units (rad / time)


@dataclass(frozen=True)
class PulseTrain:
    """Non-overlapping rectangular pulses inside one period.

    ``edge_fraction`` > 0 turns on raised-cosine edges spanning that fraction
    of each pulse width at both ends, as a crude instrument-bandwidth model.
    It is off by default; all bookkeeping below is exact only for the
    rectangular case.
    """

    period: float
    pulses: tuple
    edge_fraction: float = 0.0

    def __post_init__(self):
        if self.period <= 0:
            raise WaveformError("period must be positive")
        if not 0.0 <= self.edge_fraction < 0.5:
            raise WaveformError("edge_fraction must lie in [0, 0.5)")
        pulses = tuple(
            p if isinstance(p, Pulse) else Pulse(*p) for p in self.pulses
        )
        last_end = 0.0
        for p in sorted(pulses, key=lambda p: p.start):
            if p.width <= 0:
                raise WaveformError("pulse widths must be positive (no delta pulses)")
            if p.start < last_end - 1e-12 or p.start + p.width > self.period + 1e-12:
                raise WaveformError("pulses overlap or extend outside [0, T]")
            last_end = p.start + p.width
        object.__setattr__(self, "pulses", tuple(sorted(pulses, key=lambda p: p.start)))

    def _envelope(self, p: Pulse, t: np.ndarray) -> np.ndarray:
        inside = (t >= p.start) & (t < p.start + p.width)
        env = inside.astype(float)
        if self.edge_fraction > 0.0:
            e = self.edge_fraction * p.width
            rise = inside & (t < p.start + e)
            fall = inside & (t > p.start + p.width - e)
            env[rise] = 0.5 * (1 - np.cos(np.pi * (t[rise] - p.start) / e))
            env[fall] = 0.5 * (1 - np.cos(np.pi * (p.start + p.width - t[fall]) / e))
        return env


Waveform = FourierWaveform | PulseTrain


def evaluate(w: Waveform, t, wrap: bool = False):
    """Amplitude pair (v_x, v_y) at time t (scalar or array).

    Times must lie in [0, T] unless wrap=True, which evaluates the periodic
    extension.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if wrap:
        t = np.mod(t, w.period)
    elif np.any(t < -1e-12) or np.any(t > w.period + 1e-12):
        raise WaveformError("time outside the cycle [0, T]")

    if isinstance(w, FourierWaveform):
        scale = np.pi / w.period
        out = []
        for ax in AXES:
            c = w.coeffs[ax]
            n = np.arange(1, len(c) + 1)
            out.append(scale * (np.sin(2 * np.pi * np.outer(t, n) / w.period) @ c))
        vx, vy = out
    else:
        vx = np.zeros_like(t)
        vy = np.zeros_like(t)
        for p in w.pulses:
            env = w._envelope(p, t) * p.amplitude
            vx += env * math.cos(p.phase)
            vy += env * math.sin(p.phase)
    if scalar:
        return float(vx[0]), float(vy[0])
    return vx, vy


def _quadrature_energy(w: Waveform, n: int = 4096) -> float:
    t = np.linspace(0.0, w.period, n + 1)
    vx, vy = evaluate(w, t)
    return float(np.sqrt(np.trapezoid(vx**2 + vy**2, t)))


def energy(w: Waveform) -> float:
    """sqrt(int_0^T (v_x^2 + v_y^2) dt).

    Fourier form uses Parseval; rectangular trains are summed exactly;
    smoothed trains fall back to quadrature.
    """
    if isinstance(w, FourierWaveform):
        total = sum(float(np.sum(w.coeffs[ax] ** 2)) for ax in AXES)
        return np.pi / w.period * math.sqrt(w.period / 2.0 * total)
    if w.edge_fraction > 0.0:
        return _quadrature_energy(w, 1 << 15)
    return math.sqrt(sum(p.amplitude**2 * p.width for p in w.pulses))


def peak_amplitude(w: Waveform, grid: int = 4096) -> float:
    """max_t sqrt(v_x^2 + v_y^2) * T/(2 pi).

    Dense-grid search with golden-section refinement around the best sample;
    the waveforms here are band-limited (<= a few tens of harmonics), so the
    grid already brackets the maximum.
    """
    if isinstance(w, PulseTrain) and w.edge_fraction == 0.0:
        amp = max((p.amplitude for p in w.pulses), default=0.0)
        return amp * w.period / (2 * np.pi)

    t = np.linspace(0.0, w.period, grid + 1)
    vx, vy = evaluate(w, t)
    mag2 = vx**2 + vy**2
    k = int(np.argmax(mag2))
    lo = t[max(k - 1, 0)]
    hi = t[min(k + 1, grid)]

    def f(tt):
        a, b = evaluate(w, tt)
        return -(a * a + b * b)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    best = max(np.max(mag2), -min(fc, fd))
    return math.sqrt(best) * w.period / (2 * np.pi)


def to_dict(w: Waveform) -> dict:
    if isinstance(w, FourierWaveform):
        return {
            "kind": "fourier",
            "period": w.period,
            "axes": {ax: [float(v) for v in w.coeffs[ax]] for ax in AXES},
        }
    return {
        "kind": "pulse_train",
        "period": w.period,
        "edge_fraction": w.edge_fraction,
        "pulses": [
            {"start": p.start, "width": p.width, "phase": p.phase,
             "amplitude": p.amplitude}
            for p in w.pulses
        ],
    }


def from_dict(d: dict) -> Waveform:
    kind = d.get("kind")
    if kind == "fourier":
        return FourierWaveform(float(d["period"]), {
            ax: np.asarray(d["axes"].get(ax, ()), dtype=float) for ax in AXES
        })
    if kind == "pulse_train":
        return PulseTrain(
            float(d["period"]),
            tuple(Pulse(p["start"], p["width"], p["phase"], p["amplitude"])
                  for p in d["pulses"]),
            edge_fraction=float(d.get("edge_fraction", 0.0)),
        )
    raise WaveformError(f"unknown waveform kind {kind!r}")


def save(w: Waveform, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_dict(w), fh, indent=2)
        fh.write("\n")


def load(path) -> Waveform:
    with open(path) as fh:
        return from_dict(json.load(fh))
