"""Comparison pulse sequences: CPMG, UDD, QDD, and MREV16 as pulse trains.

Construction is peak-primary: the rectangular pulse amplitude equals the
budget's peak limit and each width follows from its rotation area
(width = area / amplitude).  The nominal energy/peak figures for these
sequences are not simultaneously achievable with rectangular pulses (a
fixed pulse count and area tie energy to sqrt(amplitude)), so the peak is
treated as the binding constraint and the achieved energy is whatever it
is; ``waveform.energy`` reports it.

Timing conventions (configurable where noted):

* UDD_n: pi pulses about x centered at t_j = T sin^2(j pi / (2n + 2)).
* CPMG_n: pi pulses about x centered at (j - 1/2) T / n.
* QDD_n: outer UDD_n of y-phase pi pulses; inner UDD_n of x-phase pi
  pulses nested in the free intervals between outer pulse edges.
* MREV16: two mirror-phase MREV-8 subcycles of eight pi/2 pulses each on
  a (tau, tau, 2tau, tau, 2tau, tau, 2tau, tau, tau) delay grid, T = 24 tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .waveform import Pulse, PulseTrain, WaveformError

# MREV-8 subcycle: (delay multiples of tau before each pulse center), phases.
# The pattern tours the toggled z axis through x, y, z with equal weight,
# so the zero-order average of a secular dipolar coupling vanishes in the
# delta-pulse limit (checked in tests against a rotation-bookkeeping oracle).
MREV8_PHASES = (0.0, -np.pi / 2, np.pi / 2, np.pi, np.pi, np.pi / 2,
                -np.pi / 2, 0.0)
MREV8_DELAYS = (1, 1, 2, 1, 2, 1, 2, 1)  # pulse centers at cumulative tau


class BudgetError(WaveformError):
    """Requested budget cannot be realized with non-overlapping pulses."""


@dataclass(frozen=True)
class SequenceBudget:
    """Energy/peak budget for a reference sequence.

    energy_target is informational (the nominal per-cycle figure);
    peak_limit (in T/2pi units) sets the rectangular amplitude.
    """

    energy_target: float
    peak_limit: float

    def __post_init__(self):
        if self.energy_target <= 0 or self.peak_limit <= 0:
            raise BudgetError("budget figures must be positive")

    def amplitude(self, period: float) -> float:
        """Physical rectangular amplitude: peak_limit * 2 pi / T."""
        return self.peak_limit * 2.0 * np.pi / period


def udd_times(n: int, period: float) -> np.ndarray:
    """Pulse centers t_j = T sin^2(j pi / (2n + 2)), j = 1..n."""
    j = np.arange(1, n + 1)
    return period * np.sin(j * np.pi / (2 * n + 2)) ** 2


def cpmg_times(n: int, period: float) -> np.ndarray:
    j = np.arange(1, n + 1)
    return (j - 0.5) * period / n


def _train_from_centers(period: float, centers, phases, areas,
                        amplitude: float) -> PulseTrain:
    pulses = []
    for center, phase, area in zip(centers, phases, areas):
        width = area / amplitude
        start = center - width / 2.0
        if start < 0.0 or start + width > period:
            raise BudgetError(
                f"pulse at t={center:.4f} (width {width:.4f}) leaves [0, T]")
        pulses.append(Pulse(start, width, phase, amplitude))
    try:
        return PulseTrain(period, tuple(pulses))
    except WaveformError as exc:
        raise BudgetError(str(exc)) from exc


def make_udd(n: int, period: float, budget: SequenceBudget) -> PulseTrain:
    """n pi pulses about x at the UDD centers."""
    if n < 1:
        raise ValueError("order must be >= 1")
    centers = udd_times(n, period)
    return _train_from_centers(period, centers, [0.0] * n, [np.pi] * n,
                               budget.amplitude(period))


def make_cpmg(n: int, period: float, budget: SequenceBudget) -> PulseTrain:
    """n evenly spaced pi pulses about x (centers at (j - 1/2) T / n)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    centers = cpmg_times(n, period)
    return _train_from_centers(period, centers, [0.0] * n, [np.pi] * n,
                               budget.amplitude(period))


def make_qdd(n: int, period: float, budget: SequenceBudget) -> PulseTrain:
    """Nested UDD_n x UDD_n: y-phase outer pi pulses, x-phase inner layers.

    Inner layers live in the free intervals between outer pulse edges, so
    the construction stays overlap-free whenever the budget allows the
    outer layer itself.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    amplitude = budget.amplitude(period)
    width = np.pi / amplitude
    outer = udd_times(n, period)
    centers = list(outer)
    phases = [np.pi / 2] * n
    starts = np.concatenate([[0.0], outer + width / 2.0])
    ends = np.concatenate([outer - width / 2.0, [period]])
    for lo, hi in zip(starts, ends):
        if hi <= lo:
            raise BudgetError("outer pulses leave no room for inner layers")
        centers.extend(lo + udd_times(n, hi - lo))
        phases.extend([0.0] * n)
    order = np.argsort(centers)
    centers = np.asarray(centers)[order]
    phases = np.asarray(phases)[order]
    return _train_from_centers(period, centers, phases,
                               [np.pi] * len(centers), amplitude)


def make_mrev16(period: float, budget: SequenceBudget,
                phases=None) -> PulseTrain:
    """Two mirror-phase MREV-8 subcycles of pi/2 pulses, 16 pulses total.

    ``phases`` overrides the 8-entry subcycle phase pattern (the second
    subcycle always adds pi to every phase).
    """
    sub = MREV8_PHASES if phases is None else tuple(phases)
    if len(sub) != 8:
        raise ValueError("subcycle phase pattern must have 8 entries")
    tau = period / 24.0
    offsets = np.cumsum(MREV8_DELAYS) * tau  # centers within one subcycle
    centers = np.concatenate([offsets, offsets + period / 2.0])
    all_phases = list(sub) + [p + np.pi for p in sub]
    return _train_from_centers(period, centers, all_phases,
                               [np.pi / 2] * 16, budget.amplitude(period))


#: Budgets used for the bundled comparisons (energy figures per cycle,
#: peak limits in T/2pi units).
UDD12_BUDGET = SequenceBudget(energy_target=12 * np.pi, peak_limit=20.0)
QDD3_BUDGET = SequenceBudget(energy_target=16 * np.pi, peak_limit=22.0)
MREV16_BUDGET = SequenceBudget(energy_target=16 * np.pi, peak_limit=10.0)
