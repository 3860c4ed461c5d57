"""ddsynth: synthesis and evaluation of dynamical-decoupling control waveforms.

Submodules
----------
waveform             sine-series and pulse-train control waveforms, JSON IO
lie_basis            Pauli-string operator basis utilities
modulation           toggling-frame propagation and the system-modulation matrix
average_hamiltonian  Fourier (Floquet) average-Hamiltonian orders and checks
cost_functions       decoupling cost functions over modulation harmonics
reference_sequences  CPMG / UDD / QDD / MREV16 comparison pulse trains
optimizer            hybrid genetic + steepest-descent waveform synthesis
evaluator            exact small-system simulation and fidelity metrics
presets              bundled synthesized waveforms and benchmark couplings
cli                  command-line front end (synth / eval / sweep / traj)
"""

from . import (average_hamiltonian, cost_functions, evaluator, lie_basis,
               modulation, optimizer, presets, reference_sequences, waveform)

__all__ = [
    "average_hamiltonian", "cost_functions", "evaluator", "lie_basis",
    "modulation", "optimizer", "presets", "reference_sequences", "waveform",
]

__version__ = "0.1.0"
