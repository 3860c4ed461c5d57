"""Bundled synthesized waveforms used as regression fixtures and CLI defaults.

Both are 9-harmonic sine-series waveforms (coefficients in pi/T units):
``dephasing_waveform`` was synthesized against the single-qubit dephasing
cost with instrument-error channels (energy 11.50 pi, peak <= 10 T/2pi);
``dipolar_waveform`` against the collective-drive dipolar-chain cost
(energy 13.8 pi, peak <= 10 T/2pi, i.e. 20 pi/T).
"""

import numpy as np

from .waveform import FourierWaveform


def dephasing_waveform(period: float = 1.0) -> FourierWaveform:
    return FourierWaveform(period, {
        "x": np.array([
            -0.7030256, 3.3281747, 11.390077, 2.9375301, -1.8758792,
            1.7478474, 5.6966577, -0.5452435, 4.0826786,
        ]),
        "y": np.array([
            -3.6201768, 3.8753985, -1.2311919, -0.2998110, 3.1170274,
            0.3956137, -0.3593987, -3.5266063, 2.4900307,
        ]),
    })


def dipolar_waveform(period: float = 1.0) -> FourierWaveform:
    return FourierWaveform(period, {
        "x": np.array([
            -4.8892576, -3.1490576, -14.317448, -0.0929321, 6.8394959,
            -0.6645375, 0.3344480, -1.5042059, 2.3863574,
        ]),
        "y": np.array([
            -2.6291726, -3.4112889, -1.7326439, 4.2805093, -3.7925374,
            -2.3678092, -2.5797746, -1.9232075, -4.2795712,
        ]),
    })


#: Qubit-TLS couplings (in pi/T units) used by the dephasing benchmark system.
DEPHASING_COUPLINGS = np.array([0.0338264, -0.0906347, 0.0014495, 0.0740895])
