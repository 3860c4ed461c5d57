import numpy as np
import pytest

from ddsynth import presets
from ddsynth.modulation import modulation_from_waveform


@pytest.fixture(scope="session")
def dephasing_table():
    return presets.dephasing_waveform()


@pytest.fixture(scope="session")
def dipolar_table():
    return presets.dipolar_waveform()


@pytest.fixture(scope="session")
def dephasing_modulation(dephasing_table):
    return modulation_from_waveform(dephasing_table)


@pytest.fixture(scope="session")
def dipolar_modulation(dipolar_table):
    return modulation_from_waveform(dipolar_table)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20230817)
