import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddsynth import waveform as wf


def test_sine_series_vanishes_at_endpoints(dephasing_table):
    for t in (0.0, 0.5, 1.0):
        vx, vy = wf.evaluate(dephasing_table, t)
        assert abs(vx) < 1e-12 and abs(vy) < 1e-12


def test_evaluate_matches_direct_summation(dipolar_table):
    t = 0.25
    vx, vy = wf.evaluate(dipolar_table, t)
    for got, ax in ((vx, "x"), (vy, "y")):
        c = dipolar_table.coeffs[ax]
        expect = np.pi * sum(
            cn * np.sin(2 * np.pi * (n + 1) * t) for n, cn in enumerate(c))
        assert np.isclose(got, expect, rtol=1e-12)


def test_evaluate_rejects_out_of_cycle(dephasing_table):
    with pytest.raises(wf.WaveformError):
        wf.evaluate(dephasing_table, 1.5)
    vx, _ = wf.evaluate(dephasing_table, 1.5, wrap=True)
    vx0, _ = wf.evaluate(dephasing_table, 0.5)
    assert np.isclose(vx, vx0)


def test_zero_waveform_energy():
    assert wf.energy(wf.FourierWaveform(1.0, {})) == 0.0


def test_single_harmonic_peak():
    w = wf.FourierWaveform(1.0, {"x": [4.0]})
    # v_x = 4 pi sin(2 pi t); peak in T/2pi units is the coefficient / 2
    assert np.isclose(wf.peak_amplitude(w), 2.0, rtol=1e-10)


def test_peak_scales_linearly(dephasing_table):
    p1 = wf.peak_amplitude(dephasing_table)
    p3 = wf.peak_amplitude(dephasing_table.scaled(3.0))
    assert np.isclose(p3, 3.0 * p1, rtol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 16 - 1))
def test_parseval_vs_quadrature(seed):
    rng = np.random.default_rng(seed)
    w = wf.FourierWaveform.from_vector(rng.normal(0, 2, 12), 1.0)
    e_parseval = wf.energy(w)
    e_quad = wf._quadrature_energy(w, 1 << 14)
    assert np.isclose(e_parseval, e_quad, rtol=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 16 - 1))
def test_sine_series_odd_about_half_period(seed):
    # v(T - t) = -v(t): the frame retraces itself, closing every cycle
    rng = np.random.default_rng(seed)
    w = wf.FourierWaveform.from_vector(rng.normal(0, 2, 10), 1.0)
    t = rng.uniform(0.0, 1.0, size=8)
    vx1, vy1 = wf.evaluate(w, t)
    vx2, vy2 = wf.evaluate(w, 1.0 - t)
    assert np.allclose(vx2, -vx1) and np.allclose(vy2, -vy1)


def test_coefficient_vector_round_trip(dipolar_table):
    vec = dipolar_table.coefficient_vector()
    back = wf.FourierWaveform.from_vector(vec, dipolar_table.period)
    assert np.allclose(back.coeffs["x"], dipolar_table.coeffs["x"])
    assert np.allclose(back.coeffs["y"], dipolar_table.coeffs["y"])
    with pytest.raises(wf.WaveformError):
        wf.FourierWaveform.from_vector(np.zeros(5), 1.0)


def test_bandwidth_counts_highest_nonzero_harmonic():
    w = wf.FourierWaveform(2.0, {"x": [1.0, 0.0, 0.5], "y": [0.2]})
    assert w.bandwidth == 2 * 3 / 2.0
    assert wf.FourierWaveform(1.0, {}).bandwidth == 0.0


def test_pulse_train_validation():
    with pytest.raises(wf.WaveformError):
        wf.PulseTrain(1.0, (wf.Pulse(0.0, 0.0, 0.0, 1.0),))  # delta pulse
    with pytest.raises(wf.WaveformError):
        wf.PulseTrain(1.0, (wf.Pulse(0.1, 0.3, 0.0, 1.0),
                            wf.Pulse(0.2, 0.2, 0.0, 1.0)))  # overlap
    with pytest.raises(wf.WaveformError):
        wf.PulseTrain(1.0, (wf.Pulse(0.9, 0.2, 0.0, 1.0),))  # past T


def test_pulse_train_evaluate_and_energy():
    train = wf.PulseTrain(1.0, (wf.Pulse(0.1, 0.2, np.pi / 2, 3.0),))
    vx, vy = wf.evaluate(train, 0.2)
    assert np.isclose(vx, 0.0, atol=1e-12) and np.isclose(vy, 3.0)
    assert wf.evaluate(train, 0.5) == (0.0, 0.0)
    assert np.isclose(wf.energy(train), np.sqrt(9.0 * 0.2))
    assert np.isclose(wf.peak_amplitude(train), 3.0 / (2 * np.pi))


def test_pulse_train_smoothed_edges_lower_energy():
    sharp = wf.PulseTrain(1.0, (wf.Pulse(0.2, 0.4, 0.0, 2.0),))
    smooth = wf.PulseTrain(1.0, (wf.Pulse(0.2, 0.4, 0.0, 2.0),),
                           edge_fraction=0.25)
    assert wf.energy(smooth) < wf.energy(sharp)


def test_json_round_trip(tmp_path, dephasing_table):
    path = tmp_path / "w.json"
    wf.save(dephasing_table, path)
    back = wf.load(path)
    assert isinstance(back, wf.FourierWaveform)
    assert np.allclose(back.coefficient_vector(),
                       dephasing_table.coefficient_vector())

    train = wf.PulseTrain(2.0, (wf.Pulse(0.5, 0.1, 0.3, 7.0),))
    wf.save(train, path)
    back = wf.load(path)
    assert isinstance(back, wf.PulseTrain)
    assert back.pulses == train.pulses and back.period == 2.0

    with open(path, "w") as fh:
        json.dump({"kind": "mystery"}, fh)
    with pytest.raises(wf.WaveformError):
        wf.load(path)
