import numpy as np
import pytest
import scipy.linalg

from ddsynth import waveform as wf
from ddsynth.average_hamiltonian import (FourierHamiltonian, avg_order0,
                                         avg_order1, avg_order2,
                                         direct_order0, direct_order1,
                                         propagator, propagator_check)
from ddsynth.evaluator import build_dephasing_system
from ddsynth.lie_basis import is_hermitian, pauli
from ddsynth.modulation import modulation_from_waveform, propagate_frame


def random_fourier(rng, n_max=6, dim=4, scale=1.0) -> FourierHamiltonian:
    """Random band-limited Hermitian-pairing harmonic set."""
    terms = np.zeros((2 * n_max + 1, dim, dim), dtype=complex)
    for n in range(0, n_max + 1):
        a = scale * (rng.normal(size=(dim, dim))
                     + 1j * rng.normal(size=(dim, dim)))
        if n == 0:
            terms[n_max] = 0.5 * (a + a.conj().T)
        else:
            terms[n_max + n] = a
            terms[n_max - n] = a.conj().T
    return FourierHamiltonian(1.0, terms)


def time_samples(fh: FourierHamiltonian, n_steps: int) -> np.ndarray:
    t = np.linspace(0.0, fh.period, n_steps + 1)
    n = np.arange(-fh.n_max, fh.n_max + 1)
    phases = np.exp(2j * np.pi * np.outer(t, n) / fh.period)
    return np.einsum("kn,nij->kij", phases, fh.terms)


def circular_drive_fh() -> FourierHamiltonian:
    # H(t) = cos(wt) sx + sin(wt) sy, w = 2 pi / T: single +-1 harmonics
    terms = np.zeros((3, 2, 2), dtype=complex)
    terms[2] = 0.5 * (pauli("X") - 1j * pauli("Y"))
    terms[0] = 0.5 * (pauli("X") + 1j * pauli("Y"))
    return FourierHamiltonian(1.0, terms)


def test_type_validation():
    with pytest.raises(ValueError):
        FourierHamiltonian(1.0, np.zeros((4, 2, 2)))  # even harmonic count
    fh = circular_drive_fh()
    assert fh.n_max == 1 and fh.dim == 2
    assert np.allclose(fh.term(5), 0.0)


def test_order0_zero_mean_and_constant():
    assert np.allclose(avg_order0(circular_drive_fh()), 0.0)
    h0 = np.diag([1.0, -1.0]).astype(complex)
    fh = FourierHamiltonian(1.0, h0[None])
    assert np.allclose(avg_order0(fh), h0)
    assert np.allclose(avg_order1(fh), 0.0)
    assert np.allclose(avg_order2(fh), 0.0)


def test_order1_circular_drive_closed_form():
    # known first-order average: -(T / 2 pi) sigma_z
    got = avg_order1(circular_drive_fh())
    assert np.allclose(got, -1.0 / (2 * np.pi) * pauli("Z"), atol=1e-12)


def test_order1_commuting_family_vanishes():
    terms = np.zeros((5, 2, 2), dtype=complex)
    for n in range(-2, 3):
        terms[n + 2] = (1.0 + 0.3 * n) * pauli("X")  # real-symmetric set
    fh = FourierHamiltonian(1.0, terms)
    assert np.allclose(avg_order1(fh), 0.0)
    assert np.allclose(avg_order2(fh), 0.0)


def test_orders_hermitian(rng):
    fh = random_fourier(rng)
    for order in (avg_order0, avg_order1, avg_order2):
        assert is_hermitian(order(fh), atol=1e-10)


def test_order1_antisymmetric_under_time_reversal(rng):
    fh = random_fourier(rng)
    rev = FourierHamiltonian(fh.period, fh.terms[::-1].copy())
    assert np.allclose(avg_order1(rev), -avg_order1(fh), atol=1e-12)


def test_direct_quadrature_cross_validation(rng):
    for _ in range(5):
        fh = random_fourier(rng)
        s = time_samples(fh, 16384)
        h0f, h0d = avg_order0(fh), direct_order0(s, 1.0)
        assert np.linalg.norm(h0f - h0d) < 1e-9 * np.linalg.norm(h0d)
        h1f, h1d = avg_order1(fh), direct_order1(s, 1.0)
        assert np.linalg.norm(h1f - h1d) < 1e-6 * np.linalg.norm(h1d)


def test_propagator_unitary_and_matches_expm(rng):
    fh = random_fourier(rng, n_max=3, scale=0.2)
    s = time_samples(fh, 1024)
    u = propagator(s, 1.0)
    assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-10
    const = np.broadcast_to(fh.term(0), (1025, 4, 4))
    u_const = propagator(np.ascontiguousarray(const), 1.0)
    assert np.max(np.abs(u_const - scipy.linalg.expm(-1j * fh.term(0)))) < 1e-10


def test_residual_zero_for_zero_hamiltonian():
    s = np.zeros((1025, 2, 2), dtype=complex)
    assert propagator_check(s, 1.0) < 1e-14


def test_residual_zero_for_commuting_modulation():
    # zero drive on a dephasing model: everything commutes, all orders exact
    sys_ = build_dephasing_system()
    g = 0.3 * sys_.h0 / np.linalg.norm(sys_.h0, 2)
    s = np.broadcast_to(g, (1025,) + g.shape)
    assert propagator_check(np.ascontiguousarray(s), 1.0) < 1e-12


def test_residual_third_order_scaling(rng):
    ratios = []
    for _ in range(10):
        fh = random_fourier(rng, n_max=4, scale=0.05)
        s1 = time_samples(fh, 1024)
        s2 = time_samples(FourierHamiltonian(1.0, 0.5 * fh.terms), 1024)
        ratios.append(propagator_check(s1, 1.0) / propagator_check(s2, 1.0))
    assert all(6.0 <= r <= 10.0 for r in ratios)


def cosine_fourier(rng, n_max=3, dim=4, scale=0.08) -> FourierHamiltonian:
    """Harmonic set with H_{-n} = H_n Hermitian and no static part.

    The time signal is a sum of cosines, so H(T - t) = H(t).  For such
    palindromic Hamiltonians the first-order average vanishes and the
    second-order harmonic formula coincides with the stroboscopic
    (single-exponential) expansion term, making it testable against the
    exact propagator without any micromotion bookkeeping.
    """
    terms = np.zeros((2 * n_max + 1, dim, dim), dtype=complex)
    for n in range(1, n_max + 1):
        a = scale * (rng.normal(size=(dim, dim))
                     + 1j * rng.normal(size=(dim, dim)))
        h = 0.5 * (a + a.conj().T)
        terms[n_max + n] = h
        terms[n_max - n] = h
    return FourierHamiltonian(1.0, terms)


def test_order2_palindromic_tail_scaling(rng):
    # cosine family: order-1 average vanishes; subtracting order 2 removes
    # the cubic tail and the residual drops to 5th order (even orders of a
    # palindromic cycle vanish), so halving the strength divides it by ~32
    fh = cosine_fourier(rng)
    half = FourierHamiltonian(1.0, 0.5 * fh.terms)
    assert np.linalg.norm(avg_order1(fh)) < 1e-14
    assert np.linalg.norm(avg_order2(fh)) > 1e-6
    s1, s2 = time_samples(fh, 2048), time_samples(half, 2048)
    r_without = propagator_check(s1, 1.0) / propagator_check(s2, 1.0)
    assert 6.0 <= r_without <= 10.0
    r_with = (propagator_check(s1, 1.0, orders=(0, 1, 2))
              / propagator_check(s2, 1.0, orders=(0, 1, 2)))
    assert 24.0 <= r_with <= 40.0


def test_modulated_dephasing_residual_scaling(dephasing_table):
    # table drive + benchmark couplings; halving couplings ~ eighth residual
    sys_ = build_dephasing_system()
    frames = propagate_frame(dephasing_table, 2048)
    full = np.kron(frames, np.eye(sys_.dim // 2))
    ratios = []
    for scale in (1.0, 0.5):
        h = scale * sys_.h0
        s = np.einsum("kab,bc,kdc->kad", full, h, full.conj())
        ratios.append(propagator_check(s, 1.0))
    assert 6.0 <= ratios[0] / ratios[1] <= 10.0
