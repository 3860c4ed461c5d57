"""Exact small-system simulation of driven qubits and fidelity metrics.

The simulation integrates the rotating-frame Schrodinger equation
dU~/dt = -i H~(t) U~ with H~ the frame-conjugated static (plus drive-error)
Hamiltonian.  Two frame orientations appear, matching the two bundled
problem families: the single-qubit dephasing problem conjugates with the
frame propagator directly, the collectively driven dipolar chain with its
inverse (see cost_functions for the corresponding coefficient functions).

Fidelities: worst-case pure-state gate fidelity of the traced-out qubit
channel (bath maximally mixed), plain state overlap, normalized overlap of
propagators, and the per-cycle normalization used for cross-size dipolar
comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import waveform as wf
from .lie_basis import pauli, realize, PauliString
from .modulation import frame_quaternions, _quat_to_unitary
from .presets import DEPHASING_COUPLINGS

FRAME_DIRECT = "direct"
FRAME_INVERSE = "inverse"


@dataclass(frozen=True)
class SimulatedSystem:
    """Static Hamiltonian plus drive/error structure of one benchmark system.

    ``epsilons`` are the four drive-proportional instrument-error channels
    (amplitude errors on the diagonal quadratures, mixing errors off it);
    ``frame`` selects the rotating-frame orientation.
    """

    n_system: int
    n_bath: int
    h0: np.ndarray
    frame: str = FRAME_DIRECT
    epsilons: tuple = (0.0, 0.0, 0.0, 0.0)

    @property
    def n_qubits(self) -> int:
        return self.n_system + self.n_bath

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def h0_norm(self) -> float:
        return float(np.linalg.norm(self.h0, 2))


def instrument_errors(dbeta: float = 0.0, dphi: float = 0.0) -> tuple:
    """(eps1..eps4) for a flip-angle error and a quadrature-mixing angle.

    dbeta scales both drive quadratures in place (eps1 = eps3 = dbeta);
    dphi tilts the x drive toward the y axis (eps4 = tan(dphi)), the
    orthogonality defect of an IQ mixer.
    """
    return (dbeta, 0.0, dbeta, math.tan(dphi))


def build_dephasing_system(period: float = 1.0, couplings=None,
                           dbeta: float = 0.0,
                           dphi: float = 0.0) -> SimulatedSystem:
    """One driven qubit z-coupled to bath TLSs (couplings in pi/T units)."""
    g = DEPHASING_COUPLINGS if couplings is None else np.asarray(couplings)
    n_bath = len(g)
    n = 1 + n_bath
    h0 = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for k, gk in enumerate(g):
        sites = ["I"] * n
        sites[0] = "Z"
        sites[1 + k] = "Z"
        h0 += gk * np.pi / period * realize(PauliString(tuple(sites)), n)
    return SimulatedSystem(1, n_bath, h0, FRAME_DIRECT,
                           instrument_errors(dbeta, dphi))


def dipolar_couplings(n: int, period: float = 1.0) -> dict:
    """Chain couplings: pi/T for neighbors, pi/8T for next neighbors."""
    d = {}
    for k in range(n - 1):
        d[(k, k + 1)] = np.pi / period
    for k in range(n - 2):
        d[(k, k + 2)] = np.pi / (8.0 * period)
    return d


def build_dipolar_chain(n: int, period: float = 1.0) -> SimulatedSystem:
    """n-qubit chain with secular dipolar couplings, collectively driven."""
    if not 2 <= n <= 8:
        raise ValueError("chain size must be in 2..8")
    h0 = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for (k1, k2), d in dipolar_couplings(n, period).items():
        for axis, weight in (("Z", 1.0), ("X", -0.5), ("Y", -0.5)):
            sites = ["I"] * n
            sites[k1] = axis
            sites[k2] = axis
            h0 += d * weight * realize(PauliString(tuple(sites)), n)
    return SimulatedSystem(n, 0, h0, FRAME_INVERSE)


def _frame_unitary(sys: SimulatedSystem, u1: np.ndarray) -> np.ndarray:
    """Full-system frame at one instant from the single-qubit frame u1.

    Direct orientation drives the first qubit only; the inverse orientation
    is a collective drive, so every qubit carries the (daggered) frame.
    """
    if sys.frame == FRAME_INVERSE:
        out = u1.conj().T
        for _ in range(sys.n_qubits - 1):
            out = np.kron(out, u1.conj().T)
        return out
    return np.kron(u1, np.eye(sys.dim // 2))


def _error_hamiltonians(sys: SimulatedSystem, w: wf.Waveform,
                        n_steps: int) -> np.ndarray:
    """Drive-error term at the grid times (zero matrix when no errors)."""
    e1, e2, e3, e4 = sys.epsilons
    if not any(sys.epsilons):
        return np.zeros((1, 1, 1))
    t = np.linspace(0.0, w.period, n_steps + 1)
    vx, vy = wf.evaluate(w, t, wrap=True)
    sx = np.kron(pauli("X"), np.eye(sys.dim // 2))
    sy = np.kron(pauli("Y"), np.eye(sys.dim // 2))
    ax = 0.5 * (e1 * vx + e2 * vy)
    ay = 0.5 * (e3 * vy + e4 * vx)
    return ax[:, None, None] * sx + ay[:, None, None] * sy


def evolve(sys: SimulatedSystem, w: wf.Waveform, cycles: int = 1,
           n_steps: int = 4096) -> np.ndarray:
    """Rotating-frame propagator after ``cycles`` periods.

    Midpoint-exponential integration of dU~/dt = -i H~ U~ on n_steps
    (>= 1024) steps per cycle; cycles compose by matrix power.
    """
    if n_steps < 1024:
        raise ValueError("need at least 1024 steps per cycle")
    frames = _quat_to_unitary(frame_quaternions(w, n_steps))
    herr = _error_hamiltonians(sys, w, n_steps)
    dt = w.period / n_steps
    u = np.eye(sys.dim, dtype=complex)
    h_prev = None
    for k in range(n_steps + 1):
        h_lab = sys.h0 if herr.shape[0] == 1 else sys.h0 + herr[k]
        q = _frame_unitary(sys, frames[k])
        h_k = q @ h_lab @ q.conj().T
        if h_prev is not None:
            h_mid = 0.5 * (h_prev + h_k)
            vals, vecs = np.linalg.eigh(h_mid)
            u = (vecs * np.exp(-1j * dt * vals)) @ vecs.conj().T @ u
        h_prev = h_k
    return np.linalg.matrix_power(u, cycles)


def gate_fidelity(sys: SimulatedSystem, u: np.ndarray,
                  grid: tuple = (32, 64), refine: int = 2) -> float:
    """Worst-case pure-state fidelity of the qubit channel of ``u``.

    The bath starts maximally mixed; the channel is the partial trace over
    it.  Minimization over the Bloch sphere by grid search plus local grid
    refinement.
    """
    if sys.n_system != 1:
        raise ValueError("gate fidelity is defined for one system qubit")
    nb = sys.dim // 2
    u4 = u.reshape(2, nb, 2, nb)

    def fid(theta, phi):
        theta = np.atleast_1d(theta)
        phi = np.atleast_1d(phi)
        states = np.stack([np.cos(theta / 2),
                           np.exp(1j * phi) * np.sin(theta / 2)], axis=1)
        t1 = np.einsum("ga,abcd->gbcd", states.conj(), u4)
        amp = np.einsum("gbcd,gc->gbd", t1, states)
        return np.sqrt(np.sum(np.abs(amp) ** 2, axis=(1, 2)) / nb)

    nt, np_ = grid
    thetas, phis = np.meshgrid(np.linspace(0.0, np.pi, nt),
                               np.linspace(0.0, 2 * np.pi, np_, endpoint=False),
                               indexing="ij")
    f = fid(thetas.ravel(), phis.ravel()).reshape(nt, np_)
    k = np.unravel_index(np.argmin(f), f.shape)
    t0, p0 = thetas[k], phis[k]
    dt_, dp = np.pi / nt, 2 * np.pi / np_
    best = float(f[k])
    for _ in range(refine):
        tt, pp = np.meshgrid(np.linspace(t0 - dt_, t0 + dt_, 17),
                             np.linspace(p0 - dp, p0 + dp, 17),
                             indexing="ij")
        tt = np.clip(tt, 0.0, np.pi)
        ff = fid(tt.ravel(), pp.ravel()).reshape(17, 17)
        k = np.unravel_index(np.argmin(ff), ff.shape)
        t0, p0 = tt[k], pp[k]
        best = min(best, float(ff[k]))
        dt_, dp = dt_ / 8, dp / 8
    return best


def trace_fidelity(u_actual: np.ndarray, u_ideal=None) -> float:
    """Normalized propagator overlap |Tr[U_ideal^dag U]| / dim."""
    dim = u_actual.shape[0]
    if u_ideal is None:
        u_ideal = np.eye(dim)
    return float(abs(np.trace(u_ideal.conj().T @ u_actual)) / dim)


def state_fidelity(state: np.ndarray, u: np.ndarray) -> float:
    """Return probability |<psi| U |psi>|^2."""
    return float(abs(np.vdot(state, u @ state)) ** 2)


def normalized_fidelity(f: float, coupling_norm: float) -> float:
    """Per-cycle fidelity rescaled by the coupling norm, 1-(1-F)/norm."""
    return 1.0 - (1.0 - f) / coupling_norm


def benchmark_state(label: str, n: int) -> np.ndarray:
    """CSS (collective-x ground spin-coherent state), GHZ, MES, or Dicke."""
    dim = 2 ** n
    label = label.lower()
    if label in ("css", "mes"):
        # both definitions give the uniform superposition 2^{-n/2} sum_i |i>
        return np.full(dim, dim ** -0.5, dtype=complex)
    if label == "ghz":
        v = np.zeros(dim, dtype=complex)
        v[0] = v[-1] = 2.0 ** -0.5
        return v
    if label == "dicke":
        k = n // 2
        v = np.zeros(dim, dtype=complex)
        for i in range(dim):
            if bin(i).count("1") == k:
                v[i] = 1.0
        return v / np.linalg.norm(v)
    raise ValueError(f"unknown benchmark state {label!r}")
