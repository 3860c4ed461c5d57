"""Toggling-frame propagator and the system-modulation matrix.

The control frame is the time-ordered unitary path U(t) solving

    dU/dt = i V(t) U(t),   U(0) = 1,

with generator V(t) = (v_x(t) s_x + v_y(t) s_y) / 2, i.e. the rotation angle
of a pulse equals its area int v dt (v is the Rabi frequency).  The
frame-transformed static Hamiltonian is H~(t) = U H0 U^dag, and the exact
residual evolution integrates dU~/dt = -i H~(t) U~ directly (see
evaluator.evolve).  One convention everywhere: the bundled synthesized
waveforms drive the zeroth- and first-order averages of H~ to ~1e-8 only
under this reading.

The modulation matrix c[beta, alpha](t) expands U s_alpha U^dag over the
single-qubit Pauli basis; each time slice is a real rotation matrix.  SU(2)
propagation is done in quaternion components (q0 + i q.sigma), which is the
hot kernel: numba-jitted sequential loop, with a vectorized log-step scan as
the pure-numpy fallback (env flag DDSYNTH_DISABLE_NUMBA).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import USE_NUMBA, njit
from . import waveform as wf
from .lie_basis import coefficients as _basis_coefficients


class ModulationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# quaternion kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def _propagate_loop(vx: np.ndarray, vy: np.ndarray, dt: float) -> np.ndarray:
    """Sequential scan of midpoint step rotations, U_{k+1} = F_k U_k.

    vx, vy hold midpoint samples of the generator components (length N);
    returns (N+1, 4) quaternions with q[k] ~ U(t_k).
    """
    n = vx.shape[0]
    q = np.empty((n + 1, 4))
    q[0, 0] = 1.0
    q[0, 1] = 0.0
    q[0, 2] = 0.0
    q[0, 3] = 0.0
    for k in range(n):
        amp = np.sqrt(vx[k] * vx[k] + vy[k] * vy[k])
        theta = amp * dt
        c = np.cos(theta)
        if amp > 0.0:
            s = np.sin(theta) / amp
        else:
            s = dt
        f0 = c
        f1 = s * vx[k]
        f2 = s * vy[k]
        a0, a1, a2, a3 = q[k, 0], q[k, 1], q[k, 2], q[k, 3]
        # (f0 + i f.s)(a0 + i a.s): vector part f0 a + a0 f - f x a
        q[k + 1, 0] = f0 * a0 - f1 * a1 - f2 * a2
        q[k + 1, 1] = f0 * a1 + a0 * f1 - (f2 * a3 - 0.0 * a2)
        q[k + 1, 2] = f0 * a2 + a0 * f2 - (0.0 * a1 - f1 * a3)
        q[k + 1, 3] = f0 * a3 - (f1 * a2 - f2 * a1)
        # renormalize against drift
        norm = np.sqrt(q[k + 1, 0] ** 2 + q[k + 1, 1] ** 2
                       + q[k + 1, 2] ** 2 + q[k + 1, 3] ** 2)
        q[k + 1] /= norm
    return q


def _compose_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternion products a*b along the leading axis (numpy path)."""
    out = np.empty_like(a)
    out[:, 0] = a[:, 0] * b[:, 0] - a[:, 1] * b[:, 1] - a[:, 2] * b[:, 2] - a[:, 3] * b[:, 3]
    out[:, 1] = a[:, 0] * b[:, 1] + b[:, 0] * a[:, 1] - (a[:, 2] * b[:, 3] - a[:, 3] * b[:, 2])
    out[:, 2] = a[:, 0] * b[:, 2] + b[:, 0] * a[:, 2] - (a[:, 3] * b[:, 1] - a[:, 1] * b[:, 3])
    out[:, 3] = a[:, 0] * b[:, 3] + b[:, 0] * a[:, 3] - (a[:, 1] * b[:, 2] - a[:, 2] * b[:, 1])
    return out


def _propagate_scan(vx: np.ndarray, vy: np.ndarray, dt: float) -> np.ndarray:
    """Log-step inclusive scan over step quaternions (pure numpy)."""
    n = vx.shape[0]
    amp = np.hypot(vx, vy)
    theta = amp * dt
    s = np.where(amp > 0.0, np.divide(np.sin(theta), amp, where=amp > 0.0), dt)
    f = np.zeros((n, 4))
    f[:, 0] = np.cos(theta)
    f[:, 1] = s * vx
    f[:, 2] = s * vy
    # Hillis-Steele inclusive scan: after pass s, q[k] = f[k] * ... * f[k-s+1]
    q = f.copy()
    shift = 1
    while shift < n:
        q[shift:] = _compose_batch(q[shift:], q[:-shift])
        shift <<= 1
    out = np.empty((n + 1, 4))
    out[0] = (1.0, 0.0, 0.0, 0.0)
    out[1:] = q
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


def _quat_to_rot(q: np.ndarray) -> np.ndarray:
    """Rotation matrices R[beta, alpha] with U s_alpha U^dag = sum_b R[b, a] s_b."""
    q0, q1, q2, q3 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    s = q0 * q0 - (q1 * q1 + q2 * q2 + q3 * q3)
    r = np.empty(q.shape[:-1] + (3, 3))
    r[..., 0, 0] = s + 2 * q1 * q1
    r[..., 1, 0] = 2 * (q1 * q2 - q0 * q3)
    r[..., 2, 0] = 2 * (q1 * q3 + q0 * q2)
    r[..., 0, 1] = 2 * (q1 * q2 + q0 * q3)
    r[..., 1, 1] = s + 2 * q2 * q2
    r[..., 2, 1] = 2 * (q2 * q3 - q0 * q1)
    r[..., 0, 2] = 2 * (q1 * q3 - q0 * q2)
    r[..., 1, 2] = 2 * (q2 * q3 + q0 * q1)
    r[..., 2, 2] = s + 2 * q3 * q3
    return r


def _quat_to_unitary(q: np.ndarray) -> np.ndarray:
    u = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = q[..., 0] + 1j * q[..., 3]
    u[..., 0, 1] = q[..., 2] + 1j * q[..., 1]
    u[..., 1, 0] = -q[..., 2] + 1j * q[..., 1]
    u[..., 1, 1] = q[..., 0] - 1j * q[..., 3]
    return u


def frame_quaternions(w: wf.Waveform, n_steps: int = 4096) -> np.ndarray:
    """Quaternion components of U(t_k) on the uniform grid t_k = k T / N."""
    if n_steps < 256 or (n_steps & (n_steps - 1)) != 0:
        raise ModulationError("n_steps must be a power of two >= 256")
    dt = w.period / n_steps
    t_mid = (np.arange(n_steps) + 0.5) * dt
    vx, vy = wf.evaluate(w, t_mid)
    # generator is v/2 per axis (Rabi-frequency convention)
    vx = 0.5 * np.atleast_1d(np.asarray(vx, dtype=float))
    vy = 0.5 * np.atleast_1d(np.asarray(vy, dtype=float))
    if not (np.all(np.isfinite(vx)) and np.all(np.isfinite(vy))):
        raise ModulationError("waveform produced non-finite values")
    if USE_NUMBA:
        return _propagate_loop(vx, vy, dt)
    return _propagate_scan(vx, vy, dt)


def propagate_frame(w: wf.Waveform, n_steps: int = 4096) -> np.ndarray:
    """Frame unitaries U(t_k), shape (N+1, 2, 2), for t_k = k T / N."""
    return _quat_to_unitary(frame_quaternions(w, n_steps))


# ---------------------------------------------------------------------------
# modulation matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModulationMatrix:
    """Time samples and Fourier coefficients of c[beta, alpha](t).

    samples has shape (N+1, 3, 3) on the inclusive grid t_k = k T / N;
    fourier has shape (3, 3, 2*n_max+1) with harmonic index n running
    -n_max..n_max (offset by n_max).
    """

    period: float
    times: np.ndarray
    samples: np.ndarray
    fourier: np.ndarray
    n_max: int

    def coeff(self, beta: int, alpha: int, n: int) -> complex:
        if abs(n) > self.n_max:
            raise IndexError(f"|n| > n_max = {self.n_max}")
        return complex(self.fourier[beta, alpha, n + self.n_max])

    def column_fourier(self, alpha: int) -> np.ndarray:
        """fourier[:, alpha, :] — the three series c[beta, alpha, n]."""
        return self.fourier[:, alpha, :]


def _fourier_from_samples(samples: np.ndarray, n_max: int) -> np.ndarray:
    """DFT of the periodic samples (endpoint dropped), normalized so that
    c(t) = sum_n fourier[..., n] exp(2 pi i n t / T)."""
    n_steps = samples.shape[0] - 1
    if n_max >= n_steps // 2:
        raise ModulationError("n_max must be below the sampling Nyquist index")
    spec = np.fft.fft(samples[:-1], axis=0) / n_steps  # (N, 3, 3)
    idx = np.concatenate([np.arange(-n_max, 0) % n_steps, np.arange(0, n_max + 1)])
    out = spec[idx]  # (2*n_max+1, 3, 3)
    return np.moveaxis(out, 0, -1)


def modulation_from_waveform(w: wf.Waveform, n_steps: int = 4096,
                             n_max: int = 64) -> ModulationMatrix:
    """Modulation matrix of a single-qubit (or collective) x/y drive."""
    q = frame_quaternions(w, n_steps)
    samples = _quat_to_rot(q)
    fourier = _fourier_from_samples(samples, n_max)
    times = np.linspace(0.0, w.period, n_steps + 1)
    return ModulationMatrix(w.period, times, samples, fourier, n_max)


def modulation_matrix(frames: np.ndarray, basis, period: float,
                      n_max: int = 64, closure_tol: float = 1e-8) -> ModulationMatrix:
    """Modulation matrix from explicit frame unitaries and an operator basis.

    basis is a list of (PauliString, matrix) pairs closed under the adjoint
    action of every frame; a residual component outside the span above
    closure_tol raises, since the expansion premise is then violated.
    """
    frames = np.asarray(frames)
    mats = [m for _, m in basis]
    nb = len(mats)
    n_slices = frames.shape[0]
    samples = np.empty((n_slices, nb, nb))
    for k in range(n_slices):
        u = frames[k]
        for a, ma in enumerate(mats):
            rotated = u @ ma @ u.conj().T
            col = np.array([np.trace(mb.conj().T @ rotated) for mb in mats])
            recon = sum(c * mb for c, mb in zip(col, mats))
            resid = np.linalg.norm(rotated - recon)
            if resid > closure_tol:
                raise ModulationError(
                    f"basis not closed under the frame (residual {resid:.2e})")
            if np.max(np.abs(col.imag)) > 1e-9:
                raise ModulationError("modulation coefficients are not real")
            samples[k, :, a] = col.real
    fourier = _fourier_from_samples(samples, min(n_max, (n_slices - 1) // 2 - 1))
    times = np.linspace(0.0, period, n_slices)
    return ModulationMatrix(period, times, samples, fourier,
                            min(n_max, (n_slices - 1) // 2 - 1))


def continuity_penalty(m: ModulationMatrix) -> float:
    """Squared discontinuity of c across the cycle boundary, sum |c(T)-c(0)|^2."""
    d = m.samples[-1] - m.samples[0]
    return float(np.sum(d * d))
