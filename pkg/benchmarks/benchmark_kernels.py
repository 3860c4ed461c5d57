"""Benchmark the frame-propagation kernel: numba loop vs numpy scan.

Runs both implementations on the same random band-limited waveforms, checks
they agree, and reports timings per grid size.  The selection used by the
package itself is controlled by the DDSYNTH_DISABLE_NUMBA environment
variable; here both paths are timed directly in one process.

Usage: python3 benchmarks/benchmark_kernels.py [--sizes 1024 4096 16384]
"""

import argparse
import time

import numpy as np

from ddsynth._accel import USE_NUMBA
from ddsynth.modulation import _propagate_loop, _propagate_scan
from ddsynth import waveform as wf


def _samples(rng, n_steps):
    w = wf.FourierWaveform.from_vector(rng.normal(0, 3, 18), 1.0)
    dt = 1.0 / n_steps
    t_mid = (np.arange(n_steps) + 0.5) * dt
    vx, vy = wf.evaluate(w, t_mid)
    return 0.5 * vx, 0.5 * vy, dt


def _time(fn, args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[1024, 4096, 16384, 65536])
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    if not USE_NUMBA:
        print("numba unavailable or disabled; timing the numpy scan only")
    print(f"{'n_steps':>8} {'numba loop':>12} {'numpy scan':>12} {'speedup':>8}")
    for n in args.sizes:
        vx, vy, dt = _samples(rng, n)
        t_scan = _time(_propagate_scan, (vx, vy, dt), args.repeats)
        if USE_NUMBA:
            _propagate_loop(vx, vy, dt)  # trigger compilation outside timing
            t_loop = _time(_propagate_loop, (vx, vy, dt), args.repeats)
            q_loop = _propagate_loop(vx, vy, dt)
            q_scan = _propagate_scan(vx, vy, dt)
            err = np.max(np.abs(q_loop - q_scan))
            assert err < 1e-10, f"kernel mismatch: {err:.3e}"
            print(f"{n:>8} {t_loop * 1e3:>10.3f}ms {t_scan * 1e3:>10.3f}ms "
                  f"{t_scan / t_loop:>7.2f}x")
        else:
            print(f"{n:>8} {'-':>12} {t_scan * 1e3:>10.3f}ms {'-':>8}")


if __name__ == "__main__":
    main()
