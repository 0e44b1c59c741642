"""Compare the compiled and numpy pair-sum backends on realistic sweeps.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time
from unittest import mock

import numpy as np

from homcavity import Cavity, InterferometerConfig, SpectralProfile, kernels, series


def configs():
    p = SpectralProfile.degenerate(826.2e-9, 8e-9)
    yield "res/anti R=0.7", InterferometerConfig(p, Cavity(0.4050447e-3, 0.7), Cavity(0.404838e-3, 0.7))
    yield "res/anti R=0.9", InterferometerConfig(p, Cavity(0.4050447e-3, 0.9), Cavity(0.404838e-3, 0.9))
    yield "neither R=0.95", InterferometerConfig(p, Cavity(0.4e-3, 0.95), Cavity(0.41e-3, 0.95))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--samples", type=int, default=1001)
    args = parser.parse_args()
    if kernels.compiled_pair_envelope_sum is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'config':<16} {'cython [s]':>11} {'numpy [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for name, cfg in configs():
        run = lambda: series.sweep(cfg, -8e-12, 8e-12, args.samples).rates
        t_c, r_c = best_of(run, args.repeat)
        with mock.patch.object(kernels, "pair_envelope_sum", kernels.python_pair_envelope_sum):
            t_p, r_p = best_of(run, args.repeat)
        print(f"{name:<16} {t_c:>11.4f} {t_p:>11.4f} {t_p / t_c:>7.1f}x {np.max(np.abs(r_c - r_p)):>11.1e}")


if __name__ == "__main__":
    main()
