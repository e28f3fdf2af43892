"""Benchmark the JIT kernels against the pure-numpy fallback.

Times the three hot paths on synthetic workloads: batch min-distance over
a Monte Carlo ensemble, the density-field indicator sweep, and the
enlargement-volume grid quadrature.  JIT compilation happens during an
untimed warmup pass.

Run:  python benchmarks/bench_backends.py [--quick]
"""

import argparse
import math
import time

import numpy as np

from minkdensity import _kernels_numba as knb
from minkdensity import _kernels_numpy as knp
from minkdensity.estimators import sample_batch
from minkdensity.geometry import window
from minkdensity.processes import FixedLength, PoissonSegmentModel


def _workload(replicates):
    model = PoissonSegmentModel(2.0, FixedLength(0.5))
    w = window([0.0, 0.0], [1.0, 1.0])
    return sample_batch(model, w, seed=7, replicates=replicates)


def _time(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    replicates = 2000 if args.quick else 20000
    grid = 16 if args.quick else 24
    resolution = 400 if args.quick else 1200

    batch = _workload(replicates)
    xs = np.repeat(np.linspace(0.05, 0.95, grid), grid)
    ys = np.tile(np.linspace(0.05, 0.95, grid), grid)
    r = 0.05

    knb.warmup()

    cases = {
        f"min_dist_batch (M={replicates})": lambda k: k.min_dist_batch(
            batch.kinds, batch.params, batch.offsets, 0.5, 0.5
        ),
        f"field_hits (M={replicates}, cells={grid * grid})": lambda k: k.field_hits(
            batch.kinds, batch.params, batch.offsets, xs, ys, r
        ),
        f"enlargement_count ({resolution}^2 grid)": lambda k: k.enlargement_count(
            batch.kinds[:200], batch.params[:200], -1.0, 2.0, -1.0, 2.0, resolution, resolution, r
        ),
    }

    print(f"{'kernel':<44} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for name, call in cases.items():
        t_nb = _time(lambda: call(knb))
        t_np = _time(lambda: call(knp))
        print(f"{name:<44} {t_nb * 1e3:>8.1f}ms {t_np * 1e3:>8.1f}ms {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
