"""Compare the numba and numpy backends on cost-plus-gradient evaluations.

    python benchmarks/bench_kernels.py [--repeat 20] [--out bench.csv]

Each case is warmed up once (numba compiles on first call, or loads from its
on-disk cache) before timing. Timings are the median of ``--repeat`` calls.
"""

import argparse
import csv
import statistics
import sys
import time

import numpy as np

from trapsynth import kernels
from trapsynth.ansatz import Mode, build_topology, lower_bound
from trapsynth.engine import Objective, SynthesisTarget
from trapsynth.haar import haar_state, haar_unitary

CASES = [
    (Mode.OPERATOR, 2, 3),
    (Mode.OPERATOR, 3, 8),
    (Mode.OPERATOR, 4, 27),
    (Mode.OPERATOR, 5, 20),
    (Mode.STATE, 5, 5),
    (Mode.STATE, 8, 30),
    (Mode.STATE, 11, 40),
]


def time_case(mode, n, k, backend, repeat):
    topo = build_topology(n, k, mode)
    if mode is Mode.OPERATOR:
        target = SynthesisTarget.unitary(haar_unitary(n, 1))
    else:
        target = SynthesisTarget.state(haar_state(n, 1))
    obj = Objective(topo, target, backend)
    x = np.random.default_rng(0).uniform(0, 2 * np.pi, topo.param_count)
    obj(x)
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        obj(x)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=20)
    p.add_argument("--out")
    args = p.parse_args(argv)

    if "numba" not in kernels.BACKENDS:
        print("numba is not importable; only the numpy backend is available", file=sys.stderr)
        return 1

    rows = []
    print(f"{'mode':9s} {'n':>2s} {'k':>3s} {'bound':>5s} {'numpy_ms':>10s} {'numba_ms':>10s} {'speedup':>8s}")
    for mode, n, k in CASES:
        t_np = time_case(mode, n, k, "numpy", args.repeat)
        t_nb = time_case(mode, n, k, "numba", args.repeat)
        rows.append([mode.value, n, k, t_np, t_nb, t_np / t_nb])
        print(f"{mode.value:9s} {n:2d} {k:3d} {lower_bound(n, mode):5d} "
              f"{1e3 * t_np:10.3f} {1e3 * t_nb:10.3f} {t_np / t_nb:8.1f}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mode", "n_qubits", "ms_count", "numpy_s", "numba_s", "speedup"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
