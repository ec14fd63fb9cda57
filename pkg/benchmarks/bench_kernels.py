"""Compare the compiled and numpy Monte Carlo kernels.

    python benchmarks/bench_kernels.py [--samples 1000000] [--repeats 5]
"""
import argparse
import importlib
import time

import numpy as np

from qfid import _pykernels
from qfid.channels import random_cptp, random_unitary, to_affine
from qfid.states import make_rng


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = make_rng(0)
    u, s = random_unitary(rng), random_cptp(rng, 3)
    a = to_affine(s)
    rot, m, t = u.bloch_rotation, a.m, a.t
    uniforms = rng.random((args.samples, 2))

    backends = [_pykernels]
    try:
        backends.append(importlib.import_module("qfid._ckernels"))
    except ImportError:
        print("compiled kernels not built; numpy only")

    rows = []
    for b in backends:
        tv, values = best_of(lambda: b.mc_values(rot, m, t, uniforms), args.repeats)
        ts, total = best_of(lambda: b.pairwise_sum(values), args.repeats)
        rows.append((b.BACKEND, tv, ts, total / args.samples))
    print(f"samples={args.samples}  best of {args.repeats}")
    print(f"{'backend':<8}  {'mc_values [ms]':>14}  {'pairwise_sum [ms]':>17}  mean")
    for name, tv, ts, mean in rows:
        print(f"{name:<8}  {tv * 1e3:>14.2f}  {ts * 1e3:>17.2f}  {mean!r}")
    if len(rows) == 2:
        (_, pv, ps, pm), (_, cv, cs, cm) = rows
        print(f"speedup: mc_values x{pv / cv:.1f}, pairwise_sum x{ps / cs:.1f}; "
              f"means identical: {pm == cm}")


if __name__ == "__main__":
    main()
