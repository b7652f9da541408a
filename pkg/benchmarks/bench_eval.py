"""Benchmark the two batched-evaluation lanes (numba njit vs pure numpy).

Builds one circuit per construction, evaluates it over an exhaustive or
random input batch with each lane, and prints the timings.  The numba lane
includes a warm-up call so JIT compilation is not billed to the
measurement.

Usage: python benchmarks/bench_eval.py [--batch-bits 18] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from monosynth.addition import enumerate_inputs
from monosynth.ac0 import synth_depth3
from monosynth.circuits import size
from monosynth.connectivity import synth_connectivity
from monosynth.kernels import compile_circuit, eval_batch
from monosynth.majority import synth_majority


def bench(name, circuit, inputs, repeats):
    cc = compile_circuit(circuit)
    results = {}
    for lane in ("numba", "numpy"):
        try:
            eval_batch(cc, inputs[:16], backend=lane)  # warm-up / JIT
        except ImportError:
            results[lane] = None
            continue
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = eval_batch(cc, inputs, backend=lane)
            best = min(best, time.perf_counter() - t0)
        results[lane] = (best, out)
    numba_res, numpy_res = results.get("numba"), results.get("numpy")
    if numba_res and numpy_res:
        assert (numba_res[1] == numpy_res[1]).all(), "lanes disagree"
        ratio = numpy_res[0] / numba_res[0]
        print(
            f"{name:<28} wires={size(circuit):>6} batch={inputs.shape[0]:>7} "
            f"numba={numba_res[0] * 1e3:8.2f} ms  numpy={numpy_res[0] * 1e3:8.2f} ms  "
            f"numpy/numba={ratio:5.2f}x"
        )
    else:
        lane, res = ("numpy", numpy_res) if numpy_res else ("numba", numba_res)
        print(f"{name:<28} {lane} only: {res[0] * 1e3:8.2f} ms")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--batch-bits", type=int, default=18, help="log2 of the exhaustive batch size cap")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    cases = [
        ("majority k=2 N=9 d=2", synth_majority(2, 9, 2), 2, 9),
        ("majority k=3 N=4 d=2", synth_majority(3, 4, 2), 3, 4),
        ("ac0 k=3 N=4", synth_depth3(3, 4), 3, 4),
        ("connectivity k=2 N=8 bs=2", synth_connectivity(2, 8, 2), 2, 8),
    ]
    for name, circuit, k, N in cases:
        bits = min(k * N, args.batch_bits)
        inputs = enumerate_inputs(k, N, 0, 1 << bits)
        bench(name, circuit, inputs, args.repeats)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
