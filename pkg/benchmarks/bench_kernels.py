"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--runs 300]

Prints per-scan timings and end-to-end FINDMAX time per run for both
backends, and checks that the two produce identical traces.
"""
import argparse
import timeit

import numpy as np

from tiemax import SearchStrategy, _pykernels, derive_params, findmax, kernels, make_rng
from tiemax.bench import Generator, GeneratorSpec, generate_instance


def scan_timings(sizes, number=5000):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        values = rng.integers(0, 32, n).astype(np.int64)
        idx = rng.permutation(n).astype(np.int64)
        bit_sets = [np.frombuffer(rng.bytes((n + 7) // 8), dtype=np.uint8) for _ in range(64)]
        for backend in kernels.available_backends():
            mod = kernels._compiled if backend == "compiled" else _pykernels
            it = iter(bit_sets * (number // 64 + 1))
            t_bits = timeit.timeit(lambda: mod.count_bits(values, next(it), 3, values[3]), number=number)
            t_idx = timeit.timeit(lambda: mod.count_indexed(values, idx, 0, n // 2, values[3]), number=number)
            rows.append((n, backend, 1e6 * t_bits / number, 1e6 * t_idx / number))
    return rows


def run_timings(sizes, runs):
    rows = []
    for n in sizes:
        traces = {}
        for backend in kernels.available_backends():
            previous = kernels.set_backend(backend)
            try:
                start = timeit.default_timer()
                out = []
                for k in range(runs):
                    inst = generate_instance(GeneratorSpec(Generator.BALANCED_MULTISET, n, k))
                    _, trace = findmax(inst, derive_params(n, 1, SearchStrategy.BINARY, k), make_rng(k, 1))
                    out.append(trace.to_dict())
                elapsed = timeit.default_timer() - start
            finally:
                kernels.set_backend(previous)
            traces[backend] = out
            rows.append((n, backend, 1e3 * elapsed / runs))
        if len(traces) == 2:
            assert traces["compiled"] == traces["python"], f"backends disagree at n={n}"
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--runs", type=int, default=300)
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024, 4096, 16384])
    args = parser.parse_args()

    print("scan          n  backend     count_bits(us)  count_indexed(us)")
    for n, backend, tb, ti in scan_timings(args.sizes):
        print(f"scan {n:>10}  {backend:<10} {tb:>14.2f}  {ti:>17.2f}")
    print()
    print("findmax       n  backend     ms/run")
    for n, backend, ms in run_timings(args.sizes, args.runs):
        print(f"findmax {n:>7}  {backend:<10} {ms:>7.3f}")


if __name__ == "__main__":
    main()
