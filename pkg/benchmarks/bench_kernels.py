"""Benchmark the compiled cyclic-Jacobi kernels against the pure-python fallback.

Micro benchmarks cover the two hot shapes: repeated 8x8 Hermitian
eigendecompositions (boundary bisection, curve sampling) and large
batches of small Hermitian eigenvalue problems (the product-vector grid
scan). Pass --full to also time a complete product-vector search per
backend, which takes around half a minute in pure python.

Usage: python benchmarks/bench_kernels.py [--full]
"""

import argparse
import time

import numpy as np

from sepfaces import _kernels as kernels


def timed(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_workloads(rng):
    A = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    H = (A + A.conj().T) / 2
    B = rng.normal(size=(20000, 4, 4)) + 1j * rng.normal(size=(20000, 4, 4))
    batch = (B + B.conj().transpose(0, 2, 1)) / 2
    return [
        ("eigh 8x8 x500", lambda: [kernels.hermitian_eigh(H) for _ in range(500)]),
        ("eigvalsh 8x8 x500", lambda: [kernels.hermitian_eigvalsh(H) for _ in range(500)]),
        ("eigvalsh batch 20000x4x4", lambda: kernels.hermitian_eigvalsh_batch(batch)),
    ]


def solve_workload():
    from sepfaces import (
        ConstructionParams,
        PairEquationProblem,
        SearchOptions,
        construct,
        solve_pair_equation,
    )

    result = construct(ConstructionParams(2.0, 1.0))
    problem = PairEquationProblem(
        result.tensor_space,
        result.conjugate_space,
        SearchOptions.for_params(result.params),
    )

    def run():
        found = solve_pair_equation(problem)
        assert len(found.solutions) == 10

    return [("full product-vector search", run)]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--full", action="store_true",
                        help="also run the end-to-end search benchmark")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if len(backends) < 2:
        print("note: compiled extension not built; timing the python backend only")

    rng = np.random.default_rng(args.seed)
    workloads = kernel_workloads(rng)
    if args.full:
        workloads += solve_workload()

    results = {}
    for name in backends:
        kernels.use_backend(name)
        repeat = 3 if args.full else 5
        results[name] = [timed(fn, repeat=repeat if "search" not in label else 1)
                         for label, fn in workloads]
    kernels.use_backend(backends[0])

    width = max(len(label) for label, _ in workloads)
    header = f"{'workload':<{width}}  " + "".join(f"{n:>12}" for n in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for i, (label, _) in enumerate(workloads):
        row = f"{label:<{width}}  "
        row += "".join(f"{results[n][i]:>11.4f}s" for n in backends)
        if len(backends) == 2:
            row += f"{results['python'][i] / results['compiled'][i]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
