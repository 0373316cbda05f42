"""Compare the numba and numpy kernel paths.

    python benchmarks/bench_kernels.py --qubits 14 18 22 --repeat 5

Part one times each raw kernel on a random state; part two runs the four
circuits end to end with each kernel set swapped in.
"""

import argparse
import contextlib
import time

import numpy as np

from qmatops import algorithms, kernels


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


@contextlib.contextmanager
def use(kset):
    saved = {name: getattr(kernels, name) for name in kset}
    for name, fn in kset.items():
        setattr(kernels, name, fn)
    try:
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def bench_raw(qubits, repeat):
    print(f"{'kernel':<10}{'qubits':>8}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    rng = np.random.default_rng(0)
    for nq in qubits:
        base = rng.normal(size=1 << nq) + 1j * rng.normal(size=1 << nq)
        top = 1 << (nq - 1)
        cases = {
            "mcx": (0b1011, 0b1001, top),
            "cswap": (1, 1, 2, top),
            "hadamard": (top,),
            "mass": (0b110, 0b010),
        }
        for name, args in cases.items():
            timing = []
            for kset in (kernels.NUMPY_KERNELS, kernels.NUMBA_KERNELS):
                amps = base.copy()
                kset[name](amps, *args)  # compile / warm cache
                timing.append(_best(lambda: kset[name](amps, *args), repeat))
            print(f"{name:<10}{nq:>8}{timing[0] * 1e3:>12.3f}{timing[1] * 1e3:>12.3f}{timing[0] / timing[1]:>10.1f}")


def bench_pipelines(repeat):
    rng = np.random.default_rng(1)
    rc = lambda r, c: rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))
    jobs = {
        "hadamard 8x8 (20q)": lambda: algorithms.hadamard_product(rc(8, 8), rc(8, 8)),
        "kron 8x8 . 8x8 (12q)": lambda: algorithms.kronecker_product(rc(8, 8), rc(8, 8)),
        "col-add 8x16 (16q)": lambda: algorithms.column_add(rc(8, 16), 3, 9),
        "col-swap 8x16 (20q)": lambda: algorithms.column_swap(rc(8, 16), 3, 9),
    }
    print(f"\n{'pipeline':<24}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, job in jobs.items():
        timing = []
        for kset in (kernels.NUMPY_KERNELS, kernels.NUMBA_KERNELS):
            with use(kset):
                job()
                timing.append(_best(job, repeat))
        print(f"{name:<24}{timing[0] * 1e3:>12.1f}{timing[1] * 1e3:>12.1f}{timing[0] / timing[1]:>10.1f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--qubits", type=int, nargs="+", default=[12, 16, 20])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    bench_raw(args.qubits, args.repeat)
    bench_pipelines(args.repeat)


if __name__ == "__main__":
    main()
