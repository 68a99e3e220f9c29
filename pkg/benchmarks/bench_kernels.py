"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N] [--skip-end-to-end]

Kernel timings call each backend directly on identical inputs. The
end-to-end timing reduces and verifies every non-degenerate form on a
fixed group in a fresh interpreter, once per backend (the fallback is
forced with HEISEN_PURE_PYTHON=1).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from heisen.finab import FiniteAbelianGroup
from heisen.kernels import available_backends, get_backend

END_TO_END = """
import time
from heisen.finab import FiniteAbelianGroup
from heisen.forms import enumerate_forms
from heisen.kernels import BACKEND
from heisen.reduction import symplectic_reduce, verify_decomposition
k = FiniteAbelianGroup({factors!r})
start = time.perf_counter()
n = 0
for e in enumerate_forms(k, nondegenerate_only=True):
    assert verify_decomposition(e, symplectic_reduce(e))
    n += 1
print(BACKEND, n, time.perf_counter() - start)
"""


def kernel_cases():
    big = FiniteAbelianGroup((4, 4, 2, 2, 2, 2))
    mid = FiniteAbelianGroup((4, 4, 2, 2))
    rng = np.random.default_rng(0)
    q = np.triu(rng.integers(0, 4, size=(big.rank, big.rank)), 1)
    q = (q - q.T) % 4
    alpha = np.eye(big.rank, dtype=np.int64)
    alpha[0, 1] = 1
    c_mid = rng.integers(0, 4, size=(mid.rank, mid.rank))
    return [
        ("bilinear_table |K|=1024", lambda kb: kb.bilinear_table(big.coords, q, 4)),
        ("image_indices |K|=1024", lambda kb: kb.image_indices(big.coords, alpha, big.moduli)),
        ("addition_table |K|=1024", lambda kb: kb.addition_table(big.coords, big.moduli)),
        ("cocycle_violation |K|=64", lambda kb: kb.cocycle_violation(
            kb.bilinear_table(mid.coords, c_mid, 4), kb.addition_table(mid.coords, mid.moduli), 4)),
        ("extension_orders |K|=64", lambda kb: kb.extension_orders(
            kb.bilinear_table(mid.coords, c_mid, 4), kb.addition_table(mid.coords, mid.moduli), 4)),
    ]


def bench_kernels(repeat):
    names = available_backends()
    print(f"{'kernel':<28}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in kernel_cases():
        times = []
        for name in names:
            kb = get_backend(name)
            fn(kb)
            times.append(min(timeit.repeat(lambda: fn(kb), number=1, repeat=repeat)))
        row = f"{label:<28}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:>11.1f}x"
        print(row)


def bench_end_to_end(factors):
    print(f"\nreduce + verify every non-degenerate form on {factors}")
    for name in available_backends():
        env = dict(os.environ)
        env.pop("HEISEN_PURE_PYTHON", None)
        if name == "python":
            env["HEISEN_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", END_TO_END.format(factors=factors)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:<8} {out[1]} forms in {float(out[2]):.2f}s")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-end-to-end", action="store_true")
    parser.add_argument("--group", default="4,4,2,2,2,2", help="comma-separated factors for the end-to-end run")
    args = parser.parse_args()
    bench_kernels(args.repeat)
    if not args.skip_end_to_end:
        bench_end_to_end(tuple(int(x) for x in args.group.split(",")))


if __name__ == "__main__":
    main()
