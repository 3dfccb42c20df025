"""Compare the numba and numpy kernel backends.

Per-kernel timings call both implementations directly in this process;
the end-to-end timing runs ``oracle.cross_check`` over a seeded corpus in a
fresh interpreter per backend, selected with ``GEOSUB_NO_NUMBA``.

    python benchmarks/bench_kernels.py [--repeat 200] [--corpus 20]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from geosub import _kernels_numpy as npk

try:
    from geosub import _kernels_numba as nbk
except ImportError:
    nbk = None

E2E = """
import itertools, time
from geosub import kernels, oracle
from geosub.sysmodel import random_system
oracle.cross_check(random_system(2, 1, 1, 0))
t0 = time.perf_counter()
for si, (n, m, p) in enumerate(itertools.product(range(1, 7), range(1, 4), range(1, 4))):
    for i in range({per}):
        oracle.cross_check(random_system(n, m, p, 10000 * si + i))
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def cases(rng):
    n, m, p = 6, 3, 3
    A, B = rng.integers(-3, 4, (n, n)) * 1.0, rng.integers(-3, 4, (n, m)) * 1.0
    C, D = rng.integers(-3, 4, (p, n)) * 1.0, rng.integers(-3, 4, (p, m)) * 1.0
    blocks = npk.markov_blocks(A, B, C, D, n + 2)
    P = rng.standard_normal((m, m, 2 * n + 1))
    Q = rng.standard_normal((m, m, 2 * n + 1))
    nodes = np.exp(2j * np.pi * np.arange(2 * n * m + 1) / (2 * n * m + 1))
    E = np.diag(np.r_[np.ones(n), np.zeros(m)])
    U2 = np.block([[A, B], [C, D]])
    real_nodes = np.arange(n + 2, dtype=complex)
    return {
        "markov_blocks": lambda k: k.markov_blocks(A, B, C, D, n + 2),
        "assemble_markov": lambda k: k.assemble_markov(blocks, n + 2),
        "krylov_blocks": lambda k: k.krylov_blocks(A, B, n + 2),
        "faddeev_leverrier": lambda k: k.faddeev_leverrier(A),
        "polymat_mul": lambda k: k.polymat_mul(P, Q),
        "polymat_eval": lambda k: k.polymat_eval(P, nodes),
        "pencil_dets": lambda k: k.pencil_dets(E, U2, real_nodes),
        "polymat_dets": lambda k: k.polymat_dets(P, nodes),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--corpus", type=int, default=20, help="systems per shape end to end")
    args = ap.parse_args()

    backends = [("numpy", npk)] + ([("numba", nbk)] if nbk else [])
    table = cases(np.random.default_rng(0))
    print(f"{'kernel':<20}" + "".join(f"{name:>14}" for name, _ in backends) + "   (us/call)")
    for kname, call in table.items():
        row = []
        for _, mod in backends:
            call(mod)  # compile / warm
            t = timeit.timeit(lambda: call(mod), number=args.repeat) / args.repeat
            row.append(f"{t * 1e6:14.1f}")
        print(f"{kname:<20}" + "".join(row))

    print(f"\nend to end: cross_check on {args.corpus} systems x 54 shapes")
    for flag in ("1", "0"):
        env = dict(os.environ, GEOSUB_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E.format(per=args.corpus)], env=env,
                             capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"  {backend:<8}{float(secs):8.2f} s")


if __name__ == "__main__":
    main()
