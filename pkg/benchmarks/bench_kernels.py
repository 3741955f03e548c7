"""Compare the compiled kernels with the NumPy fallback.

    python benchmarks/bench_kernels.py [--steps 16384] [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from spinphase import _kernels_py
from spinphase.dynamics import propagate_expm
from spinphase.linalg import eig_hermitian_2x2
from spinphase.model import KET01, ModelParams
from spinphase.phases import bloch_vectors, partial_trace

try:
    from spinphase import _kernels
except ImportError:
    _kernels = None

ARGS = (1.0, math.pi / 3, 0.5, 0.2)


def branch_inputs(n):
    p = ModelParams(*ARGS)
    rhos = partial_trace(propagate_expm(p, KET01, np.linspace(0, 1.5, n)), "a")
    w, v = eig_hermitian_2x2(rhos)
    frozen = np.linalg.norm(bloch_vectors(rhos), axis=1) < 1e-6
    return v, w, frozen


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2**14)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    psi0 = KET01.copy()
    v, w, frozen = branch_inputs(args.steps + 1)
    cases = {
        "rk4_lab": lambda mod: mod.rk4_lab(*ARGS, psi0, 10.0, args.steps),
        "track_branches": lambda mod: mod.track_branches(v, w, frozen),
    }
    print(f"{'kernel':<16} {'numpy [ms]':>12} {'cython [ms]':>12} {'speedup':>9}  max |diff|")
    for name, run in cases.items():
        t_py = best(lambda: run(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:<16} {1e3 * t_py:12.2f} {'n/a':>12} {'n/a':>9}")
            continue
        t_c = best(lambda: run(_kernels), args.repeat)
        a, b = run(_kernels_py), run(_kernels)
        if isinstance(a, tuple):
            a, b = a[0], b[0]
        diff = np.abs(a - b).max()
        print(f"{name:<16} {1e3 * t_py:12.2f} {1e3 * t_c:12.2f} {t_py / t_c:8.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
