"""Compare the compiled and pure-Python elimination kernels.

Workloads are boundary matrices of order complexes (sparse, unit entries)
plus random sparse integer matrices.  Both kernels must agree exactly.

    python3 benchmarks/bench_elimination.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from verdier import kernels
from verdier.corpus import boundary_simplex_poset, poincare_face_poset
from verdier.simplicial import boundary_matrices, order_complex


def workloads():
    for name, P in [
        ("order complex of ∂Δ4 faces", boundary_simplex_poset(4)),
        ("order complex of ∂Δ5 faces", boundary_simplex_poset(5)),
        ("order complex of Poincaré faces", poincare_face_poset()),
    ]:
        C = boundary_matrices(order_complex(P))
        for n in C.degrees():
            d = C.d(n)
            if d.nnz > 200:
                yield f"{name}, d_{n}", d.nrows, d.ncols, list(d.entries())
    rng = random.Random(7)
    for size in (200, 400):
        entries = {(rng.randrange(size), rng.randrange(size)): rng.choice([-2, -1, 1, 1, 1, 2, 3]) for _ in range(4 * size)}
        yield f"random {size}x{size}, nnz {len(entries)}", size, size, [(i, j, v) for (i, j), v in entries.items()]


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.c_eliminate_units is None:
        print("compiled kernel not built; only the Python kernel is available", file=sys.stderr)
        return 1
    print(f"{'workload':<48} {'rows':>6} {'cols':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, m, n, entries in workloads():
        for modulus in (0, 2):
            py = kernels.py_eliminate_units(m, n, entries, modulus)
            cy = kernels.c_eliminate_units(m, n, entries, modulus)
            if py[0] != cy[0] or sorted(py[1]) != sorted(cy[1]):
                print(f"MISMATCH on {name} (modulus {modulus})", file=sys.stderr)
                return 2
            tp = best_of(lambda: kernels.py_eliminate_units(m, n, entries, modulus), args.repeat)
            tc = best_of(lambda: kernels.c_eliminate_units(m, n, entries, modulus), args.repeat)
            label = f"{name}{' mod 2' if modulus else ''}"
            print(f"{label:<48} {m:>6} {n:>6} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
