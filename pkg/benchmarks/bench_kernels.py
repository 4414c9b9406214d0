"""Time the compiled modulus kernel against the numpy fallback.

Both backends compute ``sup_x |Δ_h^M f(x)|`` for every shift ``h <= h_max``
on the same random signal; the script also confirms they agree bit for bit.

    python3 benchmarks/bench_kernels.py --n 65536 --h-max 2048 --orders 1 2 3
"""

import argparse
import json
import time

import numpy as np

from uniholder import kernels
from uniholder.smoothness import difference_weights


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def run(n, h_max, orders, repeat, threads, seed=0):
    f = np.random.default_rng(seed).standard_normal(n)
    rows = []
    for M in orders:
        coef = difference_weights(M)
        for periodic in (True, False):
            row = {"M": M, "extension": "periodic" if periodic else "clamp", "n": n, "h_max": h_max}
            t_py, ref = best_time(
                lambda: kernels.sup_abs_differences(f, coef, h_max, periodic, backend="python"), repeat)
            row["python_s"] = t_py
            if kernels.BACKEND == "cython":
                t_c, got = best_time(
                    lambda: kernels.sup_abs_differences(f, coef, h_max, periodic, backend="cython",
                                                        num_threads=threads), repeat)
                row["cython_s"] = t_c
                row["speedup"] = t_py / t_c
                row["identical"] = bool(np.array_equal(ref, got))
            rows.append(row)
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=2**16)
    p.add_argument("--h-max", type=int, default=2048)
    p.add_argument("--orders", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    args = p.parse_args(argv)

    rows = run(args.n, args.h_max, args.orders, args.repeat, args.threads)
    if args.json:
        print(json.dumps({"backend": kernels.BACKEND, "rows": rows}, indent=2))
        return 0
    print(f"compiled backend available: {kernels.BACKEND == 'cython'}")
    print(f"{'M':>2} {'extension':>9} {'python s':>9} {'cython s':>9} {'speedup':>8} {'identical':>9}")
    for r in rows:
        print(f"{r['M']:>2} {r['extension']:>9} {r['python_s']:>9.3f} "
              f"{r.get('cython_s', float('nan')):>9.3f} {r.get('speedup', float('nan')):>8.2f} "
              f"{str(r.get('identical', '-')):>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
