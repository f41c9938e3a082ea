"""Benchmark the elimination kernels: compiled extension vs pure Python.

Workloads mirror the package's hot path: ranks of sparse differential
matrices over F_2 (a few entries per row) and over F_3.  Run with

    python benchmarks/bench_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import random
import time

from gerbekit._kernels import _fpkern_py as py_backend

try:
    from gerbekit._kernels import _fpkern_c as c_backend
except ImportError:
    c_backend = None


def random_sparse_f2(rng: random.Random, nrows: int, ncols: int, per_row: int):
    rows = []
    for _ in range(nrows):
        r = 0
        for _ in range(per_row):
            r |= 1 << rng.randrange(ncols)
        rows.append(r)
    return rows


def random_fp(rng: random.Random, nrows: int, ncols: int, p: int):
    return [[rng.randrange(p) for _ in range(ncols)] for _ in range(nrows)]


def run_case(name, fn_args, reps: int = 1):
    results = {}
    backends = [("py", py_backend)] + ([("c", c_backend)] if c_backend else [])
    ranks = set()
    for label, backend in backends:
        fn, args = fn_args(backend)
        best = float("inf")
        for _ in range(reps):
            t0 = time.perf_counter()
            out = fn(*args)
            best = min(best, time.perf_counter() - t0)
        ranks.add(out[0])
        results[label] = best
    assert len(ranks) == 1, f"backends disagree on {name}"
    line = f"{name:38s} rank={ranks.pop():5d}"
    for label, dt in results.items():
        line += f"  {label}={dt * 1000:9.1f}ms"
    if "c" in results and results["c"] > 0:
        line += f"  speedup={results['py'] / results['c']:6.1f}x"
    print(line)


def nerve_differential_case():
    """delta_2 of the twisted-cocycle apex: the real hot workload."""
    from gerbekit.cocycles import Cover, NonAbCocycle, build_cocycle_two_groupoid
    from gerbekit.cohomology import cochain_complex
    from gerbekit.groups import symmetric_group
    from gerbekit.nerve import nerve

    s3 = symmetric_group(3)
    cover = Cover(["p"], [["p"], ["p"]])
    h = {(0, 0): s3.unit, (0, 1): s3.index_of((1, 0, 2)), (1, 0): s3.unit, (1, 1): s3.unit}
    lam = {
        (i, j, x): tuple(s3.conj(y, h[(i, j)]) for y in s3.elements())
        for (i, j, x) in cover.pairs()
    }
    gval = {
        (i, j, k, x): s3.mul(s3.inv[h[(i, k)]], s3.mul(h[(i, j)], h[(j, k)]))
        for (i, j, k, x) in cover.triples()
    }
    apex = build_cocycle_two_groupoid(NonAbCocycle(cover, s3, lam, gval))
    ds = nerve(apex, 3)
    cx = cochain_complex(ds, 2)
    m = cx.delta(2)
    rows = list(set(m.rows))
    print(f"apex nerve sizes: {[ds.size(q) for q in range(4)]}; "
          f"delta_2 is {m.nrows}x{m.ncols} ({len(rows)} distinct rows)")
    return rows, m.ncols


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller sizes")
    args = ap.parse_args()
    if c_backend is None:
        print("compiled backend not available; timing pure Python only")
    rng = random.Random(20240817)

    sizes = [(2000, 400, 5), (8000, 1200, 5)] if args.quick else [
        (2000, 400, 5),
        (8000, 1200, 5),
        (30000, 1728, 5),
    ]
    for nrows, ncols, per_row in sizes:
        rows = random_sparse_f2(rng, nrows, ncols, per_row)
        run_case(
            f"f2 sparse {nrows}x{ncols}",
            lambda b, rows=rows, ncols=ncols: (b.echelon_f2, (rows, ncols)),
        )

    fp_sizes = [(300, 200)] if args.quick else [(300, 200), (700, 400)]
    for nrows, ncols in fp_sizes:
        rows = random_fp(rng, nrows, ncols, 3)
        run_case(
            f"f3 dense {nrows}x{ncols}",
            lambda b, rows=rows, ncols=ncols: (b.echelon_fp, (rows, ncols, 3)),
        )

    rows, ncols = nerve_differential_case()
    run_case(
        f"nerve delta_2 ({len(rows)}x{ncols})",
        lambda b, rows=rows, ncols=ncols: (b.echelon_f2, (rows, ncols)),
    )


if __name__ == "__main__":
    main()
