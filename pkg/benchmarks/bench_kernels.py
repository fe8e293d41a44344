"""Time the numba and numpy kernel backends on the built-in instances.

    python benchmarks/bench_kernels.py [--repeat 3] [--instances s3_a3 d4_center]

Each kernel is run once untimed (numba compiles or loads its cache on first
call), then ``--repeat`` times; the best time is reported. Results from the
two backends are compared as a sanity check.
"""

import argparse
import json
import time

import numpy as np

from doublecat import fixtures, kernels
from doublecat.double import SquareSpace, sample_grids, validate_double_category


def best_of(fn, repeat):
    out = fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def kernel_calls(dm, space, K):
    pk = dm.packed
    Q = space.Q
    grids = sample_grids(space, 100_000, seed=0)
    return {
        "enumerate_squares": lambda: K.enumerate_squares(
            pk.P.comp, pk.M.src, pk.H.src, pk.H.tgt, pk.V.src, pk.V.tgt, pk.mu, pk.phi, pk.psi),
        "axiom_two": lambda: K.axiom_two(
            pk.P.comp, pk.M.src, pk.M.comp, pk.H.src, pk.H.tgt, pk.V.src, pk.V.tgt,
            pk.mu, pk.phi, pk.psi, pk.actH, pk.actV, 20),
        "assoc_triples_h": lambda: K.assoc_triples(
            Q, True, pk.M.comp, pk.H.comp, pk.V.comp, pk.actH, pk.actV, space.r_order, space.r_start, 20),
        "grid_eval_100k": lambda: K.grid_eval(Q, grids, pk.M.comp, pk.H.comp, pk.V.comp, pk.actH, pk.actV),
        "enumerate_grids_1M": lambda: K.enumerate_grids(
            Q, space.r_order, space.r_start, space.b_order, space.b_start, space.key4, space.ord4,
            space.nH, 1_000_000),
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if a is None or b is None:
        return a is b
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--instances", nargs="+", default=["c4", "s3_a3", "d4_center"],
                    choices=sorted(fixtures.EXAMPLES))
    ap.add_argument("--json", action="store_true", help="print results as JSON")
    ap.add_argument("--end-to-end", action="store_true",
                    help="also time validate_double_category per backend (one run each)")
    args = ap.parse_args()

    rows = []
    for name in args.instances:
        dm = fixtures.EXAMPLES[name]()
        with kernels.use_backend("numba"):
            space = SquareSpace(dm)
        results = {}
        for backend in ("numba", "numpy"):
            K = kernels.get(backend)
            for kernel, fn in kernel_calls(dm, space, K).items():
                results[backend, kernel] = best_of(fn, args.repeat)
        for kernel in kernel_calls(dm, space, kernels.get("numpy")):
            (t_nb, out_nb), (t_np, out_np) = results["numba", kernel], results["numpy", kernel]
            if kernel == "enumerate_squares":
                # row order is backend-specific; SquareSpace sorts afterwards
                out_nb, out_np = np.unique(out_nb, axis=0), np.unique(out_np, axis=0)
            rows.append({"instance": name, "kernel": kernel, "numba_s": t_nb, "numpy_s": t_np,
                         "speedup": t_np / t_nb if t_nb > 0 else float("inf"),
                         "agree": bool(same(out_nb, out_np))})

    whole = []
    if args.end_to_end:
        for name in args.instances:
            for backend in ("numba", "numpy"):
                dm = fixtures.EXAMPLES[name]()  # fresh instance, nothing cached
                with kernels.use_backend(backend):
                    t = time.perf_counter()
                    rep = validate_double_category(dm)
                    whole.append({"instance": name, "backend": backend, "seconds": time.perf_counter() - t,
                                  "status": rep.status})

    if args.json:
        print(json.dumps({"kernels": rows, "end_to_end": whole}, indent=2))
        return
    print(f"{'instance':12s} {'kernel':20s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}  agree")
    for r in rows:
        print(f"{r['instance']:12s} {r['kernel']:20s} {r['numba_s'] * 1e3:8.2f}ms {r['numpy_s'] * 1e3:8.2f}ms "
              f"{r['speedup']:7.1f}x  {'yes' if r['agree'] else 'NO'}")
    if whole:
        print()
        print(f"{'instance':12s} {'backend':8s} {'validate':>10s}  status")
        for r in whole:
            print(f"{r['instance']:12s} {r['backend']:8s} {r['seconds']:9.2f}s  {r['status']}")


if __name__ == "__main__":
    main()
