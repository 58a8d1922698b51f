"""Time the compiled kernel against the pure-Python fallback.

Runs functor enumeration and the associativity scan on a few fixed
category pairs, once per backend, and prints the median of ``--repeat``
runs. Both backends must return the same functors; a mismatch aborts.

    python benchmarks/bench_kernel.py --repeat 5
"""
import argparse
import json
import statistics
import sys
import time

from catsem import _kernel_py, fincat
from catsem.fincat import check_category, enumerate_functors
from catsem.generators import chain, free_category_on_dag, indiscrete_category, powerset_lattice
from catsem.instances import finset2


def cases():
    square = free_category_on_dag({"f": ("a", "b"), "g": ("a", "c"), "h": ("b", "d"), "k": ("c", "d")})
    return [
        ("chain4->chain4", chain(4), chain(4)),
        ("bool2->bool2", powerset_lattice(2), powerset_lattice(2)),
        ("dag_square->bool2", square, powerset_lattice(2)),
        ("finset2->finset2", finset2(), finset2()),
        ("chain3->indiscrete3", chain(3), indiscrete_category(["a", "b", "c"])),
        ("bool3->chain3", powerset_lattice(3), chain(3)),
    ]


def _time(fn, repeat):
    out, samples = None, []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - t)
    return out, statistics.median(samples)


def run(repeat, backends):
    rows = []
    for name, C, D in cases():
        row = {"case": name}
        keys = {}
        for label, module in backends:
            fincat.kernel = module
            fs, dt = _time(lambda: enumerate_functors(C, D, budget=10**7), repeat)
            _, dt_assoc = _time(lambda: check_category(D), repeat)
            keys[label] = [F._key for F in fs]
            row[f"{label}_functors_s"] = dt
            row[f"{label}_assoc_s"] = dt_assoc
            row["functors"] = len(fs)
        if len({tuple(k) for k in keys.values()}) > 1:
            raise SystemExit(f"backends disagree on {name}")
        if "cython" in keys:
            row["speedup"] = row["python_functors_s"] / max(row["cython_functors_s"], 1e-9)
        rows.append(row)
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true", help="print rows as JSON")
    args = parser.parse_args(argv)

    backends = [("python", _kernel_py)]
    try:
        from catsem import _kernel
        backends.insert(0, ("cython", _kernel))
    except ImportError:
        print("compiled kernel not built; timing the fallback only", file=sys.stderr)
    original = fincat.kernel
    try:
        rows = run(args.repeat, backends)
    finally:
        fincat.kernel = original

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'case':24s} {'functors':>8s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    for r in rows:
        print(f"{r['case']:24s} {r['functors']:8d} {r.get('cython_functors_s', float('nan')):10.4f} "
              f"{r['python_functors_s']:10.4f} {r.get('speedup', float('nan')):8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
