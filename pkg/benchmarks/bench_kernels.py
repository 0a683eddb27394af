"""Compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--points 20000]

Each kernel runs on identical inputs under both backends; outputs must match
exactly (integer kernels) or index-for-index (ML decoding).
"""

import argparse
import time

import numpy as np

from natorder import kernels
from natorder.catalog.setups import load_catalog
from natorder.stlattice.integer import IntegerData
from natorder.cda.algebra import build_algebra
from natorder.mimosim.rng import CounterStream


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_norms(setup, points, repeat, rng):
    data = IntegerData.from_algebra(build_algebra(setup), setup.F)
    pts = rng.integers(-2, 3, size=(points, data.k))
    rows = []
    for be in ("compiled", "python"):
        t, out = best_of(lambda: data.norms(pts, be), repeat)
        rows.append((be, t, out))
    return rows


def bench_decode(trials, words, repeat):
    s = CounterStream(7)
    X = s.complex_normal((words, 2, 2), 1.0)
    H = s.complex_normal((trials, 2, 2), 0.7)
    Y = H @ X[s.integers(trials, words)] + s.complex_normal((trials, 2, 2), 0.3)
    rows = []
    for be in ("compiled", "python"):
        t, out = best_of(lambda: kernels.ml_decode(Y, H, X, be), repeat)
        rows.append((be, t, out))
    return rows


def report(name, rows, n):
    (c_name, c_t, c_out), (p_name, p_t, p_out) = rows
    same = list(c_out) == list(p_out)
    print(
        f"{name:28s} compiled {c_t * 1e3:9.1f} ms   python {p_t * 1e3:9.1f} ms   "
        f"speedup {p_t / c_t:6.1f}x   {n / c_t:12.0f}/s   outputs {'identical' if same else 'DIFFER'}"
    )
    return same


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--trials", type=int, default=5000)
    args = ap.parse_args()
    if kernels.BACKEND != "compiled":
        raise SystemExit("compiled extension not available; run `pip install -e . --no-build-isolation` first")
    cat = load_catalog()
    rng = np.random.default_rng(0)
    ok = True
    for sid in ("Q-2", "golden", "Qi-2-2", "Qi-3-2"):
        ok &= report(f"reduced norm + Nm  {sid}", bench_norms(cat.get(sid), args.points, args.repeat, rng), args.points)
    ok &= report("ML decode 2x2, 256 words", bench_decode(args.trials, 256, args.repeat), args.trials)
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
