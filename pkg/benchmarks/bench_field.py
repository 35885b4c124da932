"""Timing comparison of the compiled and pure-Python field kernels.

Runs the four kernel primitives (multiply, rank, inverse, solve) on random
matrices over F_257 at a few sizes and reports per-call times for whichever
backends are importable, plus one end-to-end protocol round per backend.

    python3 benchmarks/bench_field.py [--sizes 20,40,80] [--repeat 5]
"""

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from qspir import _purekernel

try:
    from qspir import _fastkernel
except ImportError:
    _fastkernel = None


def rand_matrix(rng, n, q):
    return [int(x) for x in rng.integers(0, q, n * n)]


def time_call(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.median(samples)


def bench_backend(impl, sizes, repeat, q=257):
    rng = np.random.default_rng(42)
    out = {}
    for n in sizes:
        a = rand_matrix(rng, n, q)
        b = rand_matrix(rng, n, q)
        # make `a` invertible so k_inv/k_solve exercise the full path
        while impl.k_rank(a, n, n, q) != n:
            a = rand_matrix(rng, n, q)
        vec = a[:n]
        out[n] = {
            "mul": time_call(lambda: impl.k_mul(a, n, n, b, n, n, q), repeat),
            "rank": time_call(lambda: impl.k_rank(a, n, n, q), repeat),
            "inv": time_call(lambda: impl.k_inv(a, n, q), repeat),
            "solve": time_call(lambda: impl.k_solve(a, n, vec, q), repeat),
        }
    return out


def bench_round(force_pure: bool, trials: int = 20) -> float:
    """One subprocess per backend so the import-time kernel choice applies."""
    code = (
        "import time\n"
        "from qspir.plan import Model, SchemeConfig\n"
        "from qspir.protocol import run_round\n"
        "cfg = SchemeConfig(model=Model.parse('xbeutspir-static'), N=10, K=2,"
        " X=2, T=2, E=0, U=1, B=1, q=257)\n"
        "run_round(cfg, seed=1, trial=0)\n"
        "t0 = time.perf_counter()\n"
        "for t in range(%d):\n"
        "    run_round(cfg, seed=1, trial=t)\n"
        "print((time.perf_counter() - t0) / %d)\n" % (trials, trials)
    )
    env = {"QSPIR_FORCE_PURE": "1"} if force_pure else {}
    proc = subprocess.run([sys.executable, "-c", code],
                          capture_output=True, text=True,
                          env={**os.environ, **env})
    if proc.returncode != 0:
        raise RuntimeError(proc.stderr)
    return float(proc.stdout.strip())


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="20,40,80")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = [("pure", _purekernel)]
    if _fastkernel is not None:
        backends.insert(0, ("fast", _fastkernel))
    else:
        print("compiled kernel not built; timing the pure backend only\n")

    results = {name: bench_backend(impl, sizes, args.repeat)
               for name, impl in backends}

    ops = ("mul", "rank", "inv", "solve")
    print(f"{'op':6s} {'n':>4s} " + " ".join(f"{name+' (ms)':>12s}"
                                             for name, _ in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for op in ops:
        for n in sizes:
            cells = [results[name][n][op][0] * 1e3 for name, _ in backends]
            line = f"{op:6s} {n:4d} " + " ".join(f"{c:12.3f}" for c in cells)
            if len(backends) == 2 and cells[0] > 0:
                line += f"   {cells[1] / cells[0]:7.1f}x"
            print(line)

    print("\nfull protocol round (10 servers, 1 Byzantine, q=257):")
    fast_round = None if _fastkernel is None else bench_round(False)
    pure_round = bench_round(True)
    if fast_round is not None:
        print(f"  compiled {fast_round * 1e3:8.2f} ms/round")
    print(f"  pure     {pure_round * 1e3:8.2f} ms/round")
    if fast_round:
        print(f"  speedup  {pure_round / fast_round:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
