"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""

import argparse
import time

import numpy as np

from ratedist import _backend
from ratedist.blahut import ba_sweep, log_slopes
from ratedist.codes import mc_random_coding, optimal_code_search
from ratedist.info import hamming_matrix


def ba_workload(quick):
    slopes = log_slopes(0.2, 20.0, 20 if quick else 60)
    out = []
    for p in (0.11, 0.2, 0.3, 0.5):
        out.append([pt.rate for pt in ba_sweep([1 - p, p], hamming_matrix(), slopes)])
    return np.array(out)


def search_workload(quick):
    cb, ev = optimal_code_search(0.3, 5, 4 if quick else 5)
    return cb.codewords, ev.avg_distortion


def mc_workload(quick):
    return mc_random_coding(0.3, 0.25, 20, 32, 0.1, 20_000 if quick else 100_000, 42)


WORKLOADS = {
    "ba_sweep (4 x p, log slopes)": ba_workload,
    "code_search (n=5)": search_workload,
    "mc_random_coding (n=20, M=32)": mc_workload,
}


def best_time(fn, repeat, quick):
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(quick)
        times.append(time.perf_counter() - t0)
    return min(times), result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args(argv)

    backends = _backend.available()
    if "compiled" not in backends:
        print("compiled kernels are not built; only the Python fallback is available")
    previous = _backend.current()
    print(f"{'workload':34s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup  agree")
    try:
        for name, fn in WORKLOADS.items():
            timings, results = {}, {}
            for b in backends:
                _backend.use_backend(b)
                timings[b], results[b] = best_time(fn, args.repeat, args.quick)
            cols = "".join(f"{timings[b]:11.4f}s" for b in backends)
            if len(backends) == 2:
                speedup = timings["python"] / timings["compiled"]
                a, c = results["compiled"], results["python"]
                agree = np.allclose(a, c, atol=1e-12, rtol=0) if isinstance(a, np.ndarray) else a == c
                print(f"{name:34s}{cols}{speedup:9.1f}x  {agree}")
            else:
                print(f"{name:34s}{cols}")
    finally:
        _backend.use_backend(previous)


if __name__ == "__main__":
    main()
