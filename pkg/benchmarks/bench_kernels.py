"""Compare the numba and numpy apportionment backends on random batches.

    python benchmarks/bench_kernels.py --rows 20000 --parties 5 --seats 100

Each method is timed on both backends after one warm-up call (so numba
compilation is excluded), and the outputs are checked for equality.
"""

import argparse
import time
import warnings

import numpy as np

warnings.filterwarnings("ignore", message=".*TBB threading layer.*")

from fregevote import kernels  # noqa: E402


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=20_000)
    ap.add_argument("--parties", type=int, default=5)
    ap.add_argument("--seats", type=int, default=100)
    ap.add_argument("--max-votes", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    votes = rng.integers(1, args.max_votes, endpoint=True, size=(args.rows, args.parties))
    backends = ["numba", "numpy"] if kernels.HAVE_NUMBA else ["numpy"]

    print(f"rows={args.rows} parties={args.parties} seats={args.seats}")
    print(f"{'method':<18}" + "".join(f"{b + ' (s)':>14}" for b in backends) + f"{'speedup':>10}")
    for method in kernels.METHOD_ORDER:
        times, outs = [], []
        for b in backends:
            kernels.allocate_batch(method, votes[:10], args.seats, b)
            t, out = timed(lambda: kernels.allocate_batch(method, votes, args.seats, b), args.repeat)
            times.append(t)
            outs.append(out)
        if len(outs) == 2 and not np.array_equal(outs[0], outs[1]):
            raise SystemExit(f"backends disagree on {method}")
        speed = f"{times[1] / times[0]:9.1f}x" if len(times) == 2 else ""
        print(f"{method:<18}" + "".join(f"{t:14.4f}" for t in times) + f"{speed:>10}")


if __name__ == "__main__":
    main()
