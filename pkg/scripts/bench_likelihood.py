"""Wall time of one restricted-likelihood evaluation per solver route and series length."""

import argparse
import time

import numpy as np

from fdcv.reml import restricted_loglik


def timed(x, pacf, solver, repeats):
    restricted_loglik(x, pacf, 1.0, solver=solver)
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        restricted_loglik(x, pacf, 1.0, solver=solver)
        times.append(time.perf_counter() - t)
    return 1e3 * float(np.median(times))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 4096, 8192, 16384])
    ap.add_argument("--solvers", nargs="+", default=["innovations", "levinson", "pcg"])
    ap.add_argument("--repeats", type=int, default=9)
    args = ap.parse_args()

    pacf = np.array([0.6, -0.3, 0.2])
    print(f"{'n':>7}" + "".join(f"{s:>14}" for s in args.solvers) + "   (ms, median)")
    for n in args.sizes:
        x = np.random.default_rng(n).standard_normal(n)
        # Levinson is O(n^2); skip it where it would dominate the run
        cells = [timed(x, pacf, s, args.repeats) if not (s == "levinson" and n > 20_000) else float("nan")
                 for s in args.solvers]
        print(f"{n:>7}" + "".join(f"{c:14.2f}" for c in cells))


if __name__ == "__main__":
    main()
