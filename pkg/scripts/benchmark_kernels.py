"""Time composition, inversion, p-th powers and both commutator methods at several precisions."""

import argparse
import time

import numpy as np

from nottingham.commutator import commutator_direct, commutator_recurrence
from nottingham.series import GroupSeries, compose, group_pow, invert


def rand(p, n, rng):
    c = rng.integers(0, p, n + 1)
    c[0], c[1] = 0, 1
    return GroupSeries(p, n, c)


def timed(fn, reps):
    start = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - start) / reps * 1e3


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5, 7])
    ap.add_argument("--precisions", type=int, nargs="+", default=[32, 128, 512])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print("p\tN\tcompose_ms\tinvert_ms\tpow_p_ms\tdirect_ms\trecurrence_ms")
    for p in args.primes:
        for n in args.precisions:
            u, v = rand(p, n, rng), rand(p, n, rng)
            row = [
                timed(lambda: compose(u, v), args.reps),
                timed(lambda: invert(u), args.reps),
                timed(lambda: group_pow(u, p), args.reps),
                timed(lambda: commutator_direct(v, u), args.reps),
                timed(lambda: commutator_recurrence(v, u), args.reps),
            ]
            print(f"{p}\t{n}\t" + "\t".join(f"{x:.2f}" for x in row))


if __name__ == "__main__":
    main()
