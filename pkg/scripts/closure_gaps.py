"""Scan seeded generators of S_1 and report which ones leave gaps in the closure's tail window."""

import argparse

import numpy as np

from nottingham.construct import closure_explore
from nottingham.notation import print_series
from nottingham.subgroups import random_s_element


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--prec", type=int, default=40)
    ap.add_argument("--level", type=int, default=1, help="S-level of the random generators")
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--window-start", type=int, default=None, help="first J-depth of the window (default 2N/3)")
    args = ap.parse_args()
    window = None if args.window_start is None else (args.window_start, args.prec - 1)
    print("seed\tcovered\tmissing\tdepth_basis\tgenerator")
    for seed in range(args.seeds):
        gen = random_s_element(args.p, args.level, args.prec, np.random.default_rng(seed))
        rep = closure_explore(gen, 1, seed=seed, window=window)
        print(f"{seed}\t{rep.covered}\t{rep.missing}\t{rep.elements}\t{print_series(gen)}")


if __name__ == "__main__":
    main()
