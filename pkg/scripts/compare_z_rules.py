"""Compare the two divisibility rules for z on the exhaustive index-sum grid.

Prints, per (i, j), the instance count and the first offending instance
under each rule, then a brute-force cross-check of one grid point.
"""

import argparse

from nottingham.index_sums import SumParams, check_sum_identity, default_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--s", type=int, default=1)
    ap.add_argument("--i-max", type=int, default=15)
    ap.add_argument("--cross-check", action="store_true", help="also run the brute-force enumerator at the first grid point")
    args = ap.parse_args()
    js = range(args.q**2, args.q**2 + 4)
    print("rule\ti\tj\tinstances\tvalue_failures\tshape_failures\tfirst")
    for rule in ("literal", "strict"):
        for prm in default_grid(args.p, args.q, args.s, js, args.i_max, rule):
            rep = check_sum_identity(prm)
            first = (rep.value_failures or rep.shape_failures or [""])[0]
            print(f"{rule}\t{prm.i}\t{prm.j}\t{rep.instances}\t{len(rep.value_failures)}\t{len(rep.shape_failures)}\t{first}")
    if args.cross_check:
        j = args.q**2
        i = j + 1 if (j + 1) % args.p else j + 2
        for rule in ("literal", "strict"):
            rep = check_sum_identity(SumParams(args.p, args.q, args.s, i, j, rule), cross_check=True)
            print(f"cross-check {rule} i={i} j={j}: enumerators agree = {rep.cross_checked}")


if __name__ == "__main__":
    main()
