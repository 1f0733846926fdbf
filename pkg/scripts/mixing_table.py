"""Worst-case Pr[X1 + X2 in T3] over ell-subsets of a prime field, next to the extremal formula."""
import argparse

from listrec.gf import GF
from listrec.mixing import exhaustive_sum_hit_max, lev_extremal_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("primes", type=int, nargs="*", default=[3, 5, 7])
    args = ap.parse_args()
    print(f"{'q':>3} {'ell':>4} {'worst':>9} {'formula':>9}  match")
    for q in args.primes:
        F = GF(q)
        for ell in range(1, q):
            best, _ = exhaustive_sum_hit_max(F, ell)
            bound = lev_extremal_bound(q, ell)
            print(f"{q:3d} {ell:4d} {str(best):>9} {str(bound):>9}  {best == bound}")


if __name__ == "__main__":
    main()
