#!/usr/bin/env python3
"""Leaf dimension and corank of S + S^T along the geodesic families."""
import argparse

import numpy as np

from stokesleaf import leaves as lv
from stokesleaf.surfaces import SurfaceFamily, random_point, stokes_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'family':>8} {'generic':>7} {'predicted':>9} {'observed':>10} {'rank':>6}")
    for kind, lo in (("an", 3), ("cfp", 4)):
        for n in range(lo, args.max_n + 1):
            fam = SurfaceFamily(kind, n)
            dims, ranks = set(), set()
            for _ in range(args.samples):
                p = random_point(fam, rng)
                S = stokes_matrix(fam, p, backend="mpmath").to_mpmath()
                dims.add(lv.bondal_dimension(lv.jordan_profile(lv.monodromy_product(S)), n)[1])
                ranks.add(lv.symmetric_rank(S))
            print(f"{str(fam):>8} {lv.generic_leaf_dimension(n):>7} {lv.predicted_leaf_dimension(fam):>9} "
                  f"{','.join(map(str, sorted(dims))):>10} {','.join(map(str, sorted(ranks))):>6}")


if __name__ == "__main__":
    main()
