#!/usr/bin/env python3
"""Ratios Tr([M_k,M_i][M_j,M_l]) / ((s_ij s_kl - s_il s_kj) s_ik s_jl) over random unipotent S.

The ratio depends on q only; the table lists it next to 2 q^2 for comparison.
"""
import argparse

import numpy as np

from stokesleaf.isomonodromy import commutator_trace_report, random_unipotent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    samples = [random_unipotent(args.n, rng) for _ in range(args.samples)]
    for q in (0.5, 1.0, 1.5 + 0.5j, 2.0):
        rep = commutator_trace_report(samples, q, (1, 2, 3, 4))
        r = np.array(rep.ratios)
        print(f"q={q!s:>10}  mean ratio={r.mean():.6f}  spread={np.ptp(np.abs(r)):.1e}  "
              f"2q^2={2 * q * q:.6f}  constant={rep.constant}  skipped={len(rep.skipped)}")


if __name__ == "__main__":
    main()
