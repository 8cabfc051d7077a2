#!/usr/bin/env python3
"""Painleve VI residual of the reduced n=3 flow, with step halving.

Usage: python scripts/pvi_experiment.py [--mu 0.3] [--seeds 0 1 2] [--step 1e-3]
"""
import argparse

from stokesleaf.isomonodromy import pvi_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mu", type=float, default=0.3)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3])
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--t0", type=float, default=0.25)
    ap.add_argument("--t1", type=float, default=0.75)
    ap.add_argument("--variant", choices=["corrected", "uncorrected"], default="corrected")
    args = ap.parse_args()
    span = (args.t0, args.t1)
    print(f"{'seed':>4} {'residual(h)':>12} {'residual(h/2)':>14} {'ratio':>6} {'flagged':>7}")
    for seed in args.seeds:
        a = pvi_experiment(args.mu, seed=seed, step=args.step, t_span=span, variant=args.variant)
        b = pvi_experiment(args.mu, seed=seed, step=args.step / 2, t_span=span, variant=args.variant)
        print(f"{seed:>4} {a.residual:12.3e} {b.residual:14.3e} {a.residual / b.residual:6.2f} "
              f"{len(a.flagged):>7}")


if __name__ == "__main__":
    main()
