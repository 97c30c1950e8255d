"""Growth of lambda_max of the truncated matrix across sizes.

    python3 scripts/truncation_scaling.py --alpha 2.5 --sizes 200,400,800
"""

import argparse

from heavytail_rmt.ensembles import default_beta
from heavytail_rmt.entries import epsilon_cap, truncated_top_scaling
from heavytail_rmt.tails import TailLaw


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=2.5)
    ap.add_argument("--beta", type=float, help="default: midpoint of the admissible window")
    ap.add_argument("--epsilon", type=float, help="default: half the cap")
    ap.add_argument("--sizes", default="200,400,800")
    ap.add_argument("--replicates", type=int, default=50)
    ap.add_argument("--seed", type=int, default=19)
    args = ap.parse_args()

    beta = default_beta(args.alpha) if args.beta is None else args.beta
    eps = epsilon_cap(args.alpha, beta) / 2 if args.epsilon is None else args.epsilon
    sizes = [int(s) for s in args.sizes.split(",")]
    res = truncated_top_scaling(TailLaw(args.alpha), beta, eps, sizes, args.replicates, seed=args.seed)
    print(f"alpha={args.alpha} beta={beta:.4f} epsilon={eps:.5f}")
    for n, med in zip(res.sizes, res.medians):
        print(f"n={n:<6} median lambda_max(A1)/n^(2/alpha-eps) = {med:.4f}")
    print("consecutive ratios:", ", ".join(f"{r:.3f}" for r in res.consecutive_ratios))


if __name__ == "__main__":
    main()
