"""Observed frequency of the large-entry placement events versus n.

For the diagonal event a closed-form rate is printed alongside: with
n diagonal entries each exceeding b_n**(11/20) with probability
b_n**(-11/20 * alpha), the chance that at least one does is
1 - (1 - b_n**(-11 alpha/20))**n.

    python3 scripts/lemma_event_rates.py --alpha 1 --sizes 100,300,1000
"""

import argparse
import warnings

from heavytail_rmt.harness import ExperimentConfig, run_experiment, summarize
from heavytail_rmt.tails import Kind, normalizer


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--ensemble", default="wigner", choices=["wigner", "covariance"])
    ap.add_argument("--sizes", default="100,300")
    ap.add_argument("--replicates", type=int, default=200)
    ap.add_argument("--seed", type=int, default=29)
    args = ap.parse_args()
    warnings.simplefilter("ignore", RuntimeWarning)

    for n in (int(s) for s in args.sizes.split(",")):
        cfg = ExperimentConfig(ensemble=args.ensemble, alpha=args.alpha, n=n,
                               replicates=args.replicates, seed=args.seed, top_k=1)
        freqs = summarize(run_experiment(cfg), cfg).lemma_frequencies
        line = "  ".join(f"{k}={v:.3f}" for k, v in freqs.items())
        if cfg.ensemble is Kind.WIGNER:
            b = normalizer(cfg.law, Kind.WIGNER, n).value
            line += f"  (diagonal closed form {1 - (1 - b ** (-0.55 * args.alpha)) ** n:.3f})"
        print(f"n={n:<6} {line}")


if __name__ == "__main__":
    main()
