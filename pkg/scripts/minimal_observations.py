#!/usr/bin/env python3
"""Sweep the remainder ratio over N and report the minimal sample size.

Prints one table per model showing how the remainder-to-quadratic ratio
decays, then the minimal N under both comparison modes.
"""

import argparse

from gaussn import make_model, minimal_n, remainder_ratio


def run(model_name, n_values, threshold):
    model = make_model(model_name)
    print(f"model {model_name}  (Fisher {model.analytic_fisher:g})")
    print(f"{'N':>6}  {'ratio':>12}  {'3dp':>6}")
    for n in n_values:
        r = remainder_ratio(model, n)
        print(f"{n:>6}  {r:>12.6g}  {r:>6.3f}")
    rounded = minimal_n(model, threshold, "paper_rounding")
    strict = minimal_n(model, threshold, "strict")
    print(f"minimal N at threshold {threshold}: {rounded} (3dp rounding), {strict} (strict)")
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", default="chi2log,trig,binom,gauss")
    ap.add_argument("--threshold", type=float, default=0.1)
    args = ap.parse_args()
    ns = [3, 4, 5, 10, 20, 30, 40, 50, 75, 100, 150, 155, 160, 165]
    for name in args.models.split(","):
        run(name.strip(), ns, args.threshold)


if __name__ == "__main__":
    main()
