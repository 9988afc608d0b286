#!/usr/bin/env python3
"""Track how fast each asymptotic posterior approaches its Gaussian reference.

For a sweep of sample sizes this prints the sup log deviation over the
3-sigma window, the KL divergence to the Gaussian, and the 99.73 percent
interval width.  Optionally writes the table as CSV.
"""

import argparse


import numpy as np

from gaussn import compare_to_gaussian, gaussian_reference, make_model, posterior_asymptotic


def interval_width(pg, mass=0.9973):
    dens, x = pg.densities, pg.xi_values
    c = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2.0 * np.diff(x))])
    c /= c[-1]
    tail = (1.0 - mass) / 2.0
    return float(np.interp(1.0 - tail, c, x) - np.interp(tail, c, x))


def sweep(model_name, n_values):
    model = make_model(model_name)
    rows = []
    for n in n_values:
        pg = posterior_asymptotic(model, 0.0, n)
        ref = gaussian_reference(0.0, model.analytic_fisher, n, grid=pg.xi_values)
        rep = compare_to_gaussian(pg, ref)
        rows.append((n, rep.sup_log_deviation, rep.kl_to_gaussian, interval_width(pg)))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", default="chi2log,trig")
    ap.add_argument("--n", default="2,4,8,10,16,32,40,160,640")
    ap.add_argument("--csv", default=None, help="also write the rows to this CSV path")
    args = ap.parse_args()
    n_values = [int(s) for s in args.n.split(",")]
    csv_lines = ["model,N,sup_log_deviation,kl_to_gaussian,interval_width"]
    for name in args.models.split(","):
        name = name.strip()
        rows = sweep(name, n_values)
        print(f"model {name}")
        print(f"{'N':>6}  {'sup |dlog|':>12}  {'KL':>12}  {'99.73% width':>14}")
        for n, sup, kl, width in rows:
            print(f"{n:>6}  {sup:>12.6g}  {kl:>12.6g}  {width:>14.6g}")
            csv_lines.append(f"{name},{n},{sup:.17g},{kl:.17g},{width:.17g}")
        widths = np.array([r[3] for r in rows])
        slope = np.polyfit(np.log([r[0] for r in rows]), np.log(widths), 1)[0]
        print(f"log-log width slope: {slope:.4f} (expected -0.5)")
        print()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write("\n".join(csv_lines) + "\n")


if __name__ == "__main__":
    main()
