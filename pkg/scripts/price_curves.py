"""Quanto inverse call value against spot across maturities and vols.

Also prints the five reference levels at S=30000, K=X=25000.
"""

import argparse
import csv

import numpy as np

from invquanto.analytic import quanto_inverse_value, standard_value

DAYS = (10, 90, 180)
VOLS = (0.5, 1.0, 2.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="price_curves.csv")
    ap.add_argument("--strike", type=float, default=25000.0)
    ap.add_argument("--xbar", type=float, default=25000.0)
    args = ap.parse_args()

    for days, vol in [(10, 2.0), (90, 2.0), (180, 2.0), (90, 0.5), (90, 1.0)]:
        v = quanto_inverse_value(1, 30000.0, 25000.0, 25000.0, 0.0, vol, days / 365)
        print(f"{days:4d}d vol {vol:<4g} {v:10.2f}")

    spots = np.linspace(500, 100000, 400)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["tau_days", "vol", "spot", "quanto_inverse", "standard", "bound"])
        for days in DAYS:
            for vol in VOLS:
                tau = days / 365
                qi = quanto_inverse_value(1, spots, args.strike, args.xbar, 0.0, vol, tau)
                std = standard_value(1, spots, args.strike, 0.0, 0.0, vol, tau)
                for s, a, b in zip(spots, qi, std):
                    w.writerow([days, vol, repr(float(s)), repr(float(a)), repr(float(b)), args.xbar])
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
