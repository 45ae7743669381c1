"""Greeks against strike for inverse and quanto inverse options."""

import argparse
import csv

import numpy as np

from invquanto.greeks import greek_curves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="greek_curves.csv")
    ap.add_argument("--spot", type=float, default=25000.0)
    ap.add_argument("--vol", type=float, default=0.75)
    args = ap.parse_args()
    rows = greek_curves(np.linspace(5000, 60000, 111), spot=args.spot, xbar=args.spot, sigma=args.vol)
    with open(args.out, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
