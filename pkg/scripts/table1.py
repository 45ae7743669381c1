"""Payoff comparison panels for BTC and ETH settlement prices."""

import argparse
import csv
import sys

from invquanto.payoff import table1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()
    records = table1()
    stream = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.DictWriter(stream, fieldnames=list(records[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(records)
    if args.out:
        stream.close()


if __name__ == "__main__":
    main()
