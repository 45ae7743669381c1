"""Run every oracle comparison and write the report."""

import argparse
import sys

from invquanto.verify import run_all, write_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="verify.csv")
    ap.add_argument("--paths", type=int, default=1_000_000)
    ap.add_argument("--grid", type=int, default=50)
    ap.add_argument("--seed", type=int, default=20220930)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    results = run_all(args.paths, args.seed, args.grid, args.workers, progress=lambda s: print(f"running {s}", file=sys.stderr))
    with open(args.out, "w", newline="") as f:
        write_report(results, f)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    sys.exit(3 if failed else 0)


if __name__ == "__main__":
    main()
