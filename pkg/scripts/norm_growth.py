"""Spectral norms of the truncated blocks F^{|j|} as the truncation grows.

Prints the exact 2-norm (SVD) and the power-iteration estimate for each
(M, |j|) and writes them as CSV; the values saturate well below 2**3.5.
"""
import argparse
import csv
import sys

import numpy as np

from eitlin.bounds import NORM_BOUND, op_norm_estimate
from eitlin.frechet import abs_block


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200, 400, 800])
    ap.add_argument("--j", type=int, nargs="+", default=[0, 1, 3, 10, 50])
    ap.add_argument("-o", "--out", default="norm_growth.csv")
    args = ap.parse_args()
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["M", "j", "svd_norm", "power_estimate"])
        for M in args.sizes:
            for ja in args.j:
                B = abs_block(ja, M, M)
                exact = float(np.linalg.norm(B, 2))
                est = op_norm_estimate(B)
                w.writerow([M, ja, f"{exact:.12g}", f"{est:.12g}"])
                print(f"M={M:5d} |j|={ja:3d}  ||F|| = {exact:.6f}  power {est:.6f}  bound {NORM_BOUND:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
