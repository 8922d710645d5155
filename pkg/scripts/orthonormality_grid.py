#!/usr/bin/env python3
"""Dump transform magnitudes on a grid and Gram residuals for plotting.

Writes two CSV files: one with |mu_hat(t)| sampled on [t_min, t_max], one
with the worst off-diagonal Gram magnitude per (modulus, level) pair.
"""

import argparse
import csv

import numpy as np

from cantorspec import SpectrumTruncation, gram_matrix, mu_hat


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--t-min", type=float, default=0.0)
    parser.add_argument("--t-max", type=float, default=25.0)
    parser.add_argument("--points", type=int, default=2000)
    parser.add_argument("--depth", type=int, default=40)
    parser.add_argument("--moduli", type=int, nargs="+", default=[1, 3, 5, 85])
    parser.add_argument("--level", type=int, default=4)
    parser.add_argument("--grid-out", default="muhat_grid.csv")
    parser.add_argument("--gram-out", default="gram_residuals.csv")
    args = parser.parse_args()

    with open(args.grid_out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "re", "im", "abs"])
        for t in np.linspace(args.t_min, args.t_max, args.points):
            value = mu_hat(float(t), args.depth)
            writer.writerow([float(t), value.real, value.imag, abs(value)])
    print(f"wrote {args.points} samples to {args.grid_out}")

    with open(args.gram_out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["m", "level", "size", "max_offdiag"])
        for m in args.moduli:
            for level in range(args.level + 1):
                s = SpectrumTruncation(m, level)
                g = gram_matrix(s)
                off = g - np.eye(len(s), dtype=np.complex128)
                writer.writerow([m, level, len(s), float(np.abs(off).max())])
    print(f"wrote residuals for moduli {args.moduli} to {args.gram_out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
