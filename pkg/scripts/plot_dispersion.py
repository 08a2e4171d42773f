#!/usr/bin/env python3
"""Render a dispersion CSV produced by `coinwalk dispersion` to an image.

Example:
    coinwalk dispersion --alpha 3.926991 --beta 0.523599 --grid 1024 --out disp.csv
    python scripts/plot_dispersion.py disp.csv -o disp.png
"""

import argparse

from coinwalk.plotting import plot_dispersion_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", help="dispersion CSV file")
    parser.add_argument("-o", "--out", default="dispersion.png",
                        help="output image file (default: dispersion.png)")
    parser.add_argument("--title", default=None)
    args = parser.parse_args()
    plot_dispersion_csv(args.csv, args.out, title=args.title)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
