#!/usr/bin/env python3
"""Plot ASE curves from wavesim CSV output.

Usage: plot_curves.py out/fig2_*.csv [-o fig2.png]

Each CSV follows the workbench contract
(scenario_id,snr_db,ase_bps_hz,ci_half_width,...); one line per file is
drawn with its confidence band.
"""

import argparse
import csv
import sys


def read_curve(path):
    snr, ase, hw = [], [], []
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    for row in rows:
        snr.append(float(row["snr_db"]))
        ase.append(float(row["ase_bps_hz"]))
        hw.append(float(row["ci_half_width"]))
    name = rows[0]["scenario_id"] if rows else path
    return name, snr, ase, hw


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+", help="curve CSV files")
    ap.add_argument("-o", "--out", default=None, help="write PNG instead of showing")
    args = ap.parse_args()

    try:
        import matplotlib

        if args.out:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required for plotting")

    fig, ax = plt.subplots(figsize=(7, 5))
    for path in args.csv:
        name, snr, ase, hw = read_curve(path)
        ax.plot(snr, ase, marker="o", label=name)
        lo = [a - h for a, h in zip(ase, hw)]
        hi = [a + h for a, h in zip(ase, hw)]
        ax.fill_between(snr, lo, hi, alpha=0.15)
    ax.set_xlabel("P/Pn [dB]")
    ax.set_ylabel("ASE [b/s/Hz]")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
