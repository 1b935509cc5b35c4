"""Plot a table written by ``noisysolve sweep``: theory as lines, simulation as error bars.

    noisysolve sweep --config scripts/p_sweep.json --out p_sweep.csv
    python scripts/plot_sweep.py p_sweep.csv --x p --out p_sweep.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("table")
    ap.add_argument("--x", default="p", help="column for the horizontal axis (or n/N)")
    ap.add_argument("--out", default="sweep.png")
    ap.add_argument("--log", action="store_true", help="logarithmic risk axis")
    args = ap.parse_args()

    df = pd.read_csv(args.table, na_values=["nan"])
    df["n/N"] = df["n"] / df["N"]
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, grp in df.groupby("filter", sort=False):
        grp = grp.sort_values(args.x)
        line, = ax.plot(grp[args.x], grp["theory"], label=f"{name} (theory)")
        ax.errorbar(grp[args.x], grp["empirical"], yerr=2 * grp["stderr"], fmt="o",
                    color=line.get_color(), ms=3)
    ax.set_xlabel(args.x)
    ax.set_ylabel("quadratic risk")
    if args.log:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
