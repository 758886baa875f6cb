#!/usr/bin/env python3
"""Plot a trajectory CSV written by `intcons simulate`.

Top panel: every x_i(t). Bottom panel: H, h and the diameter.

    python3 tools/plot_trajectory.py out/trajectory.csv -o traj.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv")
    parser.add_argument("-o", "--output", default="trajectory.png")
    parser.add_argument("--title", default=None)
    args = parser.parse_args()

    df = pd.read_csv(args.csv)
    states = [c for c in df.columns if c.startswith("x_")]

    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    for c in states:
        top.plot(df["t"], df[c], label=c.replace("x_", "x"))
    top.set_ylabel("state")
    if len(states) <= 10:
        top.legend(ncol=min(len(states), 5), fontsize="small")

    bottom.plot(df["t"], df["H"], label="H")
    bottom.plot(df["t"], df["h"], label="h")
    bottom.plot(df["t"], df["diameter"], label="max - min", linestyle="--")
    bottom.set_xlabel("t")
    bottom.legend(fontsize="small")

    if args.title:
        fig.suptitle(args.title)
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)


if __name__ == "__main__":
    main()
