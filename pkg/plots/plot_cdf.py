#!/usr/bin/env python3
"""Render per-precoder SINR step-CDF curves from a simulator drops CSV."""

import argparse
import sys

import matplotlib.pyplot as plt

import plotlib


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Empirical SINR CDF, one step curve per precoder.")
    parser.add_argument("--in", dest="input", required=True, metavar="DROPS_CSV",
                        help="drops CSV written by the simulator CLI")
    parser.add_argument("--out", required=True, metavar="IMAGE",
                        help="output image; extension picks the format "
                             "(.pdf/.svg vector, .png raster)")
    parser.add_argument("--precoders", default="",
                        help="comma-separated subset to plot; empty plots all")
    parser.add_argument("--dpi", type=int, default=150,
                        help="raster resolution; ignored for vector formats")
    args = parser.parse_args(argv)

    requested = tuple(kind for kind in args.precoders.split(",") if kind)
    try:
        fig = plotlib.render_cdf(plotlib.read_drops(args.input), requested)
    except plotlib.SchemaError as exc:
        print(f"plot_cdf: {exc}", file=sys.stderr)
        return 2
    try:
        plotlib.save_figure(fig, args.out, dpi=args.dpi)
    except OSError as exc:
        print(f"plot_cdf: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    finally:
        plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
