#!/usr/bin/env python3
"""Render mean-capacity-vs-transmit-power curves from a simulator sweep CSV."""

import argparse
import sys

import matplotlib.pyplot as plt

import plotlib


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Mean capacity against transmit power, one line per precoder.")
    parser.add_argument("--in", dest="input", required=True, metavar="SWEEP_CSV",
                        help="sweep CSV written by the simulator CLI")
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
        fig = plotlib.render_capacity_sweep(plotlib.read_sweep(args.input), requested)
    except plotlib.SchemaError as exc:
        print(f"plot_capacity_sweep: {exc}", file=sys.stderr)
        return 2
    try:
        plotlib.save_figure(fig, args.out, dpi=args.dpi)
    except OSError as exc:
        print(f"plot_capacity_sweep: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    finally:
        plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
