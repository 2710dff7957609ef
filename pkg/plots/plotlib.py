"""Shared plumbing for the figure scripts: artifact schemas, readers, renderers.

These scripts are pure renderers of the simulator CLI's artifacts and never
recompute metrics, so any numerical disagreement between a figure and its CSV
input is a schema bug, not a plotting decision.  Rendering is headless (Agg)
and deterministic: vector outputs get pinned metadata, SVG ids a fixed salt.
"""

import csv

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "mmsim-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

DROPS_HEADER = ["drop", "precoder", "ue", "sinr_db", "capacity_bps_hz",
                "snr_db", "channel_model", "tau"]
SWEEP_HEADER = ["power_dbm", "precoder", "channel_model",
                "mean_capacity_bps_hz", "sum_capacity_bps_hz"]


class SchemaError(ValueError):
    """The input file does not match the documented artifact schema."""


def _read_rows(path, expected_header):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}")
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected_header:
            raise SchemaError(f"{path}: header {header} does not match the "
                              f"documented schema {expected_header}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _parse_float(path, line_no, column, text):
    try:
        return float(text)
    except ValueError:
        raise SchemaError(f"{path}:{line_no}: {column} value {text!r} is not a number")


def read_drops(path):
    """Per-precoder SINR samples in dB, keyed by precoder, in file order."""
    samples = {}
    for i, row in enumerate(_read_rows(path, DROPS_HEADER), start=2):
        if len(row) != len(DROPS_HEADER):
            raise SchemaError(f"{path}:{i}: expected {len(DROPS_HEADER)} fields, "
                              f"got {len(row)}")
        samples.setdefault(row[1], []).append(_parse_float(path, i, "sinr_db", row[3]))
    return {kind: np.array(values) for kind, values in samples.items()}


def read_sweep(path):
    """Per-precoder (power_dbm, mean_capacity) column pairs, in file order."""
    curves = {}
    for i, row in enumerate(_read_rows(path, SWEEP_HEADER), start=2):
        if len(row) != len(SWEEP_HEADER):
            raise SchemaError(f"{path}:{i}: expected {len(SWEEP_HEADER)} fields, "
                              f"got {len(row)}")
        power = _parse_float(path, i, "power_dbm", row[0])
        cap = _parse_float(path, i, "mean_capacity_bps_hz", row[3])
        curves.setdefault(row[1], ([], []))
        curves[row[1]][0].append(power)
        curves[row[1]][1].append(cap)
    return {kind: (np.array(p), np.array(c)) for kind, (p, c) in curves.items()}


def select_precoders(available, requested):
    """Resolve a precoder filter; an empty request keeps everything, file order."""
    if not requested:
        return list(available)
    missing = [kind for kind in requested if kind not in available]
    if missing:
        raise SchemaError(f"precoders not present in the input: {', '.join(missing)}")
    return list(requested)


def ecdf_curve(samples):
    """Empirical CDF support points: sorted samples vs (1..n)/n."""
    x = np.sort(np.asarray(samples, dtype=float))
    y = np.arange(1, x.size + 1) / x.size
    return x, y


def render_cdf(samples_by_precoder, precoders=()):
    """One step curve per precoder: x = SINR (dB), y = empirical CDF."""
    kinds = select_precoders(samples_by_precoder, precoders)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for kind in kinds:
        x, y = ecdf_curve(samples_by_precoder[kind])
        ax.step(x, y, where="post", label=kind)
    ax.set_xlabel("SINR (dB)")
    ax.set_ylabel("Empirical CDF")
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, alpha=0.35)
    ax.legend()
    fig.tight_layout()
    return fig


def render_capacity_sweep(curves_by_precoder, precoders=()):
    """Mean capacity vs transmit power, one line per precoder, input order kept."""
    kinds = select_precoders(curves_by_precoder, precoders)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for kind in kinds:
        powers, caps = curves_by_precoder[kind]
        # markers keep a single-power sweep visible as one point per precoder
        ax.plot(powers, caps, marker="o", label=kind)
    ax.set_xlabel("Transmit power (dBm)")
    ax.set_ylabel("Mean capacity (bits/s/Hz)")
    ax.grid(True, alpha=0.35)
    ax.legend()
    fig.tight_layout()
    return fig


def save_figure(fig, path, dpi=150):
    """Write the figure; the extension picks the format (vector by default)."""
    name = str(path)
    suffix = name.rsplit(".", 1)[-1].lower() if "." in name else ""
    if suffix == "pdf":
        fig.savefig(name, metadata={"CreationDate": None})
    elif suffix == "svg":
        fig.savefig(name, metadata={"Date": None})
    else:
        fig.savefig(name, dpi=dpi)
