"""Output artifacts: per-drop CSV, aggregate JSON summary, sweep CSV.

CSV bytes are a pure function of the simulation result: fixed row order
(drop ascending, precoders in config order, UE ascending) and repr float
formatting, so identical runs produce identical files regardless of sharding.
"""

import json

from . import __version__
from .config import ScenarioConfig, to_dict
from .metrics import PERCENTILES, percentile, percentile_ci
from .sim import SimulationResult

DROPS_CSV_HEADER = "drop,precoder,ue,sinr_db,capacity_bps_hz,snr_db,channel_model,tau"
SWEEP_CSV_HEADER = "power_dbm,precoder,channel_model,mean_capacity_bps_hz,sum_capacity_bps_hz"


def write_drops_csv(result: SimulationResult, path) -> None:
    cfg = result.config
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(DROPS_CSV_HEADER + "\n")
        for rec in result.records:
            for kind in cfg.precoders:
                dm = rec.metrics.get(kind)
                if dm is None:  # precoder failed this drop; surfaced in the summary
                    continue
                for ue in range(cfg.num_ues):
                    fh.write(
                        f"{rec.drop_index},{kind},{ue},{float(dm.sinr_db[ue])!r},"
                        f"{float(dm.capacity_bps_hz[ue])!r},{float(rec.snr_db[ue])!r},"
                        f"{cfg.channel_model},{cfg.tau!r}\n")


def summary_dict(result: SimulationResult) -> dict:
    cfg = result.config
    per_precoder = {}
    for kind in cfg.precoders:
        try:
            dist = result.distribution(kind, "sinr_db")
        except ValueError:
            per_precoder[kind] = {"samples": 0}
            continue
        cap = result.distribution(kind, "capacity_bps_hz")
        lo, hi = percentile_ci(dist, 50)
        per_precoder[kind] = {
            "samples": dist.count,
            "sinr_db_percentiles": {str(p): percentile(dist, p) for p in PERCENTILES},
            "sinr_db_median_ci95": [lo, hi],
            "mean_capacity_bps_hz": float(cap.sorted_samples.mean()),
            "sum_capacity_bps_hz": float(cap.sorted_samples.mean()) * cfg.num_ues,
        }
    return {
        "version": __version__,
        "master_seed": cfg.master_seed,
        "drops": cfg.drops,
        "failure_counts": dict(result.failure_counts),
        "per_precoder": per_precoder,
        "runtime_seconds": result.runtime_seconds,
        "config": to_dict(cfg),
    }


def write_summary_json(result: SimulationResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary_dict(result), fh, indent=2)
        fh.write("\n")


def write_sweep_csv(points, channel_model: str, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SWEEP_CSV_HEADER + "\n")
        for pt in points:
            fh.write(f"{pt.tx_power_dbm!r},{pt.precoder_kind},{channel_model},"
                     f"{pt.mean_capacity_bps_hz!r},{pt.sum_capacity_bps_hz!r}\n")
