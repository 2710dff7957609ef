"""Link budget, per-UE SINR/capacity, and empirical distribution summaries."""

import math
from dataclasses import dataclass

import numpy as np

from .precoding import EquivalentMatrix

PERCENTILES = (5, 25, 50, 75, 95)


@dataclass(frozen=True)
class LinkBudget:
    tx_power_dbm: float
    noise_figure_db: float
    bandwidth_hz: float
    path_loss_db: np.ndarray  # per UE

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be positive")


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal floor: -174 dBm/Hz + 10*log10(B) + NF."""
    return -174.0 + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def snr_linear(budget: LinkBudget) -> np.ndarray:
    """Per-UE linear SNR; infinite path loss (outage) maps to 0."""
    sigma2 = noise_power_dbm(budget.bandwidth_hz, budget.noise_figure_db)
    snr_db = budget.tx_power_dbm - np.asarray(budget.path_loss_db, dtype=float) - sigma2
    out = 10.0 ** (snr_db / 10.0)
    return np.where(np.isfinite(snr_db), out, 0.0)


def sinr(h_bar: EquivalentMatrix, snrs: np.ndarray) -> np.ndarray:
    """Per-UE SINR: |h_bar[m,m]|^2 / (1/snr_m + sum_{i != m} |h_bar[m,i]|^2)."""
    powers = np.abs(h_bar.h_bar) ** 2
    m = powers.shape[0]
    snrs = np.asarray(snrs, dtype=float)
    if snrs.shape != (m,):
        raise ValueError("one SNR per UE required")
    signal = np.diag(powers)
    interference = powers.sum(axis=1) - signal
    with np.errstate(divide="ignore"):
        inv_snr = np.where(snrs > 0, 1.0 / snrs, np.inf)
    return signal / (inv_snr + interference)


def capacity(sinr_linear) -> np.ndarray:
    """Shannon spectral efficiency log2(1 + SINR), in bits/s/Hz."""
    return np.log2(1.0 + np.asarray(sinr_linear, dtype=float))


@dataclass(frozen=True)
class DropMetrics:
    """Per-UE outcome of one precoder in one drop."""

    precoder_kind: str
    sinr_db: np.ndarray
    capacity_bps_hz: np.ndarray
    seed: int


def to_db(x) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class EmpiricalDistribution:
    sorted_samples: np.ndarray

    def __post_init__(self):
        if self.sorted_samples.size == 0:
            raise ValueError("empty sample set")

    @property
    def count(self) -> int:
        return int(self.sorted_samples.size)


def ecdf(samples) -> EmpiricalDistribution:
    arr = np.sort(np.asarray(samples, dtype=float).ravel())
    return EmpiricalDistribution(sorted_samples=arr)


def percentile(dist: EmpiricalDistribution, p: float) -> float:
    """Nearest-rank percentile: the ceil(p/100 * N)-th order statistic."""
    if not (0.0 <= p <= 100.0):
        raise ValueError("p must lie in [0, 100]")
    n = dist.count
    rank = max(1, math.ceil(p / 100.0 * n))
    return float(dist.sorted_samples[rank - 1])


def percentile_ci(dist: EmpiricalDistribution, p: float):
    """95% order-statistic confidence interval for a percentile (normal approximation)."""
    n = dist.count
    q = p / 100.0
    half = 1.959963984540054 * math.sqrt(n * q * (1.0 - q))
    lo = int(np.clip(math.floor(q * n - half), 0, n - 1))
    hi = int(np.clip(math.ceil(q * n + half), 0, n - 1))
    return float(dist.sorted_samples[lo]), float(dist.sorted_samples[hi])


def median_gap(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    """Difference of medians, percentile(a, 50) - percentile(b, 50)."""
    return percentile(a, 50) - percentile(b, 50)
