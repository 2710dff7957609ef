"""Channel generation: Rayleigh baseline, clustered mmWave models, link budget draws.

Two clustered parameterizations are shipped: "nyu" (few strong clusters, measured
urban mmWave statistics) and "uma" (many weaker clusters, macro-cell flavored).
Both share the same synthesis machinery - clusters of sub-paths with Laplacian
angular spreads - and differ only in their `ClusterModelParams`. Large-scale
quantities (LOS/NLOS/outage condition, path loss, shadowing) are drawn separately
and never enter the small-scale matrix; they reach the SINR through the per-UE SNR.
"""

from dataclasses import dataclass, replace

import numpy as np

from .antenna import (
    ArrayGeometry,
    ElementPatternParams,
    field_factors,
    steering_columns,
    wrap_azimuth_deg,
)

CHANNEL_MODELS = ("rayleigh", "nyu", "uma")
CONDITIONS = ("los", "nlos", "outage")

LOS = "los"
NLOS = "nlos"
OUTAGE = "outage"


@dataclass(frozen=True)
class LinkState:
    """Large-scale state of one gNB-UE link."""

    condition: str
    path_loss_db: float
    distance_m: float

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.condition!r}")
        if self.distance_m <= 0:
            raise ValueError("distance_m must be positive")


@dataclass(frozen=True)
class Cluster:
    """One scattering cluster: per-sub-path complex gains and ray directions."""

    gains: np.ndarray       # (L,), complex
    theta_deg: np.ndarray   # (L,), zenith
    phi_deg: np.ndarray     # (L,), azimuth


@dataclass(frozen=True)
class ClusterSet:
    clusters: tuple

    @property
    def n_subpaths(self) -> int:
        return sum(c.gains.size for c in self.clusters)


@dataclass(frozen=True)
class ChannelMatrix:
    """Stacked per-UE channel columns plus the link metadata they were drawn with."""

    h: np.ndarray            # (n_elements, n_ues), complex
    links: tuple             # per-UE LinkState
    model_tag: str

    def __post_init__(self):
        if self.h.ndim != 2:
            raise ValueError("h must be a 2-D matrix")
        if len(self.links) != self.h.shape[1]:
            raise ValueError("one LinkState per UE column required")


@dataclass(frozen=True)
class ImperfectCsiConfig:
    """Gauss-Markov estimation quality; tau = 1 is perfect CSI."""

    tau: float

    def __post_init__(self):
        if not (0.0 <= self.tau <= 1.0):
            raise ValueError("tau must lie in [0, 1]")


@dataclass(frozen=True)
class ClusterModelParams:
    """Knobs of the clustered synthesis; angles in degrees.

    cluster_count_mode "poisson": K = max(1, min(max_clusters, Poisson(poisson_lambda))).
    cluster_count_mode "fixed": K = fixed_clusters_los / fixed_clusters_nlos.
    Sub-path counts are uniform on [subpaths_min, subpaths_max].
    Cluster power fractions are normalized exponential draws damped by
    exp(-k / power_decay) in cluster index k.
    """

    cluster_count_mode: str = "poisson"
    poisson_lambda: float = 1.8
    max_clusters: int = 4
    fixed_clusters_los: int = 12
    fixed_clusters_nlos: int = 20
    subpaths_min: int = 1
    subpaths_max: int = 10
    power_decay: float = 2.0
    azimuth_spread_deg: float = 10.0   # per-cluster Laplacian rms
    zenith_spread_deg: float = 6.0
    sector_half_width_deg: float = 60.0
    zenith_min_deg: float = 60.0
    zenith_max_deg: float = 120.0


@dataclass(frozen=True)
class PathLossParams:
    """PL_dB = intercept + exponent * 10*log10(d) + Normal(0, shadow^2), plus the
    three-state condition probabilities p_out = max(0, 1 - exp(-a_out*d + b_out)),
    p_los = (1 - p_out) * exp(-d / los_decay_m)."""

    los_intercept_db: float
    los_exponent: float
    los_shadow_db: float
    nlos_intercept_db: float
    nlos_exponent: float
    nlos_shadow_db: float
    outage_a_per_m: float
    outage_b: float
    los_decay_m: float


NYU_CLUSTERS = ClusterModelParams()
UMA_CLUSTERS = ClusterModelParams(
    cluster_count_mode="fixed",
    fixed_clusters_los=12,
    fixed_clusters_nlos=20,
    subpaths_min=20,
    subpaths_max=20,
    power_decay=4.0,
)

# Measured 28 GHz urban fits (intercept/exponent/shadow), outage curve included.
NYU_PATHLOSS = PathLossParams(
    los_intercept_db=61.4, los_exponent=2.0, los_shadow_db=5.8,
    nlos_intercept_db=72.0, nlos_exponent=2.92, nlos_shadow_db=8.7,
    outage_a_per_m=1.0 / 30.0, outage_b=5.2, los_decay_m=67.1,
)
# Macro-cell flavored defaults at 28 GHz; outage negligible below ~10 km.
UMA_PATHLOSS = PathLossParams(
    los_intercept_db=56.9, los_exponent=2.2, los_shadow_db=4.0,
    nlos_intercept_db=42.5, nlos_exponent=3.908, nlos_shadow_db=6.0,
    outage_a_per_m=1.0 / 1000.0, outage_b=10.0, los_decay_m=63.0,
)

CLUSTER_DEFAULTS = {"nyu": NYU_CLUSTERS, "uma": UMA_CLUSTERS}
PATHLOSS_DEFAULTS = {"nyu": NYU_PATHLOSS, "uma": UMA_PATHLOSS}


def _complex_normal(rng: np.random.Generator, size, scale: float = 1.0) -> np.ndarray:
    """CN(0, scale^2) entries: real/imag each Normal(0, scale^2/2)."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) * (scale / np.sqrt(2.0))


def draw_rayleigh(n_t: int, m: int, rng: np.random.Generator, links=None) -> ChannelMatrix:
    """i.i.d. Rayleigh matrix with entries CN(0, 1/m), so E||H||_F^2 = n_t."""
    if n_t < 1 or m < 1:
        raise ValueError("n_t and m must be positive")
    h = _complex_normal(rng, (n_t, m), scale=1.0 / np.sqrt(m))
    if links is None:
        links = tuple(LinkState(NLOS, 0.0, 1.0) for _ in range(m))
    return ChannelMatrix(h=h, links=tuple(links), model_tag="rayleigh")


def condition_probabilities(params: PathLossParams, distance_m: float):
    """(p_los, p_nlos, p_out) at the given distance."""
    p_out = max(0.0, 1.0 - np.exp(-params.outage_a_per_m * distance_m + params.outage_b))
    p_los = (1.0 - p_out) * np.exp(-distance_m / params.los_decay_m)
    return p_los, 1.0 - p_out - p_los, p_out


def condition_draw(model: str, distance_m: float, rng: np.random.Generator,
                   params: PathLossParams | None = None) -> str:
    """Sample the LOS/NLOS/OUTAGE state of one link."""
    params = params or PATHLOSS_DEFAULTS[model]
    if distance_m <= 0:
        raise ValueError("distance_m must be positive")
    p_los, _, p_out = condition_probabilities(params, distance_m)
    u = rng.random()
    if u < p_out:
        return OUTAGE
    if u < p_out + p_los:
        return LOS
    return NLOS


def path_loss(model: str, distance_m: float, condition: str, rng: np.random.Generator,
              shadowing: bool = True, params: PathLossParams | None = None) -> LinkState:
    """Draw the large-scale loss of one link; OUTAGE maps to infinite loss."""
    params = params or PATHLOSS_DEFAULTS[model]
    if distance_m <= 0:
        raise ValueError("distance_m must be positive")
    if condition == OUTAGE:
        return LinkState(OUTAGE, np.inf, distance_m)
    if condition == LOS:
        intercept, exponent, shadow = (params.los_intercept_db, params.los_exponent,
                                       params.los_shadow_db)
    elif condition == NLOS:
        intercept, exponent, shadow = (params.nlos_intercept_db, params.nlos_exponent,
                                       params.nlos_shadow_db)
    else:
        raise ValueError(f"unknown condition {condition!r}")
    pl = intercept + exponent * 10.0 * np.log10(distance_m)
    if shadowing:
        pl += shadow * rng.standard_normal()
    return LinkState(condition, float(pl), distance_m)


def _draw_cluster_count(params: ClusterModelParams, condition: str,
                        rng: np.random.Generator) -> int:
    if params.cluster_count_mode == "poisson":
        return int(max(1, min(params.max_clusters, rng.poisson(params.poisson_lambda))))
    if params.cluster_count_mode == "fixed":
        return params.fixed_clusters_los if condition == LOS else params.fixed_clusters_nlos
    raise ValueError(f"unknown cluster_count_mode {params.cluster_count_mode!r}")


def draw_cluster_set(params: ClusterModelParams, condition: str,
                     rng: np.random.Generator) -> ClusterSet:
    """Sample cluster structure: counts, power split, central angles, ray offsets, gains.

    Cluster power fractions p_k come from exponential draws damped by
    exp(-k / power_decay) and normalized to sum to one; sub-path gains are
    CN(0, p_k / L_k), so the expected total power is exactly one.
    """
    k = _draw_cluster_count(params, condition, rng)
    raw = rng.exponential(1.0, size=k) * np.exp(-np.arange(k) / params.power_decay)
    fractions = raw / raw.sum()
    # Laplacian rms spread s corresponds to scale s / sqrt(2)
    az_scale = params.azimuth_spread_deg / np.sqrt(2.0)
    zen_scale = params.zenith_spread_deg / np.sqrt(2.0)
    clusters = []
    for idx in range(k):
        n_sub = int(rng.integers(params.subpaths_min, params.subpaths_max + 1))
        center_phi = rng.uniform(-params.sector_half_width_deg, params.sector_half_width_deg)
        center_theta = rng.uniform(params.zenith_min_deg, params.zenith_max_deg)
        phi = wrap_azimuth_deg(center_phi + rng.laplace(0.0, az_scale, size=n_sub))
        theta = np.clip(center_theta + rng.laplace(0.0, zen_scale, size=n_sub), 0.0, 180.0)
        gains = _complex_normal(rng, n_sub, scale=np.sqrt(fractions[idx] / n_sub))
        clusters.append(Cluster(gains=gains, theta_deg=theta, phi_deg=phi))
    return ClusterSet(clusters=tuple(clusters))


def assemble_channel_vector(cluster_set: ClusterSet, geometry: ArrayGeometry,
                            element_params: ElementPatternParams) -> np.ndarray:
    """Sum of gain * field_factor * steering_vector over every sub-path."""
    gains = np.concatenate([c.gains for c in cluster_set.clusters])
    theta = np.concatenate([c.theta_deg for c in cluster_set.clusters])
    phi = np.concatenate([c.phi_deg for c in cluster_set.clusters])
    u = steering_columns(geometry, theta, phi)
    f = field_factors(element_params, theta, phi)
    return u @ (gains * f)


def draw_clustered(model: str, geometry: ArrayGeometry, element_params: ElementPatternParams,
                   link: LinkState, rng: np.random.Generator,
                   params: ClusterModelParams | None = None):
    """One UE's clustered channel column; returns (ClusterSet, h)."""
    if model not in ("nyu", "uma"):
        raise ValueError(f"no clustered statistics for model {model!r}")
    if link.condition == OUTAGE:
        raise ValueError("cannot synthesize a channel for a link in outage")
    params = params or CLUSTER_DEFAULTS[model]
    cluster_set = draw_cluster_set(params, link.condition, rng)
    h = assemble_channel_vector(cluster_set, geometry, element_params)
    return cluster_set, h


def apply_csi_error(channel: ChannelMatrix, cfg: ImperfectCsiConfig,
                    rng: np.random.Generator) -> ChannelMatrix:
    """Gauss-Markov degraded estimate: H_e = tau*H + sqrt(1 - tau^2)*E, E ~ CN(0,1)."""
    err = _complex_normal(rng, channel.h.shape)
    h_e = cfg.tau * channel.h + np.sqrt(1.0 - cfg.tau ** 2) * err
    return replace(channel, h=h_e)


def channel_to_csv(channel: ChannelMatrix, path) -> None:
    """Export a realization as rows of (ue, element, re, im, condition, path_loss_db)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("ue,element,re,im,condition,path_loss_db\n")
        for m, link in enumerate(channel.links):
            for e in range(channel.h.shape[0]):
                v = channel.h[e, m]
                fh.write(f"{m},{e},{float(v.real)!r},{float(v.imag)!r},"
                         f"{link.condition},{float(link.path_loss_db)!r}\n")
