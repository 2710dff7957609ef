"""Monte Carlo harness: seeded drops, experiment aggregation, power sweeps, presets.

Paired-comparison design: each drop draws one channel realization and (for
tau < 1) one estimation-error realization, shared by every precoder under test,
so per-drop differences between precoders are never Monte Carlo noise. Drop i of
an experiment is seeded by drop_seed(master_seed, i) alone, which makes results
independent of how drops are sharded across workers.
"""

import dataclasses
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channel as ch
from . import metrics as mt
from . import precoding as pc
from .antenna import Codebook, build_codebook
from .config import ScenarioConfig, validate

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Fixed reference outputs of the seed mixer (stream seeded 0, then (42, 7)):
#   drop_seed(0, 0) = 0xE220A8397B1DCDAF
#   drop_seed(0, 1) = 0x6E789E6AA1B965F4
#   drop_seed(0, 2) = 0x06C45D188009454F
#   drop_seed(42, 7) = 0xCCF635EE9E9E2FA4


def splitmix64(value: int) -> int:
    """The splitmix64 finalizer; a bijective 64-bit mix."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def drop_seed(master_seed: int, drop_index: int) -> int:
    """Seed of one drop: the (drop_index+1)-th splitmix64 output of the master stream."""
    if drop_index < 0:
        raise ValueError("drop_index must be >= 0")
    return splitmix64((master_seed + (drop_index + 1) * _GOLDEN) & _MASK64)


@dataclass(frozen=True)
class DropResult:
    drop_index: int
    snr_db: np.ndarray              # per UE, dB
    metrics: dict                   # precoder kind -> DropMetrics
    failures: tuple                 # precoder kinds that failed this drop


@dataclass
class SimulationResult:
    config: ScenarioConfig
    records: list                   # DropResult, ascending drop_index
    failure_counts: dict            # precoder kind -> int
    runtime_seconds: float

    def distribution(self, kind: str, quantity: str = "sinr_db") -> mt.EmpiricalDistribution:
        if kind not in self.config.precoders:
            raise KeyError(f"precoder {kind!r} was not part of this experiment")
        samples = [getattr(rec.metrics[kind], quantity)
                   for rec in self.records if kind in rec.metrics]
        if not samples:
            raise ValueError(f"no surviving drops for precoder {kind!r}")
        return mt.ecdf(np.concatenate(samples))

    def mean_capacity(self, kind: str) -> float:
        dist = self.distribution(kind, "capacity_bps_hz")
        return float(dist.sorted_samples.mean())

    def sum_capacity(self, kind: str) -> float:
        """Mean over drops of the per-drop sum over UEs."""
        return self.mean_capacity(kind) * self.config.num_ues


class _DropContext:
    """Per-process immutable pieces shared by every drop of one experiment."""

    def __init__(self, cfg: ScenarioConfig):
        validate(cfg)
        self.cfg = cfg
        self.geometry = cfg.geometry()
        self.codebook: Codebook | None = None
        if any(kind.startswith("gob") for kind in cfg.precoders):
            self.codebook = build_codebook(
                self.geometry, cfg.oversampling_v, cfg.oversampling_h, cfg.phase_bits)


def _draw_links(ctx: _DropContext, rng: np.random.Generator):
    """LOS/NLOS states and path losses for the M served UEs (outage UEs redrawn)."""
    cfg = ctx.cfg
    pl_params = cfg.pathloss_params(cfg.channel_model)
    links = []
    for _ in range(cfg.num_ues):
        if cfg.channel_model == "rayleigh":
            condition = ch.NLOS
        else:
            condition = ch.OUTAGE
            for _attempt in range(1000):
                condition = ch.condition_draw(cfg.channel_model, cfg.distance_m, rng,
                                              params=pl_params)
                if condition != ch.OUTAGE:
                    break
            else:
                raise RuntimeError("could not draw a served UE (persistent outage)")
        links.append(ch.path_loss(cfg.channel_model, cfg.distance_m, condition, rng,
                                  shadowing=cfg.shadowing, params=pl_params))
    return tuple(links)


def _draw_channel(ctx: _DropContext, links, rng: np.random.Generator) -> ch.ChannelMatrix:
    cfg = ctx.cfg
    if cfg.channel_model == "rayleigh":
        return ch.draw_rayleigh(ctx.geometry.n_elements, cfg.num_ues, rng, links=links)
    cl_params = cfg.cluster_params(cfg.channel_model)
    cols = []
    for link in links:
        _, h = ch.draw_clustered(cfg.channel_model, ctx.geometry, cfg.element, link, rng,
                                 params=cl_params)
        cols.append(h)
    return ch.ChannelMatrix(h=np.column_stack(cols), links=links, model_tag=cfg.channel_model)


def _build_precoder(kind: str, estimate: ch.ChannelMatrix, ctx: _DropContext,
                    mean_snr: float) -> pc.PrecodingMatrix:
    if kind == "gob_p":
        return pc.gob_power(estimate, ctx.codebook)
    if kind == "gob_slnr":
        return pc.gob_slnr(estimate, ctx.codebook, noise_term=1.0 / mean_snr)
    if kind == "mf":
        return pc.mf(estimate)
    if kind == "zf":
        return pc.zf(estimate)
    if kind == "mmse":
        return pc.mmse(estimate, snr=mean_snr)
    raise ValueError(f"unknown precoder {kind!r}")


def run_drop(cfg: ScenarioConfig, drop_index: int, _ctx: _DropContext | None = None) -> DropResult:
    """Simulate one drop: draw links + channel (+ CSI error), evaluate every precoder."""
    ctx = _ctx or _DropContext(cfg)
    seed = drop_seed(cfg.master_seed, drop_index)
    rng = np.random.default_rng(seed)

    links = _draw_links(ctx, rng)
    truth = _draw_channel(ctx, links, rng)
    if cfg.tau < 1.0:
        estimate = ch.apply_csi_error(truth, ch.ImperfectCsiConfig(cfg.tau), rng)
    else:
        estimate = truth

    budget = mt.LinkBudget(
        tx_power_dbm=cfg.tx_power_dbm,
        noise_figure_db=cfg.noise_figure_db,
        bandwidth_hz=cfg.bandwidth_hz,
        path_loss_db=np.array([l.path_loss_db for l in links]),
    )
    snrs = mt.snr_linear(budget)
    mean_snr = float(snrs.mean())

    results = {}
    failures = []
    for kind in cfg.precoders:
        try:
            w = _build_precoder(kind, estimate, ctx, mean_snr)
        except pc.SingularChannelError:
            failures.append(kind)
            continue
        h_bar = pc.equivalent_matrix(truth, w)
        s = mt.sinr(h_bar, snrs)
        results[kind] = mt.DropMetrics(
            precoder_kind=kind,
            sinr_db=mt.to_db(s),
            capacity_bps_hz=mt.capacity(s),
            seed=seed,
        )
    return DropResult(drop_index=drop_index, snr_db=mt.to_db(snrs),
                      metrics=results, failures=tuple(failures))


def _run_range(args) -> list:
    cfg, start, stop = args
    ctx = _DropContext(cfg)
    return [run_drop(cfg, i, ctx) for i in range(start, stop)]


def run_experiment(cfg: ScenarioConfig, jobs: int = 0) -> SimulationResult:
    """Run cfg.drops seeded drops, optionally across worker processes.

    jobs <= 1 runs sequentially; results are byte-identical for any jobs value
    because each drop is seeded independently of the sharding.
    """
    validate(cfg)
    t0 = time.perf_counter()
    if jobs is None:
        jobs = 0
    jobs = min(jobs, cfg.drops)
    if jobs > 1:
        bounds = np.linspace(0, cfg.drops, jobs + 1, dtype=int)
        chunks = [(cfg, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if a < b]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_run_range, chunks))
        records = [rec for part in parts for rec in part]
    else:
        ctx = _DropContext(cfg)
        records = [run_drop(cfg, i, ctx) for i in range(cfg.drops)]
    records.sort(key=lambda rec: rec.drop_index)

    failure_counts = {kind: 0 for kind in cfg.precoders}
    for rec in records:
        for kind in rec.failures:
            failure_counts[kind] += 1
    return SimulationResult(config=cfg, records=records, failure_counts=failure_counts,
                            runtime_seconds=time.perf_counter() - t0)


@dataclass(frozen=True)
class SweepPoint:
    tx_power_dbm: float
    precoder_kind: str
    mean_capacity_bps_hz: float
    sum_capacity_bps_hz: float
    samples: int


def sweep_tx_power(cfg: ScenarioConfig, powers_dbm, jobs: int = 0) -> list:
    """Re-run the experiment at each transmit power, channels paired via the seed."""
    points = []
    for power in powers_dbm:
        result = run_experiment(dataclasses.replace(cfg, tx_power_dbm=float(power)), jobs=jobs)
        for kind in cfg.precoders:
            dist = result.distribution(kind, "capacity_bps_hz")
            points.append(SweepPoint(
                tx_power_dbm=float(power),
                precoder_kind=kind,
                mean_capacity_bps_hz=float(dist.sorted_samples.mean()),
                sum_capacity_bps_hz=float(dist.sorted_samples.mean()) * cfg.num_ues,
                samples=dist.count,
            ))
    return points


# --- presets -----------------------------------------------------------------

# The canned experiments run at much narrower bandwidths than the library
# default: at the default power/distance the 1 GHz library default puts every
# link ~23 dB below the noise floor, where all precoders collapse onto each
# other.  Each experiment family pins the noise floor that exposes the regime
# it studies (calibrated at 10k drops with the seeds below; see README
# "Operating point"):
#   fig2a  10 kHz  - SNR high enough that MMSE/ZF separate cleanly from MF/GoB
#   fig2b/c 2 kHz  - interference-limited; beam selection competitive with MF
#   fig3   500 Hz  - headroom so only interference-aware precoders keep scaling
#   fig4/table2 100 kHz - noise/interference crossover where CSI error matters
_PRESET_BANDWIDTH_HZ = {
    "fig2a": 10e3,
    "fig2b": 2e3,
    "fig2c": 2e3,
    "fig3": 500.0,
    "fig4": 100e3,
    "table2": 100e3,
}

_PRESET_SEEDS = {"rayleigh": 7001, "nyu": 7002, "uma": 7003}


@dataclass(frozen=True)
class PresetCell:
    label: str
    config: ScenarioConfig


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    description: str
    cells: tuple
    sweep_powers_dbm: tuple | None = None


def _preset_config(preset_name: str, model: str, tau: float, **overrides) -> ScenarioConfig:
    base = dict(
        bandwidth_hz=_PRESET_BANDWIDTH_HZ[preset_name],
        channel_model=model,
        tau=tau,
        master_seed=_PRESET_SEEDS[model],
    )
    base.update(overrides)
    return dataclasses.replace(ScenarioConfig(), **base)


def _build_presets() -> dict:
    presets = {}
    presets["fig2a"] = ExperimentPreset(
        name="fig2a",
        description="SINR distributions, Rayleigh channel, perfect CSI",
        cells=(PresetCell("", _preset_config("fig2a", "rayleigh", 1.0)),),
    )
    presets["fig2b"] = ExperimentPreset(
        name="fig2b",
        description="SINR distributions, clustered NYU-style channel, perfect CSI",
        cells=(PresetCell("", _preset_config("fig2b", "nyu", 1.0)),),
    )
    presets["fig2c"] = ExperimentPreset(
        name="fig2c",
        description="SINR distributions, clustered UMa-style channel, perfect CSI",
        cells=(PresetCell("", _preset_config("fig2c", "uma", 1.0)),),
    )
    presets["fig3"] = ExperimentPreset(
        name="fig3",
        description="Mean capacity vs transmit power, both clustered models, perfect CSI",
        cells=(PresetCell("nyu", _preset_config("fig3", "nyu", 1.0)),
               PresetCell("uma", _preset_config("fig3", "uma", 1.0))),
        sweep_powers_dbm=tuple(float(p) for p in range(0, 61, 10)),
    )
    # fig4 and table2 are two views of the same four runs (CDF curves vs the
    # median-gap grid), so they share cells, seeds, and operating point; the
    # tau pairs reuse one seed per model so CSI error is the only difference.
    csi_cells = lambda name: (
        PresetCell("nyu_tau1", _preset_config(name, "nyu", 1.0)),
        PresetCell("nyu_tau099", _preset_config(name, "nyu", 0.99)),
        PresetCell("uma_tau1", _preset_config(name, "uma", 1.0)),
        PresetCell("uma_tau099", _preset_config(name, "uma", 0.99)),
    )
    presets["fig4"] = ExperimentPreset(
        name="fig4",
        description="SINR distributions, perfect vs imperfect CSI (tau = 0.99), both clustered models",
        cells=csi_cells("fig4"),
    )
    presets["table2"] = ExperimentPreset(
        name="table2",
        description="Median-gap grid: {NYU, UMa} x {tau = 1, tau = 0.99}",
        cells=csi_cells("table2"),
    )
    return presets


_PRESETS = _build_presets()


def preset_names() -> list:
    return sorted(_PRESETS)


def preset(name: str) -> ExperimentPreset:
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
