"""mmsim: Monte Carlo link-level simulator for multi-user MIMO precoding at mmWave."""

__version__ = "0.1.0"

from .antenna import (  # noqa: F401
    ArrayGeometry,
    Codebook,
    Direction,
    ElementPatternParams,
    build_codebook,
    element_gain,
    field_factor,
    steering_vector,
)
from .channel import (  # noqa: F401
    ChannelMatrix,
    ClusterSet,
    ImperfectCsiConfig,
    LinkState,
    apply_csi_error,
    assemble_channel_vector,
    condition_draw,
    draw_clustered,
    draw_rayleigh,
    path_loss,
)
from .config import ConfigError, ScenarioConfig, default_config, load_config  # noqa: F401
from .metrics import (  # noqa: F401
    EmpiricalDistribution,
    LinkBudget,
    capacity,
    ecdf,
    median_gap,
    percentile,
    sinr,
    snr_linear,
)
from .precoding import (  # noqa: F401
    EquivalentMatrix,
    PrecodingMatrix,
    SingularChannelError,
    equivalent_matrix,
    gob_power,
    gob_slnr,
    mf,
    mmse,
    normalize_frobenius,
    zf,
)
from .sim import (  # noqa: F401
    ExperimentPreset,
    SimulationResult,
    drop_seed,
    preset,
    preset_names,
    run_drop,
    run_experiment,
    splitmix64,
    sweep_tx_power,
)
