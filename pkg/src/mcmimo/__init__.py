"""Multi-cell TDD MIMO link simulator.

Uplink training with reused pilots, MMSE channel estimation, linear downlink
precoding (ZF / GPS / multi-cell MMSE), and achievable-rate evaluation by
Monte Carlo and by closed form.
"""

__version__ = "0.1.0"

from .channel import ChannelSet, TrainingObservation, draw_channels, substream, synth_training
from .errors import (
    InvalidScenario,
    InvalidSpec,
    McMimoError,
    PreconditionViolated,
    RankDeficient,
    ShapeMismatch,
)
from .estimation import (
    ChannelEstimateSet,
    ErrorCovScalars,
    error_cov_matrices,
    error_cov_scalars,
    mmse_estimate,
)
from .experiments import (
    CSV_HEADER,
    EXPERIMENT_NAMES,
    ExperimentSpec,
    ResultRow,
    read_results,
    run_experiment,
    write_results,
)
from .model import (
    GainTensor,
    PilotBook,
    ScenarioSpec,
    SystemConfig,
    build_scenario,
    db_to_linear,
    linear_to_db,
    load_config_file,
)
from .precoding import (
    Precoder,
    PrecoderParams,
    gps_precoder,
    mcmmse_precoder,
    objective_value,
    zf_precoder,
)
from .rates import (
    RateReport,
    ThetaMoments,
    asymptotic_rate,
    closed_form_rate,
    monte_carlo_rates,
    rates_from_moments,
    shared_pilot_gain_moments,
    theta_moments,
)
