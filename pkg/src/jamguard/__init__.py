"""Monte-Carlo simulator of a single-cell mmWave massive-MIMO uplink under a
pilot-attacking jammer.

The library covers the full chain: sparse angular-domain channels on a fixed
direction grid, pilot-phase and data-phase synthesis, per-direction energy
detection of active paths, jamming detection through directions common to
many pilots, jammer-excluding LMMSE channel estimation with MRC combining,
and reproducible experiment campaigns over jammer power, angular spread, and
array size.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("jamguard")
except PackageNotFoundError:  # running from a source tree without install
    __version__ = "0.0.0"

from .channel import (
    ChannelRealization,
    TerminalGeometry,
    draw_channel,
    sample_terminal,
    terminal_from_angle,
)
from .config import ConfigurationError, SystemConfig, load_config
from .detection import (
    EnergyStatistics,
    RpEstimate,
    compute_energy_statistics,
    energy_statistic,
    estimate_rp_sets,
    threshold_for_fap,
    to_angular_domain,
)
from .estimators import JammerExcludingChannelEstimator, JammingDetector
from .experiments import (
    ResultRow,
    ResultTable,
    run_cdp_experiment,
    run_fap_experiment,
    run_se_vs_antennas,
    run_se_vs_jammer_power,
    run_validation_suite,
)
from .grid import AngularGrid, ArrayGeometry, build_angular_grid, steering_vector
from .jamming import (
    DetectionOutcome,
    collision_probability_bound,
    detect_jammer,
    rp_occurrence_counts,
)
from .simulation import full_fidelity_trial, trial_generator
from .suppression import (
    ChannelEstimate,
    achievable_rate,
    baseline_estimator_no_suppression,
    gain_mean_square,
    lmmse_estimate,
    mrc_combine,
    sinr_closed_form,
    user_rp_set,
)
from .transmission import (
    DataObservation,
    JammerPilot,
    PilotBook,
    TrainingObservation,
    generate_jammer_pilot,
    generate_pilot_book,
    simulate_data,
    simulate_training,
)

__all__ = [
    "AngularGrid",
    "ArrayGeometry",
    "ChannelEstimate",
    "ChannelRealization",
    "ConfigurationError",
    "DataObservation",
    "DetectionOutcome",
    "EnergyStatistics",
    "JammerExcludingChannelEstimator",
    "JammerPilot",
    "JammingDetector",
    "PilotBook",
    "ResultRow",
    "ResultTable",
    "RpEstimate",
    "SystemConfig",
    "TerminalGeometry",
    "TrainingObservation",
    "achievable_rate",
    "baseline_estimator_no_suppression",
    "build_angular_grid",
    "collision_probability_bound",
    "compute_energy_statistics",
    "detect_jammer",
    "draw_channel",
    "energy_statistic",
    "estimate_rp_sets",
    "full_fidelity_trial",
    "gain_mean_square",
    "generate_jammer_pilot",
    "generate_pilot_book",
    "lmmse_estimate",
    "load_config",
    "mrc_combine",
    "rp_occurrence_counts",
    "run_cdp_experiment",
    "run_fap_experiment",
    "run_se_vs_antennas",
    "run_se_vs_jammer_power",
    "run_validation_suite",
    "sample_terminal",
    "simulate_data",
    "simulate_training",
    "sinr_closed_form",
    "steering_vector",
    "terminal_from_angle",
    "threshold_for_fap",
    "to_angular_domain",
    "trial_generator",
    "user_rp_set",
]
