"""Single-trial pipelines.

Two synthesis routes produce the same statistics:

* the fast angular route used by experiment campaigns — because the grid
  basis is unitary and pilots are orthonormal, the de-spread pilot
  observation in the angular domain is exactly
  sqrt(tau p mu_k) g_k + sqrt(tau q mu_w) gamma_k g_w + CN(0, sigma_z^2)
  per direction, so trials never form antenna-domain matrices;
* the full antenna-domain route, which builds raw receive matrices,
  de-spreads, projects, and estimates — used by the single-trial inspection
  command and as the reference for equivalence tests.

Per-trial generators come from a master seed and the trial index only, so any
partitioning of trials over workers reproduces identical draws.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import TerminalGeometry, draw_channel, sample_terminal
from .config import SystemConfig
from .detection import (
    compute_energy_statistics,
    energy_statistic,
    estimate_rp_sets,
    threshold_for_fap,
    to_angular_domain,
)
from .grid import AngularGrid, ArrayGeometry, build_angular_grid
from .jamming import detect_jammer, rp_occurrence_counts
from .suppression import (
    FixedSupportScenario,
    achievable_rate,
    conditional_moment_terms,
    gain_mean_square,
    lmmse_estimate,
    mrc_combine,
    overlap_count_matrix,
    sinr_closed_form,
    sinr_from_moments,
    user_rp_set,
)
from .transmission import (
    complex_noise,
    generate_jammer_pilot,
    generate_pilot_book,
    simulate_data,
    simulate_training,
)


def trial_generator(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one trial."""
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    )


def resolve_threshold(config: SystemConfig, detection_subcarriers: int) -> float:
    """Explicit threshold if configured, else derived from the FA target."""
    if config.threshold is not None:
        return config.threshold
    return threshold_for_fap(
        detection_subcarriers, config.noise_power, config.fap_target
    )


@dataclass(frozen=True)
class TerminalDraw:
    users: tuple[TerminalGeometry, ...]
    jammer: TerminalGeometry | None


def draw_terminals(
    rng: np.random.Generator,
    grid: AngularGrid,
    config: SystemConfig,
    with_jammer: bool,
) -> TerminalDraw:
    users = tuple(
        sample_terminal(grid, config.angular_spread, config.user_gain, rng)
        for _ in range(config.users)
    )
    jammer = None
    if with_jammer:
        jammer = sample_terminal(grid, config.jammer_spread, config.jammer_gain, rng)
    return TerminalDraw(users=users, jammer=jammer)


def angular_pilot_observations(
    rng: np.random.Generator,
    grid: AngularGrid,
    draw: TerminalDraw,
    config: SystemConfig,
    subcarriers: int,
) -> tuple[np.ndarray, np.ndarray | None]:
    """De-spread pilot observations in the angular domain.

    Returns (without_jammer, with_jammer); the two share every user gain and
    noise draw, so downstream comparisons are paired.  The second element is
    None when the draw holds no jammer.
    """
    m = grid.size
    tau = config.pilot_length
    base = complex_noise(rng, (config.users, m, subcarriers), config.noise_power)
    for k, terminal in enumerate(draw.users):
        gains = draw_channel(terminal, subcarriers, rng).gains
        scale = math.sqrt(tau * config.pilot_power * terminal.power_scale)
        base[k, terminal.support, :] += scale * gains
    if draw.jammer is None:
        return base, None
    jammer_gains = draw_channel(draw.jammer, subcarriers, rng).gains
    correlations = complex_noise(rng, (config.users, subcarriers), 1.0 / tau)
    scale = math.sqrt(
        tau * config.jammer_training_power * draw.jammer.power_scale
    )
    jammed = base.copy()
    jammed[:, draw.jammer.support, :] += (
        scale * correlations[:, None, :] * jammer_gains[None, :, :]
    )
    return base, jammed


def detection_flags(
    observations: np.ndarray,
    thresholds: dict[int, float],
    combos: list[tuple[int, int]],
) -> np.ndarray:
    """Jammer verdicts for (min_common_pilots, detection_subcarriers) combos.

    All combos share the one synthesized observation block; smaller subcarrier
    counts evaluate on a prefix, so combos are paired within the trial.
    """
    counts_by_nd: dict[int, np.ndarray] = {}
    for n_d in {nd for _, nd in combos}:
        energies = energy_statistic(observations[:, :, :n_d])
        counts_by_nd[n_d] = (energies > thresholds[n_d]).sum(axis=0)
    flags = np.empty(len(combos), dtype=bool)
    for j, (g, n_d) in enumerate(combos):
        flags[j] = bool(np.any(counts_by_nd[n_d] >= g))
    return flags


def detection_trial(
    config: SystemConfig,
    grid: AngularGrid,
    rng: np.random.Generator,
    thresholds: dict[int, float],
    combos: list[tuple[int, int]],
    with_jammer: bool,
) -> np.ndarray:
    """One detection trial; returns the per-combo verdicts."""
    draw = draw_terminals(rng, grid, config, with_jammer)
    subcarriers = max(nd for _, nd in combos)
    base, jammed = angular_pilot_observations(rng, grid, draw, config, subcarriers)
    observations = jammed if with_jammer else base
    return detection_flags(observations, thresholds, combos)


def spectral_efficiency_trial(
    config: SystemConfig,
    grid: AngularGrid,
    rng: np.random.Generator,
    threshold: float,
) -> np.ndarray:
    """Sum spectral efficiency of three paired arms over one draw.

    Returns [no_jammer, suppressed, unsuppressed].  The no-jammer arm runs
    the identical pipeline on the jammer-free observation; the suppressed arm
    excludes the common directions before estimation; the unsuppressed arm
    keeps the contaminated detected sets, and its SINR is evaluated through
    the exact conditional moments since the jammer leaks into the combiner.
    """
    draw = draw_terminals(rng, grid, config, with_jammer=True)
    base, jammed = angular_pilot_observations(
        rng, grid, draw, config, config.detection_subcarriers
    )
    k_users = config.users
    sigma2 = config.noise_power
    mu = np.array([t.power_scale for t in draw.users])
    xi = np.array(
        [
            gain_mean_square(config.pilot_power, config.pilot_length, m, sigma2)
            for m in mu
        ]
    )
    data_powers = np.full(k_users, config.data_power)

    def pipeline(observations: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        active = energy_statistic(observations) > threshold  # (users, directions)
        common = active.sum(axis=0) >= config.min_common_pilots
        return active, common

    def closed_form_sum_se(estimator_masks: np.ndarray) -> float:
        counts = estimator_masks.astype(np.int64) @ estimator_masks.T.astype(np.int64)
        rho = sinr_closed_form(data_powers, mu, xi, counts, sigma2)
        rates = achievable_rate(rho, config.pilot_length, config.coherence_block)
        return float(np.sum(rates))

    active_clean, common_clean = pipeline(base)
    active_jam, common_jam = pipeline(jammed)
    se_no_jammer = closed_form_sum_se(active_clean & ~common_clean)
    se_suppressed = closed_form_sum_se(active_jam & ~common_jam)

    user_supports = tuple(t.support for t in draw.users)
    pilot_powers = np.full(k_users, config.pilot_power)
    se_unsuppressed = 0.0
    for k in range(k_users):
        scenario = FixedSupportScenario(
            grid_size=grid.size,
            user_supports=user_supports,
            estimator_support=np.nonzero(active_jam[k])[0],
            target_user=k,
            pilot_powers=pilot_powers,
            data_powers=data_powers,
            power_scales=mu,
            pilot_length=config.pilot_length,
            noise_power=sigma2,
            jammer_support=draw.jammer.support,
            jammer_power_scale=draw.jammer.power_scale,
            jammer_training_power=config.jammer_training_power,
            jammer_data_power=config.jammer_data_power,
        )
        rho = sinr_from_moments(conditional_moment_terms(scenario), scenario)
        se_unsuppressed += float(
            achievable_rate(rho, config.pilot_length, config.coherence_block)
        )
    return np.array([se_no_jammer, se_suppressed, se_unsuppressed])


def full_fidelity_trial(config: SystemConfig, seed: int) -> dict:
    """Antenna-domain end-to-end trial with every intermediate retained.

    Builds raw receive matrices, de-spreads, detects, estimates, and decodes
    one data symbol per subcarrier.  Returns a JSON-ready dictionary.
    """
    rng = trial_generator(seed, 0)
    grid = build_angular_grid(ArrayGeometry(config.antennas))
    draw = draw_terminals(rng, grid, config, with_jammer=True)
    n_sub = config.estimated_subcarriers
    channels = [draw_channel(t, n_sub, rng) for t in draw.users]
    jammer_channel = draw_channel(draw.jammer, n_sub, rng)
    h_users = np.stack([c.antenna_vectors(grid) for c in channels])
    h_jammer = jammer_channel.antenna_vectors(grid)

    pilots = generate_pilot_book(config.pilot_length)
    jammer_pilot = generate_jammer_pilot(rng, pilots, n_sub)
    training = simulate_training(
        rng,
        h_users,
        config.pilot_power,
        pilots,
        config.noise_power,
        jammer_channel=h_jammer,
        jammer_pilot=jammer_pilot,
        jammer_power=config.jammer_training_power,
    )
    angular = np.stack(
        [to_angular_domain(y, grid) for y in training.despread]
    )
    stats = compute_energy_statistics(
        angular[:, :, : config.detection_subcarriers],
        config.noise_power,
        fap_target=config.fap_target,
        threshold=config.threshold,
    )
    rp = estimate_rp_sets(stats)
    counts = rp_occurrence_counts(rp.supports, grid.size)
    outcome = detect_jammer(counts, config.min_common_pilots)
    user_sets = [user_rp_set(s, outcome.common_set) for s in rp.supports]

    mu = [t.power_scale for t in draw.users]
    estimates = [
        lmmse_estimate(
            training.despread[k],
            user_sets[k],
            grid,
            config.pilot_power,
            config.pilot_length,
            mu[k],
            config.noise_power,
        )
        for k in range(config.users)
    ]
    overlap = overlap_count_matrix(user_sets, grid.size)
    rho = sinr_closed_form(
        np.full(config.users, config.data_power),
        np.array(mu),
        np.array([e.gain_mean_square for e in estimates]),
        overlap,
        config.noise_power,
    )
    rates = achievable_rate(rho, config.pilot_length, config.coherence_block)

    data = simulate_data(
        rng,
        h_users,
        config.data_power,
        config.noise_power,
        jammer_channel=h_jammer,
        jammer_power=config.jammer_data_power,
    )
    decoded = mrc_combine(estimates, data.received)

    return {
        "seed": seed,
        "threshold": stats.threshold,
        "jammer_detected": outcome.jammer_detected,
        "user_supports": [t.support.tolist() for t in draw.users],
        "jammer_support": draw.jammer.support.tolist(),
        "detected_supports": [s.tolist() for s in rp.supports],
        "jammer_common_set": outcome.common_set.tolist(),
        "user_rp_sets": [s.tolist() for s in user_sets],
        "degenerate_users": [bool(e.degenerate) for e in estimates],
        "sinr": [float(r) for r in rho],
        "rates": [float(r) for r in rates],
        "sum_se": float(np.sum(rates)),
        "decoded_symbol_power": [float(np.mean(np.abs(row) ** 2)) for row in decoded],
        "config": config.snapshot(),
    }
