"""Experiment campaigns: detection-probability, false-alarm, and spectral-
efficiency sweeps, plus a self-contained validation suite.

Reproducibility contract: a campaign is fully determined by (config, seed).
Trials are partitioned into fixed-size chunks indexed by trial number; chunk
results are concatenated in chunk order, so the output is byte-identical for
any worker count.  Sweep points share per-trial seed streams (common random
numbers), which pairs the curves across the sweep.
"""

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from joblib import Parallel, delayed

from .channel import draw_channel, sample_terminal, terminal_from_angle
from .config import ConfigurationError, SystemConfig, dbw_to_watts
from .detection import threshold_for_fap
from .grid import ArrayGeometry, build_angular_grid
from .jamming import collision_probability_bound
from .simulation import (
    detection_trial,
    resolve_threshold,
    spectral_efficiency_trial,
    trial_generator,
)
from .suppression import (
    FixedSupportScenario,
    conditional_moment_terms,
    gain_mean_square,
    lmmse_estimate,
    overlap_count_matrix,
    sinr_closed_form,
    sinr_empirical_moments,
    sinr_from_moments,
)
from .transmission import complex_noise

_CHUNK_TRIALS = 50

DEFAULT_JAMMER_POWER_SWEEP_DBW = tuple(np.arange(-20.0, 10.0 + 1e-9, 2.5))
DEFAULT_ANGULAR_SPREAD_SWEEP = tuple(np.pi * k / 36.0 for k in range(1, 7))
DEFAULT_ANTENNA_SWEEP = (50, 100, 150, 200, 250, 300, 350, 400)
DEFAULT_MIN_COMMON_PILOTS = (6, 8, 10)
DEFAULT_DETECTION_SUBCARRIERS = (1, 20)


@dataclass(frozen=True)
class ResultRow:
    sweep_param: str
    sweep_value: float
    arm: str
    metric: str
    mean: float
    stderr: float
    trials: int


@dataclass
class ResultTable:
    """Rows of aggregated sweep results plus reproduction metadata."""

    rows: list[ResultRow]
    metadata: dict = field(default_factory=dict)

    CSV_HEADER = "sweep_param,sweep_value,arm,metric,mean,stderr,trials"

    def csv_text(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.sweep_param},{float(r.sweep_value)!r},{r.arm},{r.metric},"
                f"{float(r.mean)!r},{float(r.stderr)!r},{int(r.trials)}"
            )
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str | Path, stem: str) -> tuple[Path, Path]:
        """Write <stem>.csv and <stem>.meta.json; returns both paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{stem}.csv"
        csv_path.write_text(self.csv_text())
        meta_path = out / f"{stem}.meta.json"
        meta_path.write_text(json.dumps(self.metadata, indent=2, sort_keys=True) + "\n")
        return csv_path, meta_path


def _mean_stderr(samples: np.ndarray) -> tuple[float, float]:
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    if n < 2:
        return float(samples.mean()) if n else 0.0, 0.0
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n))


def _metadata(
    kind: str,
    config: SystemConfig,
    seed: int,
    trials: int,
    sweep_param: str,
    sweep_values: Sequence[float],
) -> dict:
    from . import __version__

    return {
        "experiment": kind,
        "seed": int(seed),
        "trials_per_point": int(trials),
        "sweep_param": sweep_param,
        "sweep_values": [float(v) for v in sweep_values],
        "config": config.snapshot(),
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
    }


def _run_chunks(
    worker: Callable[..., np.ndarray],
    trials: int,
    threads: int,
    *args,
) -> np.ndarray:
    """Run per-trial work in fixed chunks; concatenation order is fixed by
    trial index, never by completion order."""
    bounds = [
        (start, min(start + _CHUNK_TRIALS, trials))
        for start in range(0, trials, _CHUNK_TRIALS)
    ]
    parts = Parallel(n_jobs=threads)(
        delayed(worker)(*args, start, stop) for start, stop in bounds
    )
    return np.concatenate(parts, axis=0)


def _detection_chunk(
    config: SystemConfig,
    combos: list[tuple[int, int]],
    with_jammer: bool,
    master_seed: int,
    start: int,
    stop: int,
) -> np.ndarray:
    grid = build_angular_grid(ArrayGeometry(config.antennas))
    thresholds = {
        n_d: resolve_threshold(config, n_d) for n_d in {nd for _, nd in combos}
    }
    out = np.empty((stop - start, len(combos)), dtype=bool)
    for offset, trial in enumerate(range(start, stop)):
        rng = trial_generator(master_seed, trial)
        out[offset] = detection_trial(
            config, grid, rng, thresholds, combos, with_jammer
        )
    return out


def _se_chunk(
    config: SystemConfig, master_seed: int, start: int, stop: int
) -> np.ndarray:
    grid = build_angular_grid(ArrayGeometry(config.antennas))
    threshold = resolve_threshold(config, config.detection_subcarriers)
    out = np.empty((stop - start, 3))
    for offset, trial in enumerate(range(start, stop)):
        rng = trial_generator(master_seed, trial)
        out[offset] = spectral_efficiency_trial(config, grid, rng, threshold)
    return out


def run_cdp_experiment(
    config: SystemConfig,
    *,
    jammer_powers_dbw: Sequence[float] = DEFAULT_JAMMER_POWER_SWEEP_DBW,
    min_common_pilots: Sequence[int] = DEFAULT_MIN_COMMON_PILOTS,
    detection_subcarriers: Sequence[int] | None = None,
    trials: int = 1000,
    seed: int | None = None,
    threads: int = 1,
) -> ResultTable:
    """Correct-detection probability versus jammer training power.

    One curve per (min_common_pilots, detection_subcarriers) combination; all
    combinations share each trial's draws.  The default subcarrier counts are
    1 and the config's full detection window.
    """
    seed = config.seed if seed is None else seed
    if detection_subcarriers is None:
        detection_subcarriers = sorted({1, config.detection_subcarriers})
    for n_d in detection_subcarriers:
        if not 1 <= n_d <= config.detection_subcarriers:
            raise ConfigurationError(
                f"detection_subcarriers value {n_d} outside "
                f"[1, {config.detection_subcarriers}]"
            )
    combos = [(g, nd) for nd in detection_subcarriers for g in min_common_pilots]
    rows = []
    for value in jammer_powers_dbw:
        point = config.replace(jammer_training_power=dbw_to_watts(value))
        flags = _run_chunks(_detection_chunk, trials, threads, point, combos, True, seed)
        for j, (g, nd) in enumerate(combos):
            mean, se = _mean_stderr(flags[:, j])
            rows.append(
                ResultRow("jammer_power_dbw", float(value), f"g{g}_nd{nd}", "cdp", mean, se, trials)
            )
    meta = _metadata("cdp_vs_jammer_power", config, seed, trials, "jammer_power_dbw", jammer_powers_dbw)
    return ResultTable(rows, meta)


def run_fap_experiment(
    config: SystemConfig,
    *,
    angular_spreads: Sequence[float] = DEFAULT_ANGULAR_SPREAD_SWEEP,
    min_common_pilots: Sequence[int] = DEFAULT_MIN_COMMON_PILOTS,
    trials: int = 1000,
    seed: int | None = None,
    threads: int = 1,
) -> ResultTable:
    """False-alarm probability versus users' angular spread (no jammer)."""
    seed = config.seed if seed is None else seed
    n_d = config.detection_subcarriers
    combos = [(g, n_d) for g in min_common_pilots]
    rows = []
    for value in angular_spreads:
        point = config.replace(angular_spread=float(value))
        flags = _run_chunks(_detection_chunk, trials, threads, point, combos, False, seed)
        for j, (g, _) in enumerate(combos):
            mean, se = _mean_stderr(flags[:, j])
            rows.append(
                ResultRow("angular_spread", float(value), f"g{g}", "fap", mean, se, trials)
            )
    meta = _metadata("fap_vs_spread", config, seed, trials, "angular_spread", angular_spreads)
    return ResultTable(rows, meta)


_SE_ARMS = ("no_jammer", "suppressed", "unsuppressed")


def _se_rows(
    samples: np.ndarray, sweep_param: str, value: float, trials: int
) -> list[ResultRow]:
    rows = []
    for column, arm in enumerate(_SE_ARMS):
        mean, se = _mean_stderr(samples[:, column])
        rows.append(ResultRow(sweep_param, float(value), arm, "sum_se", mean, se, trials))
    return rows


def run_se_vs_jammer_power(
    config: SystemConfig,
    *,
    jammer_powers_dbw: Sequence[float] = DEFAULT_JAMMER_POWER_SWEEP_DBW,
    trials: int = 500,
    seed: int | None = None,
    threads: int = 1,
) -> ResultTable:
    """Sum spectral efficiency versus jammer power (training = data power)."""
    seed = config.seed if seed is None else seed
    rows = []
    for value in jammer_powers_dbw:
        watts = dbw_to_watts(value)
        point = config.replace(jammer_training_power=watts, jammer_data_power=watts)
        samples = _run_chunks(_se_chunk, trials, threads, point, seed)
        rows.extend(_se_rows(samples, "jammer_power_dbw", value, trials))
    meta = _metadata("se_vs_jammer_power", config, seed, trials, "jammer_power_dbw", jammer_powers_dbw)
    return ResultTable(rows, meta)


def run_se_vs_antennas(
    config: SystemConfig,
    *,
    antenna_counts: Sequence[int] = DEFAULT_ANTENNA_SWEEP,
    trials: int = 500,
    seed: int | None = None,
    threads: int = 1,
) -> ResultTable:
    """Sum spectral efficiency versus array size."""
    seed = config.seed if seed is None else seed
    rows = []
    for value in antenna_counts:
        point = config.replace(antennas=int(value))
        samples = _run_chunks(_se_chunk, trials, threads, point, seed)
        rows.extend(_se_rows(samples, "antennas", value, trials))
    meta = _metadata("se_vs_antennas", config, seed, trials, "antennas", antenna_counts)
    return ResultTable(rows, meta)


def empirical_support_collision_rates(
    config: SystemConfig,
    group_sizes: Sequence[int],
    trials: int,
    rng: np.random.Generator,
    chunk: int = 20000,
) -> np.ndarray:
    """Fraction of trials in which some direction lies in >= g users' true
    angular windows, for each g in group_sizes.

    Vectorized over trials: each user's support is a contiguous index range,
    so per-direction occupancy is an interval-stabbing count.
    """
    grid = build_angular_grid(ArrayGeometry(config.antennas))
    angles = grid.sampled_angles
    half = 0.5 * config.angular_spread
    lo_lim, hi_lim = -np.pi / 2 + half, np.pi / 2 - half
    hits = np.zeros(len(group_sizes), dtype=np.int64)
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        theta = rng.uniform(lo_lim, hi_lim, size=(n, config.users))
        lo = np.searchsorted(angles, theta - half, side="left")
        hi = np.searchsorted(angles, theta + half, side="right")
        if np.any(lo == hi):
            # empty windows are rejected and redrawn one by one (rare; only
            # possible when the grid is coarse near endfire)
            rows, cols = np.nonzero(lo == hi)
            for r, c in zip(rows, cols):
                while lo[r, c] == hi[r, c]:
                    t = rng.uniform(lo_lim, hi_lim)
                    lo[r, c] = np.searchsorted(angles, t - half, side="left")
                    hi[r, c] = np.searchsorted(angles, t + half, side="right")
        occupancy = np.zeros((n, grid.size + 1), dtype=np.int64)
        row_index = np.repeat(np.arange(n), config.users)
        np.add.at(occupancy, (row_index, lo.ravel()), 1)
        np.add.at(occupancy, (row_index, hi.ravel()), -1)
        peak = np.cumsum(occupancy[:, :-1], axis=1).max(axis=1)
        for j, g in enumerate(group_sizes):
            hits[j] += int(np.count_nonzero(peak >= g))
        done += n
    return hits / float(trials)


@dataclass(frozen=True)
class ValidationCheck:
    """One property check: passed verdict plus the slack to its limit.

    ``slack`` is (allowed - observed) in the check's own units; negative
    slack means failure.
    """

    name: str
    passed: bool
    slack: float
    samples: int


def _threshold_checks(config: SystemConfig) -> list[ValidationCheck]:
    checks = []
    for eta in (1e-2, 1e-3):
        derived = threshold_for_fap(1, config.noise_power, eta)
        closed = -config.noise_power * math.log(eta)
        rel = abs(derived - closed) / closed
        checks.append(
            ValidationCheck(f"threshold_closed_form_eta{eta:g}", rel <= 1e-9, 1e-9 - rel, 0)
        )
    return checks


def _false_alarm_checks(config: SystemConfig, rng: np.random.Generator) -> list[ValidationCheck]:
    checks = []
    samples = 200_000
    sigma2 = config.noise_power
    for eta in (1e-2, 1e-3):
        for n_d in (1, 20):
            threshold = threshold_for_fap(n_d, sigma2, eta)
            energy = np.sum(
                np.abs(complex_noise(rng, (samples, n_d), sigma2)) ** 2, axis=1
            )
            rate = float(np.mean(energy > threshold))
            allowed = eta + 3.0 * math.sqrt(eta * (1.0 - eta) / samples)
            checks.append(
                ValidationCheck(
                    f"false_alarm_eta{eta:g}_nd{n_d}", rate <= allowed, allowed - rate, samples
                )
            )
    return checks


def _collision_bound_checks(config: SystemConfig, rng: np.random.Generator) -> list[ValidationCheck]:
    group_sizes = (2, 3, 4)
    trials = 100_000
    rates = empirical_support_collision_rates(config, group_sizes, trials, rng)
    checks = []
    for g, rate in zip(group_sizes, rates):
        bound = collision_probability_bound(config.users, g, config.angular_spread)
        allowed = bound + 3.0 * math.sqrt(max(rate * (1.0 - rate), 1e-12) / trials)
        checks.append(
            ValidationCheck(f"collision_bound_g{g}", rate <= allowed, allowed - rate, trials)
        )
    return checks


def _moment_scenario(config: SystemConfig) -> FixedSupportScenario:
    """Fixed supports for moment validation: the target user partially
    overlaps a neighbour, and the jammer is disjoint from the target."""
    grid = build_angular_grid(ArrayGeometry(config.antennas))
    spread = config.angular_spread
    target = terminal_from_angle(grid, -0.5, spread)
    neighbour = terminal_from_angle(grid, -0.5 + 0.6 * spread, spread)
    far = terminal_from_angle(grid, 0.9, spread)
    jammer = terminal_from_angle(grid, 0.3, spread)
    users = (target, neighbour, far)
    k = len(users)
    return FixedSupportScenario(
        grid_size=grid.size,
        user_supports=tuple(t.support for t in users),
        estimator_support=target.support,
        target_user=0,
        pilot_powers=np.full(k, config.pilot_power),
        data_powers=np.full(k, config.data_power),
        power_scales=np.array([t.power_scale for t in users]),
        pilot_length=config.pilot_length,
        noise_power=config.noise_power,
        jammer_support=jammer.support,
        jammer_power_scale=jammer.power_scale,
        jammer_training_power=config.jammer_training_power,
        jammer_data_power=config.jammer_data_power,
    )


def _moment_checks(config: SystemConfig, rng: np.random.Generator) -> list[ValidationCheck]:
    scenario = _moment_scenario(config)
    trials = 20_000
    mc = sinr_empirical_moments(scenario, trials, rng)
    mu_k = scenario.power_scales[0]
    xi = gain_mean_square(
        scenario.pilot_powers[0], scenario.pilot_length, mu_k, scenario.noise_power
    )
    own = scenario.estimator_support.size
    checks = []

    expected_mean = mu_k * xi * own
    gap = abs(mc.desired_mean - expected_mean)
    checks.append(
        ValidationCheck("moment_desired_mean", gap <= 3 * mc.desired_mean_se, 3 * mc.desired_mean_se - gap, trials)
    )
    expected_var = mu_k**2 * own * xi**2
    gap = abs(mc.gain_variance - expected_var)
    checks.append(
        ValidationCheck("moment_gain_variance", gap <= 3 * mc.gain_variance_se, 3 * mc.gain_variance_se - gap, trials)
    )
    shared = np.intersect1d(scenario.estimator_support, scenario.user_supports[1]).size
    expected_cross = mu_k * scenario.power_scales[1] * xi * shared
    gap = abs(mc.inter_user[1] - expected_cross)
    checks.append(
        ValidationCheck("moment_inter_user", gap <= 3 * mc.inter_user_se[1], 3 * mc.inter_user_se[1] - gap, trials)
    )
    checks.append(
        ValidationCheck("moment_jammer_null", mc.jammer_power == 0.0, -mc.jammer_power, trials)
    )
    expected_noise = mu_k * own * xi * scenario.noise_power
    gap = abs(mc.noise_power - expected_noise)
    checks.append(
        ValidationCheck("moment_noise", gap <= 3 * mc.noise_power_se, 3 * mc.noise_power_se - gap, trials)
    )

    # closed-form SINR against the moment assembly on jammer-free supports
    rho_moments = sinr_from_moments(conditional_moment_terms(scenario), scenario)
    counts = overlap_count_matrix(
        [scenario.estimator_support, scenario.user_supports[1], scenario.user_supports[2]],
        scenario.grid_size,
    )
    xis = np.array(
        [
            gain_mean_square(p, scenario.pilot_length, m, scenario.noise_power)
            for p, m in zip(scenario.pilot_powers, scenario.power_scales)
        ]
    )
    rho_closed = sinr_closed_form(
        scenario.data_powers, scenario.power_scales, xis, counts, scenario.noise_power
    )[0]
    rel = abs(rho_moments - rho_closed) / rho_closed
    checks.append(ValidationCheck("sinr_forms_agree", rel <= 1e-3, 1e-3 - rel, 0))
    return checks


def _jammer_null_checks(config: SystemConfig, rng: np.random.Generator) -> list[ValidationCheck]:
    grid = build_angular_grid(ArrayGeometry(config.antennas))
    worst = 0.0
    instances = 200
    produced = 0
    while produced < instances:
        user = sample_terminal(grid, config.angular_spread, config.user_gain, rng)
        jammer = sample_terminal(grid, config.jammer_spread, config.jammer_gain, rng)
        if np.intersect1d(user.support, jammer.support).size:
            continue
        produced += 1
        despread = complex_noise(rng, (grid.size, 1), config.noise_power)
        despread[user.support] += math.sqrt(
            config.pilot_length * config.pilot_power * user.power_scale
        ) * draw_channel(user, 1, rng).gains
        estimate = lmmse_estimate(
            grid.basis @ despread,
            user.support,
            grid,
            config.pilot_power,
            config.pilot_length,
            user.power_scale,
            config.noise_power,
        )
        h_jammer = draw_channel(jammer, 1, rng).antenna_vectors(grid)
        overlap = abs(np.vdot(estimate.channel, h_jammer))
        scale = np.linalg.norm(estimate.channel) * np.linalg.norm(h_jammer)
        worst = max(worst, overlap / scale)
    return [ValidationCheck("exact_jammer_null", worst <= 1e-10, 1e-10 - worst, instances)]


def run_validation_suite(config: SystemConfig, *, seed: int | None = None) -> ResultTable:
    """Run every property check and report pass/fail with slack margins.

    The ``stderr`` column carries the slack (allowed minus observed); the
    ``mean`` column is 1.0 for pass, 0.0 for fail.
    """
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0x5EED,)))
    checks: list[ValidationCheck] = []
    checks.extend(_threshold_checks(config))
    checks.extend(_false_alarm_checks(config, rng))
    checks.extend(_collision_bound_checks(config, rng))
    checks.extend(_moment_checks(config, rng))
    checks.extend(_jammer_null_checks(config, rng))
    rows = [
        ResultRow("check", float(i), c.name, "pass", 1.0 if c.passed else 0.0, c.slack, c.samples)
        for i, c in enumerate(checks)
    ]
    meta = _metadata("validation_suite", config, seed, 0, "check", list(range(len(checks))))
    return ResultTable(rows, meta)
