import json
import math

import numpy as np
import pytest

from jamguard.channel import draw_channel, terminal_from_angle
from jamguard.detection import threshold_for_fap, to_angular_domain
from jamguard.grid import ArrayGeometry, build_angular_grid
from jamguard.simulation import (
    angular_pilot_observations,
    detection_flags,
    detection_trial,
    draw_terminals,
    full_fidelity_trial,
    resolve_threshold,
    spectral_efficiency_trial,
    trial_generator,
)
from jamguard.transmission import (
    generate_jammer_pilot,
    generate_pilot_book,
    simulate_training,
)


def test_trial_generator_reproducible_and_distinct():
    a = trial_generator(7, 3).standard_normal(5)
    b = trial_generator(7, 3).standard_normal(5)
    c = trial_generator(7, 4).standard_normal(5)
    d = trial_generator(8, 3).standard_normal(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_resolve_threshold(default_config):
    derived = resolve_threshold(default_config, 20)
    assert derived == pytest.approx(
        threshold_for_fap(20, default_config.noise_power, default_config.fap_target)
    )
    pinned = default_config.replace(threshold=0.37)
    assert resolve_threshold(pinned, 20) == 0.37


def test_draw_terminals(small_config, rng):
    grid = build_angular_grid(ArrayGeometry(small_config.antennas))
    draw = draw_terminals(rng, grid, small_config, with_jammer=True)
    assert len(draw.users) == small_config.users
    assert all(t.support.size > 0 for t in draw.users)
    assert draw.jammer is not None
    quiet = draw_terminals(rng, grid, small_config, with_jammer=False)
    assert quiet.jammer is None


def test_paired_observations_differ_only_on_jammer_rows(small_config, rng):
    grid = build_angular_grid(ArrayGeometry(small_config.antennas))
    draw = draw_terminals(rng, grid, small_config, with_jammer=True)
    base, jammed = angular_pilot_observations(rng, grid, draw, small_config, 6)
    assert jammed is not None
    delta = np.abs(jammed - base).sum(axis=(0, 2))
    touched = np.nonzero(delta > 0)[0]
    np.testing.assert_array_equal(touched, draw.jammer.support)
    no_jam = draw_terminals(rng, grid, small_config, with_jammer=False)
    base2, jammed2 = angular_pilot_observations(rng, grid, no_jam, small_config, 6)
    assert jammed2 is None
    assert base2.shape == (small_config.users, grid.size, 6)


def test_angular_route_matches_antenna_route_exactly(small_config, rng):
    """Noise off, the two synthesis routes agree sample for sample.

    Despreading the antenna-domain receive matrix and projecting onto the
    grid lands exactly on sqrt(tau p mu) g_k + sqrt(tau q mu_w) gamma_k g_w,
    which is what the fast route synthesizes directly.
    """
    grid = build_angular_grid(ArrayGeometry(small_config.antennas))
    tau, n_sub, p, q = small_config.pilot_length, 6, 1.3, 0.8
    users = [
        terminal_from_angle(grid, theta, small_config.angular_spread)
        for theta in (-0.7, -0.2, 0.15, 0.5, 1.0)
    ]
    jammer = terminal_from_angle(grid, 0.8, small_config.angular_spread)
    realizations = [draw_channel(t, n_sub, rng) for t in users]
    h_users = np.stack([r.antenna_vectors(grid) for r in realizations])
    jammer_realization = draw_channel(jammer, n_sub, rng)
    h_jammer = jammer_realization.antenna_vectors(grid)
    book = generate_pilot_book(tau)
    pilot = generate_jammer_pilot(rng, book, n_sub)
    training = simulate_training(
        rng, h_users, p, book, 0.0,
        jammer_channel=h_jammer, jammer_pilot=pilot, jammer_power=q,
    )
    for k, realization in enumerate(realizations):
        lhs = to_angular_domain(training.despread[k], grid)
        rhs = np.zeros((grid.size, n_sub), dtype=complex)
        rhs[users[k].support] = (
            math.sqrt(tau * p * users[k].power_scale) * realization.gains
        )
        rhs[jammer.support] += (
            math.sqrt(tau * q * jammer.power_scale)
            * pilot.correlations[k][None, :]
            * jammer_realization.gains
        )
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_detection_flags_prefix_and_quorum():
    # direction 3 hot in every pilot's first subcarrier; direction 7 hot only
    # in the last subcarrier, so it is invisible to the 1-subcarrier detector
    observations = np.zeros((4, 10, 4), dtype=complex)
    observations[:, 3, 0] = 2.0
    observations[:, 7, 3] = 2.0
    thresholds = {1: 1.0, 4: 1.0}
    flags = detection_flags(observations, thresholds, [(4, 1), (4, 4), (5, 4)])
    np.testing.assert_array_equal(flags, [True, True, False])
    # with quorum 4 on one subcarrier, direction 7's energy is outside the prefix
    only_late = np.zeros((4, 10, 4), dtype=complex)
    only_late[:, 7, 3] = 2.0
    flags = detection_flags(only_late, thresholds, [(4, 1), (4, 4)])
    np.testing.assert_array_equal(flags, [False, True])


def test_detection_trial_runs_both_hypotheses(small_config):
    grid = build_angular_grid(ArrayGeometry(small_config.antennas))
    thresholds = {
        nd: resolve_threshold(small_config, nd) for nd in (1, 6)
    }
    combos = [(3, 1), (3, 6)]
    strong = small_config.replace(jammer_training_power=100.0)
    hits = np.mean(
        [
            detection_trial(strong, grid, trial_generator(11, t), thresholds, combos, True)
            for t in range(20)
        ],
        axis=0,
    )
    misses = np.mean(
        [
            detection_trial(small_config, grid, trial_generator(11, t), thresholds, combos, False)
            for t in range(20)
        ],
        axis=0,
    )
    assert hits[1] == 1.0  # overwhelming jammer, 6 subcarriers: always caught
    assert misses[1] <= 0.2  # false alarms are rare


def test_spectral_efficiency_trial_arm_ordering(small_config):
    """Strong jammer: no-jam >= suppressed >= unsuppressed on average."""
    config = small_config.replace(jammer_training_power=10.0, jammer_data_power=10.0)
    grid = build_angular_grid(ArrayGeometry(config.antennas))
    threshold = resolve_threshold(config, config.detection_subcarriers)
    arms = np.mean(
        [
            spectral_efficiency_trial(config, grid, trial_generator(3, t), threshold)
            for t in range(20)
        ],
        axis=0,
    )
    assert np.all(np.isfinite(arms)) and np.all(arms >= 0.0)
    no_jam, suppressed, unsuppressed = arms
    assert no_jam >= suppressed
    assert suppressed > unsuppressed


def test_full_fidelity_trial_deterministic_and_serializable(small_config):
    config = small_config.replace(jammer_training_power=5.0)
    a = full_fidelity_trial(config, seed=42)
    b = full_fidelity_trial(config, seed=42)
    assert a == b
    assert json.dumps(a, sort_keys=True)  # JSON-ready throughout
    expected_keys = {
        "seed", "threshold", "jammer_detected", "user_supports", "jammer_support",
        "detected_supports", "jammer_common_set", "user_rp_sets", "degenerate_users",
        "sinr", "rates", "sum_se", "decoded_symbol_power", "config",
    }
    assert expected_keys <= set(a)
    assert len(a["sinr"]) == config.users
    assert a["sum_se"] == pytest.approx(sum(a["rates"]))
    assert all(p > 0 for p in a["decoded_symbol_power"])
    assert a["config"]["jammer_training_power"] == 5.0
    different = full_fidelity_trial(config, seed=43)
    assert different["user_supports"] != a["user_supports"]
