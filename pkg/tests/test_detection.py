import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from jamguard.detection import (
    compute_energy_statistics,
    energy_statistic,
    estimate_rp_sets,
    threshold_for_fap,
    to_angular_domain,
)
from jamguard.transmission import complex_noise


def test_angular_projection_of_basis_column(grid200):
    e = to_angular_domain(grid200.basis[:, 17], grid200)
    expected = np.zeros(200)
    expected[17] = 1.0
    np.testing.assert_allclose(e, expected, atol=1e-12)


def test_angular_projection_stacks(grid200, rng):
    y = complex_noise(rng, (200, 4, 3), 1.0)
    out = to_angular_domain(y, grid200)
    assert out.shape == (200, 4, 3)
    np.testing.assert_allclose(
        out[:, 2, 1], grid200.basis.conj().T @ y[:, 2, 1], atol=1e-12
    )
    # the basis is unitary, so the projection preserves energy
    assert np.sum(np.abs(out) ** 2) == pytest.approx(np.sum(np.abs(y) ** 2))


def test_energy_statistic_example():
    angular = np.array([[1.0 + 1.0j, 1.0 - 1.0j], [0.5j, 0.0]])
    np.testing.assert_allclose(energy_statistic(angular), [4.0, 0.25])
    stacked = energy_statistic(angular[None])
    np.testing.assert_allclose(stacked, [[4.0, 0.25]])


def test_threshold_single_subcarrier_closed_form():
    """With one detection subcarrier the threshold is -sigma^2 * ln(eta)."""
    for eta in (0.5, 1e-1, 1e-2, 1e-3):
        for sigma2 in (1.0, 10**-2.5):
            got = threshold_for_fap(1, sigma2, eta)
            assert got == pytest.approx(-sigma2 * math.log(eta), rel=1e-9)


@pytest.mark.parametrize("n_d", [1, 5, 20])
@pytest.mark.parametrize("eta", [1e-1, 1e-2, 1e-3, 1e-4])
def test_threshold_matches_inverse_survival(n_d, eta):
    got = threshold_for_fap(n_d, 10**-2.5, eta)
    expected = scipy.special.gammainccinv(n_d, eta) * 10**-2.5
    assert got == pytest.approx(expected, rel=1e-8)


def test_threshold_frozen_defaults():
    sigma2 = 10**-2.5
    assert threshold_for_fap(1, sigma2, 1e-3) == pytest.approx(
        0.021844240200635672, rel=1e-9
    )
    assert threshold_for_fap(20, sigma2, 1e-3) == pytest.approx(
        0.11605868524245595, rel=1e-9
    )


def test_threshold_scales_with_noise_power():
    base = threshold_for_fap(7, 1.0, 1e-2)
    assert threshold_for_fap(7, 3.5, 1e-2) == pytest.approx(3.5 * base, rel=1e-12)


@pytest.mark.parametrize(
    "args",
    [(0, 1.0, 1e-3), (1, 0.0, 1e-3), (1, -1.0, 1e-3), (1, 1.0, 0.0), (1, 1.0, 1.0)],
)
def test_threshold_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        threshold_for_fap(*args)


@given(
    n_d=st.integers(min_value=1, max_value=50),
    eta=st.floats(min_value=1e-6, max_value=0.4),
    factor=st.floats(min_value=1.5, max_value=100.0),
)
@settings(max_examples=50, deadline=None)
def test_threshold_decreasing_in_fap_target(n_d, eta, factor):
    """A looser false-alarm budget always lowers the energy threshold."""
    loose = min(eta * factor, 0.9)
    assert threshold_for_fap(n_d, 1.0, eta) > threshold_for_fap(n_d, 1.0, loose)


def test_compute_energy_statistics_derives_threshold(rng):
    angular = complex_noise(rng, (3, 8, 20), 1e-2)
    stats = compute_energy_statistics(angular, 1e-2, fap_target=1e-3)
    assert stats.fap_target == 1e-3
    assert stats.threshold == pytest.approx(threshold_for_fap(20, 1e-2, 1e-3))
    np.testing.assert_allclose(stats.energies, energy_statistic(angular))


def test_compute_energy_statistics_explicit_threshold(rng):
    angular = complex_noise(rng, (3, 8, 20), 1e-2)
    stats = compute_energy_statistics(angular, 1e-2, threshold=0.42)
    assert stats.threshold == 0.42
    assert stats.fap_target is None


def test_estimate_rp_sets_example():
    stats = compute_energy_statistics(
        np.sqrt([[[0.3], [0.01], [0.5]]]), noise_power=1.0, threshold=0.1
    )
    est = estimate_rp_sets(stats)
    np.testing.assert_array_equal(est.supports[0], [0, 2])
    np.testing.assert_array_equal(est.active_mask, [[True, False, True]])


def test_estimate_rp_sets_tie_is_inactive():
    stats = compute_energy_statistics(
        np.sqrt([[[0.1], [0.10000001]]]), noise_power=1.0, threshold=0.1
    )
    est = estimate_rp_sets(stats)
    np.testing.assert_array_equal(est.supports[0], [1])


def test_false_alarm_rate_on_noise(rng):
    """Noise-only energies exceed the derived threshold at the target rate."""
    eta, n_d, sigma2 = 1e-2, 20, 10**-2.5
    angular = complex_noise(rng, (1, 50_000, n_d), sigma2)
    stats = compute_energy_statistics(angular, sigma2, fap_target=eta)
    rate = estimate_rp_sets(stats).active_mask.mean()
    se = math.sqrt(eta * (1.0 - eta) / 50_000)
    assert abs(rate - eta) <= 3 * se
