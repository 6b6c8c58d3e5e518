import math

import numpy as np
import pytest

from jamguard.channel import draw_channel, sample_terminal, terminal_from_angle
from jamguard.config import ConfigurationError
from jamguard.grid import ArrayGeometry, build_angular_grid


def test_terminal_from_angle_support_and_scale(grid200):
    terminal = terminal_from_angle(grid200, 0.0, math.pi / 18)
    np.testing.assert_array_equal(terminal.support, np.arange(91, 109))
    assert terminal.path_count == 18
    assert terminal.power_scale == pytest.approx(200.0 / 18.0)


def test_terminal_from_angle_rejects_empty_window():
    grid = build_angular_grid(ArrayGeometry(4))
    with pytest.raises(ConfigurationError):
        terminal_from_angle(grid, 0.0, 0.4)


def test_sample_terminal_properties(grid200, rng):
    spread = math.pi / 18
    for _ in range(50):
        terminal = sample_terminal(grid200, spread, 1.0, rng)
        assert terminal.path_count >= 1
        assert abs(terminal.mean_angle) <= math.pi / 2 - spread / 2
        assert terminal.power_scale == pytest.approx(200.0 / terminal.path_count)
        # support is contiguous and inside the window
        assert np.all(np.diff(terminal.support) == 1)


def test_sample_terminal_redraw_budget_exhausted(rng):
    grid = build_angular_grid(ArrayGeometry(4))
    with pytest.raises(ConfigurationError):
        sample_terminal(grid, 0.01, 1.0, rng, max_redraws=0)


def test_sample_terminal_rejects_overwide_spread(grid200, rng):
    with pytest.raises(ConfigurationError):
        sample_terminal(grid200, math.pi + 0.1, 1.0, rng)


def test_draw_channel_shapes_and_support(grid200, rng):
    terminal = terminal_from_angle(grid200, 0.3, math.pi / 18)
    channel = draw_channel(terminal, 5, rng)
    assert channel.gains.shape == (terminal.path_count, 5)
    virtual = channel.virtual_vectors(grid200.size)
    assert virtual.shape == (200, 5)
    off_support = np.setdiff1d(np.arange(200), terminal.support)
    assert np.all(virtual[off_support] == 0)
    on_support = virtual[terminal.support]
    np.testing.assert_allclose(
        on_support, math.sqrt(terminal.power_scale) * channel.gains
    )


def test_antenna_vectors_match_basis_expansion(grid200, rng):
    terminal = terminal_from_angle(grid200, -0.4, math.pi / 18)
    channel = draw_channel(terminal, 3, rng)
    h = channel.antenna_vectors(grid200)
    reference = grid200.basis @ channel.virtual_vectors(grid200.size)
    np.testing.assert_allclose(h, reference, atol=1e-12)


def test_channel_energy_scales_with_antennas(grid200, rng):
    """Mean squared channel norm per subcarrier equals antennas * gain."""
    terminal = terminal_from_angle(grid200, 0.1, math.pi / 18, large_scale_gain=2.0)
    draws = 400
    h = draw_channel(terminal, draws, rng).antenna_vectors(grid200)
    norms = np.sum(np.abs(h) ** 2, axis=0)
    expected = 200 * 2.0
    se = norms.std(ddof=1) / math.sqrt(draws)
    assert abs(norms.mean() - expected) <= 3 * se


def test_gains_are_unit_variance_circular(grid200, rng):
    terminal = terminal_from_angle(grid200, 0.0, math.pi / 6)
    gains = draw_channel(terminal, 2000, rng).gains.ravel()
    n = gains.size
    assert abs(np.mean(np.abs(gains) ** 2) - 1.0) <= 4 / math.sqrt(n)
    # circular symmetry: pseudo-variance vanishes
    assert abs(np.mean(gains**2)) <= 4 / math.sqrt(n)
