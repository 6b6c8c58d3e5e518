"""Sparse angular-domain channel model.

Each terminal (user or jammer) scatters over a narrow angular window; the
channel it presents to the array is a sum of resolvable paths, one per grid
direction inside the window.  Per-path gains are i.i.d. CN(0, 1) across paths
and subcarriers, scaled so the expected channel energy per subcarrier equals
``antennas * large_scale_gain``.
"""

from dataclasses import dataclass

import numpy as np

from .config import ConfigurationError
from .grid import AngularGrid, grid_indices_in_span


@dataclass(frozen=True)
class TerminalGeometry:
    """Angular placement of one terminal and the grid support it excites.

    ``power_scale`` is the per-path variance scale mu = M * beta / C where C
    is the number of active resolvable paths.
    """

    mean_angle: float
    angular_spread: float
    support: np.ndarray  # active grid indices, sorted, 1-D int
    large_scale_gain: float
    power_scale: float

    @property
    def path_count(self) -> int:
        return int(self.support.size)


def terminal_from_angle(
    grid: AngularGrid,
    mean_angle: float,
    angular_spread: float,
    large_scale_gain: float = 1.0,
) -> TerminalGeometry:
    """Place a terminal at a fixed mean angle.

    Raises ConfigurationError when the angular window captures no grid
    direction (possible for small arrays, where the grid is coarse).
    """
    support = grid_indices_in_span(grid, mean_angle, angular_spread)
    if support.size == 0:
        raise ConfigurationError(
            f"no resolvable path falls inside the angular window at "
            f"{mean_angle:.4f} rad (spread {angular_spread:.4f})"
        )
    m = grid.geometry.antenna_count
    mu = m * large_scale_gain / support.size
    support = support.copy()
    support.flags.writeable = False
    return TerminalGeometry(
        mean_angle=float(mean_angle),
        angular_spread=float(angular_spread),
        support=support,
        large_scale_gain=float(large_scale_gain),
        power_scale=mu,
    )


def sample_terminal(
    grid: AngularGrid,
    angular_spread: float,
    large_scale_gain: float,
    rng: np.random.Generator,
    max_redraws: int = 1000,
) -> TerminalGeometry:
    """Draw a terminal with mean angle uniform over the admissible range.

    The mean angle is restricted so the whole angular window stays inside
    [-pi/2, pi/2].  Draws that capture no grid direction are rejected and
    redrawn, up to ``max_redraws`` times.
    """
    half = 0.5 * angular_spread
    lo, hi = -np.pi / 2 + half, np.pi / 2 - half
    if lo >= hi:
        raise ConfigurationError("angular_spread leaves no admissible mean angle")
    for _ in range(max_redraws):
        theta = rng.uniform(lo, hi)
        try:
            return terminal_from_angle(grid, theta, angular_spread, large_scale_gain)
        except ConfigurationError:
            continue
    raise ConfigurationError(
        f"no non-empty angular support found in {max_redraws} draws; "
        f"the grid is too coarse for spread {angular_spread:.4f}"
    )


@dataclass(frozen=True)
class ChannelRealization:
    """Per-path gains of one terminal over a block of subcarriers.

    ``gains`` has shape (path_count, subcarriers); the sparsity pattern is
    common to all subcarriers while the gains themselves are independent.
    """

    terminal: TerminalGeometry
    gains: np.ndarray

    @property
    def subcarriers(self) -> int:
        return int(self.gains.shape[1])

    def virtual_vectors(self, grid_size: int) -> np.ndarray:
        """Full virtual channel matrix, shape (grid_size, subcarriers).

        Rows off the support are exactly zero; on-support rows carry
        sqrt(power_scale) * gains.
        """
        g = np.zeros((grid_size, self.subcarriers), dtype=complex)
        g[self.terminal.support] = np.sqrt(self.terminal.power_scale) * self.gains
        return g

    def antenna_vectors(self, grid: AngularGrid) -> np.ndarray:
        """Antenna-domain channel matrix, shape (antennas, subcarriers)."""
        basis = grid.basis[:, self.terminal.support]
        return np.sqrt(self.terminal.power_scale) * (basis @ self.gains)


def draw_channel(
    terminal: TerminalGeometry,
    subcarriers: int,
    rng: np.random.Generator,
) -> ChannelRealization:
    """Draw i.i.d. CN(0, 1) per-path gains for a block of subcarriers."""
    shape = (terminal.path_count, subcarriers)
    gains = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return ChannelRealization(terminal=terminal, gains=gains)
