"""Uniform linear array geometry, steering vectors and the angular basis.

The array resolves directions on a fixed grid: directional sines sampled at
spacing 1/L (L = array length in wavelengths), which makes the corresponding
steering vectors exactly orthonormal.  Each grid point is one resolvable
path (RP).  Grid indices are 0-based throughout the code.
"""

from dataclasses import dataclass, field

import numpy as np

HALF_PI = np.pi / 2.0


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array with half-wavelength element spacing."""

    antenna_count: int
    element_spacing_ratio: float = 0.5

    def __post_init__(self):
        if self.antenna_count < 2:
            raise ValueError(f"need at least 2 antennas, got {self.antenna_count}")
        if self.element_spacing_ratio != 0.5:
            raise ValueError("only half-wavelength element spacing is supported")

    @property
    def array_length(self) -> float:
        """Aperture in carrier wavelengths: antenna_count * spacing ratio."""
        return self.antenna_count * self.element_spacing_ratio


@dataclass(frozen=True)
class AngularGrid:
    """The sampled directions and the orthonormal steering basis.

    ``basis[:, i]`` is the steering vector of ``sampled_angles[i]``; the
    directional sines are uniformly spaced by ``1 / array_length`` so the
    basis is unitary.
    """

    geometry: ArrayGeometry
    sampled_angles: np.ndarray = field(repr=False)
    directional_sines: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.geometry.antenna_count


def steering_vector(theta: float, geometry: ArrayGeometry) -> np.ndarray:
    """Unit-norm array response for a direction of arrival ``theta`` (rad).

    Element m carries phase -m * 2*pi * (d/lambda) * sin(theta).
    """
    if not -HALF_PI <= theta <= HALF_PI:
        raise ValueError(f"direction {theta} outside [-pi/2, pi/2]")
    m = np.arange(geometry.antenna_count)
    phase = -2.0j * np.pi * geometry.element_spacing_ratio * np.sin(theta)
    return np.exp(phase * m) / np.sqrt(geometry.antenna_count)


def build_angular_grid(geometry: ArrayGeometry) -> AngularGrid:
    """Sample the directional sine at spacing 1/L and assemble the basis."""
    n = geometry.antenna_count
    length = geometry.array_length
    sines = (np.arange(n) - (n - 1) / 2.0) / length
    angles = np.arcsin(sines)
    basis = np.column_stack([steering_vector(a, geometry) for a in angles])
    for arr in (sines, angles, basis):
        arr.flags.writeable = False
    return AngularGrid(
        geometry=geometry,
        sampled_angles=angles,
        directional_sines=sines,
        basis=basis,
    )


def grid_indices_in_span(
    grid: AngularGrid, mean_angle: float, spread: float
) -> np.ndarray:
    """Indices of grid angles inside [mean - spread/2, mean + spread/2].

    Endpoints are inclusive.  The result is a (possibly empty) contiguous,
    increasing array of 0-based indices; narrow spans on a coarse grid may
    contain no grid point at all.
    """
    if spread <= 0.0:
        raise ValueError(f"angular spread must be positive, got {spread}")
    half = spread / 2.0
    if not -HALF_PI + half <= mean_angle <= HALF_PI - half:
        raise ValueError(
            f"mean angle {mean_angle} leaves the span outside [-pi/2, pi/2] "
            f"for spread {spread}"
        )
    angles = grid.sampled_angles
    inside = (angles >= mean_angle - half) & (angles <= mean_angle + half)
    return np.nonzero(inside)[0]
