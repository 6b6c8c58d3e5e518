"""Active resolvable-path detection from de-spread pilots.

De-spread pilot vectors are mapped to the angular domain, per-direction
energies are accumulated across the detection subcarriers, and each direction
is declared active when its summed energy exceeds a threshold.  Under the
noise-only hypothesis the summed energy is Gamma(N_d, sigma_z^2) distributed,
which fixes the threshold for a target false-alarm probability.
"""

from dataclasses import dataclass

import numpy as np

from .grid import AngularGrid
from .special import regularized_gamma_q

_BISECT_REL_TOL = 1e-10
_BISECT_MAX_STEPS = 200


def to_angular_domain(y: np.ndarray, grid: AngularGrid) -> np.ndarray:
    """Project antenna-domain vectors onto the grid basis: U^H y.

    Accepts a length-M vector or an (M, ...) stack; the projection applies
    along the first axis.
    """
    return np.tensordot(grid.basis.conj(), y, axes=(0, 0))


def energy_statistic(angular_pilots: np.ndarray) -> np.ndarray:
    """Sum squared magnitudes across subcarriers.

    ``angular_pilots`` is (directions, subcarriers) for one pilot, or
    (pilots, directions, subcarriers); the subcarrier axis is always last.
    """
    return np.sum(np.abs(angular_pilots) ** 2, axis=-1)


def threshold_for_fap(detection_subcarriers: int, noise_power: float, fap_target: float) -> float:
    """Energy threshold holding the per-direction false-alarm rate at target.

    Solves Q(N_d, eps / sigma_z^2) = eta by bisection, where Q is the
    regularized upper incomplete gamma function (the survival function of the
    Gamma(N_d, sigma_z^2) noise-only energy).
    """
    if not 0.0 < fap_target < 1.0:
        raise ValueError("fap_target must lie in (0, 1)")
    if detection_subcarriers < 1:
        raise ValueError("detection_subcarriers must be >= 1")
    if noise_power <= 0.0:
        raise ValueError("noise_power must be positive")
    shape = float(detection_subcarriers)

    def survival(x: float) -> float:
        return regularized_gamma_q(shape, x)

    # bracket the root in normalized units (x = eps / noise_power)
    lo, hi = 0.0, max(shape, 1.0)
    while survival(hi) > fap_target:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - eta this small is rejected above
            raise ArithmeticError("failed to bracket the threshold")
    for _ in range(_BISECT_MAX_STEPS):
        mid = 0.5 * (lo + hi)
        if survival(mid) > fap_target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _BISECT_REL_TOL * hi:
            return hi * noise_power
    raise ArithmeticError(
        f"threshold bisection did not reach rel tol {_BISECT_REL_TOL} "
        f"in {_BISECT_MAX_STEPS} steps"
    )


@dataclass(frozen=True)
class EnergyStatistics:
    """Per-pilot, per-direction summed energies and the decision threshold."""

    energies: np.ndarray  # (pilots, directions)
    threshold: float
    fap_target: float | None


def compute_energy_statistics(
    angular_pilots: np.ndarray,
    noise_power: float,
    fap_target: float = 1e-3,
    threshold: float | None = None,
) -> EnergyStatistics:
    """Accumulate energies and attach a threshold.

    ``angular_pilots`` is (pilots, directions, detection_subcarriers).  An
    explicit ``threshold`` overrides the false-alarm-rate derivation.
    """
    energies = energy_statistic(angular_pilots)
    if threshold is None:
        n_d = angular_pilots.shape[-1]
        threshold = threshold_for_fap(n_d, noise_power, fap_target)
        return EnergyStatistics(energies, float(threshold), fap_target)
    return EnergyStatistics(energies, float(threshold), None)


@dataclass(frozen=True)
class RpEstimate:
    """Estimated active-direction sets, one per pilot."""

    supports: tuple[np.ndarray, ...]
    active_mask: np.ndarray  # (pilots, directions) bool


def estimate_rp_sets(stats: EnergyStatistics) -> RpEstimate:
    """Declare direction i active for pilot k iff W[k, i] strictly exceeds
    the threshold (ties count as inactive)."""
    mask = stats.energies > stats.threshold
    supports = tuple(np.nonzero(row)[0] for row in mask)
    return RpEstimate(supports=supports, active_mask=mask)
