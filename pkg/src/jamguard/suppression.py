"""Jammer-excluding channel estimation, MRC combining, and SINR accounting.

The estimator works per resolvable path in the angular domain: each active
direction's gain is estimated by a scalar LMMSE filter, directions attributed
to the jammer are dropped from the user's set, and the channel is rebuilt
from the surviving directions only.  Because the grid basis is orthonormal,
an estimate built on directions disjoint from the jammer's support is exactly
orthogonal to the jammer's channel.

SINR comes in three flavours: the closed form for jammer-free estimates, an
exact conditional-moment evaluation for arbitrary estimator supports (needed
when the jammer's directions are left in), and a Monte-Carlo moment estimate
used to validate both.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .detection import to_angular_domain
from .grid import AngularGrid
from .transmission import complex_noise


def user_rp_set(detected_support: np.ndarray, jammer_set: np.ndarray) -> np.ndarray:
    """Remove the jammer-attributed directions from a detected set.

    Order-preserving; an empty result marks a degenerate user whose every
    detected direction was claimed by the jammer.
    """
    detected_support = np.asarray(detected_support)
    keep = ~np.isin(detected_support, jammer_set)
    return detected_support[keep]


def gain_mean_square(
    pilot_power: float, pilot_length: int, power_scale: float, noise_power: float
) -> float:
    """Mean-square of the per-path LMMSE gain estimate, in (0, 1).

    The complementary share, 1 - value, is the estimation-error mean-square.
    """
    s2 = pilot_length * pilot_power * power_scale
    return s2 / (noise_power + s2)


@dataclass(frozen=True)
class ChannelEstimate:
    """Per-path gain estimates and the rebuilt antenna-domain channel."""

    support: np.ndarray  # directions the estimate lives on
    gains: np.ndarray  # (|support|, subcarriers)
    channel: np.ndarray  # (antennas, subcarriers)
    gain_mean_square: float
    error_mean_square: float

    @property
    def degenerate(self) -> bool:
        return self.support.size == 0


def lmmse_estimate(
    despread: np.ndarray,
    support: np.ndarray,
    grid: AngularGrid,
    pilot_power: float,
    pilot_length: int,
    power_scale: float,
    noise_power: float,
) -> ChannelEstimate:
    """Scalar LMMSE per retained direction from one user's de-spread pilots.

    ``despread`` is (antennas, subcarriers).  Each retained direction i gets
    gain_hat_i = sqrt(tau p mu) / (sigma_z^2 + tau p mu) * [U^H y]_i, and the
    channel is rebuilt as sqrt(mu) * sum_i gain_hat_i a(phi_i).
    """
    support = np.asarray(support, dtype=np.intp)
    xi = gain_mean_square(pilot_power, pilot_length, power_scale, noise_power)
    s = math.sqrt(pilot_length * pilot_power * power_scale)
    coeff = s / (noise_power + s * s)
    angular = to_angular_domain(despread, grid)
    gains = coeff * angular[support]
    channel = math.sqrt(power_scale) * (grid.basis[:, support] @ gains)
    return ChannelEstimate(
        support=support,
        gains=gains,
        channel=channel,
        gain_mean_square=xi,
        error_mean_square=1.0 - xi,
    )


def baseline_estimator_no_suppression(
    despread: np.ndarray,
    detected_support: np.ndarray,
    grid: AngularGrid,
    pilot_power: float,
    pilot_length: int,
    power_scale: float,
    noise_power: float,
) -> ChannelEstimate:
    """LMMSE over the full detected set, keeping any jammer directions.

    Baseline for comparison: identical to ``lmmse_estimate`` except that no
    directions are subtracted, so a training-phase jammer leaks into the
    estimate and, through MRC, into data decoding.
    """
    return lmmse_estimate(
        despread,
        detected_support,
        grid,
        pilot_power,
        pilot_length,
        power_scale,
        noise_power,
    )


def mrc_combine(estimates: Sequence[ChannelEstimate], received: np.ndarray) -> np.ndarray:
    """Maximum-ratio combining: decoded[k] = estimate_k^H y_d per subcarrier.

    ``received`` is (antennas, subcarriers); returns (users, subcarriers).
    """
    return np.stack([np.sum(e.channel.conj() * received, axis=0) for e in estimates])


def overlap_count_matrix(supports: Sequence[np.ndarray], grid_size: int) -> np.ndarray:
    """Pairwise overlap counts; diagonal holds each set's own size."""
    k = len(supports)
    masks = np.zeros((k, grid_size), dtype=np.int64)
    for row, support in zip(masks, supports):
        row[np.asarray(support, dtype=np.intp)] = 1
    return masks @ masks.T


def sinr_closed_form(
    data_powers: np.ndarray,
    power_scales: np.ndarray,
    gain_mean_squares: np.ndarray,
    overlap_counts: np.ndarray,
    noise_power: float,
) -> np.ndarray:
    """Per-user MRC SINR when the estimator supports exclude the jammer.

    With C_k = overlap_counts[k, k] retained directions and C_{k,l} shared
    ones, user k sees

        rho_k = p_k mu_k C_k^2 xi_k /
                (p_k mu_k C_k xi_k + sum_{l != k} p_l mu_l C_{k,l} + C_k sigma_z^2)

    Degenerate users (C_k = 0) get SINR 0.
    """
    p = np.asarray(data_powers, dtype=float)
    mu = np.asarray(power_scales, dtype=float)
    xi = np.asarray(gain_mean_squares, dtype=float)
    counts = np.asarray(overlap_counts, dtype=float)
    own = np.diag(counts)
    cross = counts @ (p * mu) - own * p * mu  # sum over l != k of p_l mu_l C_{k,l}
    numerator = p * mu * own * own * xi
    denominator = p * mu * own * xi + cross + own * noise_power
    out = np.zeros_like(numerator)
    live = denominator > 0.0
    out[live] = numerator[live] / denominator[live]
    return out


def achievable_rate(
    sinr: np.ndarray | float, pilot_length: int, coherence_block: int
) -> np.ndarray | float:
    """Training-overhead-discounted rate: (1 - tau/T) log2(1 + sinr)."""
    if coherence_block <= pilot_length:
        raise ValueError("coherence_block must exceed pilot_length")
    prelog = 1.0 - pilot_length / coherence_block
    return prelog * np.log2(1.0 + np.asarray(sinr, dtype=float))


@dataclass(frozen=True)
class FixedSupportScenario:
    """Everything that stays fixed while channel gains and noise vary.

    ``estimator_support`` is the direction set the target user's estimator
    actually uses; with suppression it excludes the jammer's directions, in
    the unsuppressed baseline it is the raw detected set.
    """

    grid_size: int
    user_supports: tuple[np.ndarray, ...]
    estimator_support: np.ndarray
    target_user: int
    pilot_powers: np.ndarray
    data_powers: np.ndarray
    power_scales: np.ndarray
    pilot_length: int
    noise_power: float
    jammer_support: np.ndarray | None = None
    jammer_power_scale: float = 0.0
    jammer_training_power: float = 0.0
    jammer_data_power: float = 0.0


@dataclass(frozen=True)
class MomentTerms:
    """Second-order statistics of the combined signal for one user.

    ``inter_user`` is indexed by user, with the target's own entry zero.
    All terms condition on the scenario's fixed supports.
    """

    desired_mean: float
    desired_power: float
    gain_variance: float
    inter_user: np.ndarray
    jammer_power: float
    noise_power: float


def _masks(scenario: FixedSupportScenario):
    m = scenario.grid_size
    target = np.zeros(m, dtype=bool)
    target[np.asarray(scenario.estimator_support, dtype=np.intp)] = True
    users = np.zeros((len(scenario.user_supports), m), dtype=bool)
    for row, support in zip(users, scenario.user_supports):
        row[np.asarray(support, dtype=np.intp)] = True
    jammer = np.zeros(m, dtype=bool)
    if scenario.jammer_support is not None:
        jammer[np.asarray(scenario.jammer_support, dtype=np.intp)] = True
    return target, users, jammer


def conditional_moment_terms(scenario: FixedSupportScenario) -> MomentTerms:
    """Exact conditional moments of the MRC output for the target user.

    Derived from the per-direction observation model: on direction i the
    de-spread pilot is s g_i [i in own support] + b gamma w_i [i in jammer
    support] + noise, with s^2 = tau p mu, b^2 = tau q_t mu_w, and the pilot
    correlation gamma of variance 1/tau shared across directions.  Every term
    reduces to counting set intersections, which is what makes a per-trial
    closed-form SINR cheap even for contaminated estimator supports.
    """
    k = scenario.target_user
    d_mask, user_masks, w_mask = _masks(scenario)
    u_mask = user_masks[k]
    mu = np.asarray(scenario.power_scales, dtype=float)
    mu_k = mu[k]
    mu_w = scenario.jammer_power_scale
    sigma2 = scenario.noise_power
    s2 = scenario.pilot_length * scenario.pilot_powers[k] * mu_k
    c2 = s2 / (sigma2 + s2) ** 2
    xi = s2 / (sigma2 + s2)
    jam = scenario.jammer_training_power * mu_w  # tau q_t mu_w * E|gamma|^2

    n_du = int(np.count_nonzero(d_mask & u_mask))
    n_dw = int(np.count_nonzero(d_mask & w_mask))
    n_duw = int(np.count_nonzero(d_mask & u_mask & w_mask))
    n_d = int(np.count_nonzero(d_mask))

    desired_mean = mu_k * xi * n_du
    gain_variance = mu_k**2 * c2 * ((s2 + sigma2) * n_du + jam * n_duw)

    inter = np.zeros(len(user_masks))
    for l, l_mask in enumerate(user_masks):
        if l == k:
            continue
        dl = d_mask & l_mask
        inter[l] = (
            mu_k
            * mu[l]
            * c2
            * (
                s2 * np.count_nonzero(dl & u_mask)
                + jam * np.count_nonzero(dl & w_mask)
                + sigma2 * np.count_nonzero(dl)
            )
        )

    jammer_power = (
        mu_k * mu_w * c2 * (s2 * n_duw + sigma2 * n_dw + jam * n_dw * (n_dw + 1))
    )
    noise = mu_k * c2 * sigma2 * (s2 * n_du + jam * n_dw + sigma2 * n_d)
    return MomentTerms(
        desired_mean=desired_mean,
        desired_power=desired_mean**2,
        gain_variance=gain_variance,
        inter_user=inter,
        jammer_power=jammer_power,
        noise_power=noise,
    )


def sinr_from_moments(terms: MomentTerms, scenario: FixedSupportScenario) -> float:
    """Assemble the effective SINR from conditional moments.

    rho = p_k |E{v^H h_k}|^2 / (p_k var{v^H h_k}
          + sum_{l != k} p_l E|v^H h_l|^2 + q_d E|v^H h_w|^2 + E|v^H z|^2)
    """
    k = scenario.target_user
    p = np.asarray(scenario.data_powers, dtype=float)
    denominator = (
        p[k] * terms.gain_variance
        + float(np.dot(p, terms.inter_user))
        + scenario.jammer_data_power * terms.jammer_power
        + terms.noise_power
    )
    if denominator <= 0.0:
        return 0.0
    return p[k] * terms.desired_power / denominator


@dataclass(frozen=True)
class MomentEstimates:
    """Monte-Carlo counterparts of MomentTerms, with standard errors."""

    desired_mean: complex
    desired_mean_se: float
    gain_variance: float
    gain_variance_se: float
    inter_user: np.ndarray
    inter_user_se: np.ndarray
    jammer_power: float
    jammer_power_se: float
    noise_power: float
    noise_power_se: float
    trials: int


def _mean_se(samples: np.ndarray) -> tuple[float, float]:
    n = samples.size
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n))


def sinr_empirical_moments(
    scenario: FixedSupportScenario,
    trials: int,
    rng: np.random.Generator,
) -> MomentEstimates:
    """Estimate the conditional moments by direct simulation.

    Draws fresh per-path gains, pilot correlations, and noise for every trial
    while keeping the scenario's supports fixed, runs the per-direction LMMSE
    estimator, and accumulates the combined-signal statistics that enter the
    SINR.  Used as the oracle for ``conditional_moment_terms``.
    """
    if trials < 2:
        raise ValueError("trials must be >= 2")
    k = scenario.target_user
    d_mask, user_masks, w_mask = _masks(scenario)
    d_idx = np.nonzero(d_mask)[0]
    n_d = d_idx.size
    mu = np.asarray(scenario.power_scales, dtype=float)
    sigma2 = scenario.noise_power
    tau = scenario.pilot_length
    s = math.sqrt(tau * scenario.pilot_powers[k] * mu[k])
    coeff = s / (sigma2 + s * s)
    b = math.sqrt(tau * scenario.jammer_training_power * scenario.jammer_power_scale)

    # per-trial draws, restricted to the estimator support where possible
    user_gains = [
        complex_noise(rng, (trials, n_d), 1.0) * user_masks[l][d_idx]
        for l in range(len(user_masks))
    ]
    jammer_gains = complex_noise(rng, (trials, n_d), 1.0) * w_mask[d_idx]
    despread = s * user_gains[k] + complex_noise(rng, (trials, n_d), sigma2)
    if b > 0.0:
        gamma = complex_noise(rng, (trials, 1), 1.0 / tau)
        despread = despread + b * gamma * jammer_gains
    estimate = coeff * despread  # per-direction gain estimates on d_idx

    combined_own = mu[k] * np.sum(estimate.conj() * user_gains[k], axis=1)
    mean_re, se_re = _mean_se(combined_own.real)
    mean_im, se_im = _mean_se(combined_own.imag)
    desired_mean = complex(mean_re, mean_im)
    desired_mean_se = math.hypot(se_re, se_im)
    deviation = np.abs(combined_own - combined_own.mean()) ** 2
    gain_variance, gain_variance_se = _mean_se(deviation)

    inter = np.zeros(len(user_masks))
    inter_se = np.zeros(len(user_masks))
    for l in range(len(user_masks)):
        if l == k:
            continue
        cross = math.sqrt(mu[k] * mu[l]) * np.sum(
            estimate.conj() * user_gains[l], axis=1
        )
        inter[l], inter_se[l] = _mean_se(np.abs(cross) ** 2)

    if scenario.jammer_support is not None:
        toward_jammer = math.sqrt(mu[k] * scenario.jammer_power_scale) * np.sum(
            estimate.conj() * jammer_gains, axis=1
        )
        jammer_power, jammer_power_se = _mean_se(np.abs(toward_jammer) ** 2)
    else:
        jammer_power, jammer_power_se = 0.0, 0.0

    data_noise = complex_noise(rng, (trials, n_d), sigma2)
    toward_noise = math.sqrt(mu[k]) * np.sum(estimate.conj() * data_noise, axis=1)
    noise_power, noise_power_se = _mean_se(np.abs(toward_noise) ** 2)

    return MomentEstimates(
        desired_mean=desired_mean,
        desired_mean_se=desired_mean_se,
        gain_variance=gain_variance,
        gain_variance_se=gain_variance_se,
        inter_user=inter,
        inter_user_se=inter_se,
        jammer_power=jammer_power,
        jammer_power_se=jammer_power_se,
        noise_power=noise_power,
        noise_power_se=noise_power_se,
        trials=trials,
    )
