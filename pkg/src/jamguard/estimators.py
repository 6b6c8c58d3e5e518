"""Estimator-style front end over the detection and suppression pipeline.

Both classes follow the scikit-learn conventions (constructor stores
parameters verbatim, ``fit`` learns state into trailing-underscore
attributes, ``get_params``/``set_params``/``clone`` work), with one twist
forced by the problem: a sample here is a whole pilot observation batch, not
a row, so the detector's verdict is batch-level rather than per-row.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_pilot_tensor, check_positive, check_probability
from .detection import energy_statistic, threshold_for_fap, to_angular_domain
from .grid import ArrayGeometry, build_angular_grid
from .jamming import detect_jammer, rp_occurrence_counts
from .suppression import lmmse_estimate, user_rp_set


class JammingDetector(BaseEstimator):
    """Detect a pilot-attacking jammer from de-spread pilot observations.

    ``fit`` takes the antenna-domain de-spread pilots of one coherence block,
    shape (pilots, antennas, subcarriers), accumulates per-direction energy,
    thresholds it, and tests for directions common to at least
    ``min_common_pilots`` pilots.

    Parameters
    ----------
    noise_power : receiver noise variance in watts.
    fap_target : per-direction false-alarm probability used to derive the
        energy threshold when ``threshold`` is None.
    threshold : explicit energy threshold in watts, overriding fap_target.
    min_common_pilots : minimum number of pilots sharing a direction before
        the direction is attributed to a jammer.
    """

    def __init__(
        self,
        noise_power: float = 10.0 ** -2.5,
        fap_target: float = 1e-3,
        threshold: float | None = None,
        min_common_pilots: int = 6,
    ):
        self.noise_power = noise_power
        self.fap_target = fap_target
        self.threshold = threshold
        self.min_common_pilots = min_common_pilots

    def fit(self, X, y=None):
        X = check_pilot_tensor(X)
        noise_power = check_positive(self.noise_power, "noise_power")
        if self.min_common_pilots < 2 or self.min_common_pilots > X.shape[0]:
            raise ValueError("min_common_pilots must lie in [2, pilots]")
        grid = build_angular_grid(ArrayGeometry(X.shape[1]))
        angular = np.stack([to_angular_domain(y_k, grid) for y_k in X])
        if self.threshold is None:
            fap = check_probability(self.fap_target, "fap_target")
            self.threshold_ = threshold_for_fap(X.shape[2], noise_power, fap)
        else:
            self.threshold_ = check_positive(self.threshold, "threshold")
        self.grid_ = grid
        self.energies_ = energy_statistic(angular)
        mask = self.energies_ > self.threshold_
        self.supports_ = tuple(np.nonzero(row)[0] for row in mask)
        self.occurrence_counts_ = rp_occurrence_counts(self.supports_, grid.size)
        outcome = detect_jammer(self.occurrence_counts_, self.min_common_pilots)
        self.common_set_ = outcome.common_set
        self.jammer_detected_ = outcome.jammer_detected
        return self

    def fit_predict(self, X, y=None) -> bool:
        """Fit on one observation batch and return the jammer verdict."""
        return self.fit(X).jammer_detected_

    def predict(self, X=None) -> bool:
        """Verdict for the fitted batch, or fit-and-predict when X is given."""
        if X is not None:
            return self.fit_predict(X)
        check_is_fitted(self, "jammer_detected_")
        return self.jammer_detected_


class JammerExcludingChannelEstimator(TransformerMixin, BaseEstimator):
    """LMMSE channel estimation on jammer-free directions.

    ``fit`` learns, from one training batch, which directions each pilot
    excited and which of those belong to the jammer; ``transform`` rebuilds
    per-pilot channel estimates from de-spread observations using only each
    pilot's surviving directions.  With ``suppress=False`` the jammer's
    directions are kept — the contaminated baseline.

    Parameters
    ----------
    pilot_power, pilot_length, noise_power : training-phase scalars.
    large_scale_gain : per-terminal channel gain (beta).
    power_scale : 'auto' derives each pilot's per-path variance scale from
        its retained direction count; an array gives explicit per-pilot
        scales (used when large-scale statistics are known).
    fap_target, threshold, min_common_pilots : see JammingDetector.
    suppress : when False, skip the common-direction subtraction.
    """

    def __init__(
        self,
        pilot_power: float = 1.0,
        pilot_length: int = 10,
        noise_power: float = 10.0 ** -2.5,
        large_scale_gain: float = 1.0,
        power_scale="auto",
        fap_target: float = 1e-3,
        threshold: float | None = None,
        min_common_pilots: int = 6,
        suppress: bool = True,
    ):
        self.pilot_power = pilot_power
        self.pilot_length = pilot_length
        self.noise_power = noise_power
        self.large_scale_gain = large_scale_gain
        self.power_scale = power_scale
        self.fap_target = fap_target
        self.threshold = threshold
        self.min_common_pilots = min_common_pilots
        self.suppress = suppress

    def fit(self, X, y=None):
        X = check_pilot_tensor(X)
        detector = JammingDetector(
            noise_power=self.noise_power,
            fap_target=self.fap_target,
            threshold=self.threshold,
            min_common_pilots=self.min_common_pilots,
        ).fit(X)
        self.grid_ = detector.grid_
        self.threshold_ = detector.threshold_
        self.detected_supports_ = detector.supports_
        self.common_set_ = detector.common_set_
        self.jammer_detected_ = detector.jammer_detected_
        if self.suppress:
            self.user_sets_ = tuple(
                user_rp_set(s, self.common_set_) for s in self.detected_supports_
            )
        else:
            self.user_sets_ = self.detected_supports_
        self.degenerate_mask_ = np.array([s.size == 0 for s in self.user_sets_])
        antennas = X.shape[1]
        if isinstance(self.power_scale, str):
            if self.power_scale != "auto":
                raise ValueError("power_scale must be 'auto' or an array of scales")
            gain = check_positive(self.large_scale_gain, "large_scale_gain")
            self.power_scales_ = np.array(
                [
                    antennas * gain / s.size if s.size else antennas * gain
                    for s in self.user_sets_
                ]
            )
        else:
            scales = np.asarray(self.power_scale, dtype=float)
            if scales.shape != (X.shape[0],):
                raise ValueError(
                    f"power_scale array must have shape ({X.shape[0]},); got {scales.shape}"
                )
            self.power_scales_ = scales
        return self

    def transform(self, X) -> np.ndarray:
        """Channel estimates, shape (pilots, antennas, subcarriers)."""
        check_is_fitted(self, "user_sets_")
        X = check_pilot_tensor(X)
        if len(self.user_sets_) != X.shape[0]:
            raise ValueError("X pilot count differs from the fitted batch")
        if X.shape[1] != self.grid_.geometry.antenna_count:
            raise ValueError("X antenna count differs from the fitted batch")
        estimates = [
            lmmse_estimate(
                X[k],
                self.user_sets_[k],
                self.grid_,
                check_positive(self.pilot_power, "pilot_power"),
                self.pilot_length,
                self.power_scales_[k],
                check_positive(self.noise_power, "noise_power"),
            )
            for k in range(X.shape[0])
        ]
        return np.stack([e.channel for e in estimates])
