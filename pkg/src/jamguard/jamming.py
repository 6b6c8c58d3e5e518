"""Jamming detection via common active resolvable paths.

A smart jammer hits every pilot, so the directions it occupies show up in the
estimated active-path set of every user.  Directions shared by at least g of
the K per-pilot sets are therefore attributed to the jammer.  Honest users
rarely collide in g-fold groups; ``collision_probability_bound`` bounds that
event for terminals dropped uniformly at random.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .special import log_binomial


@dataclass(frozen=True)
class DetectionOutcome:
    """Verdict of the common-path test.

    ``common_set`` doubles as the estimate of the jammer's active directions.
    """

    occurrence_counts: np.ndarray  # per-direction pilot counts
    common_set: np.ndarray  # directions hit by >= min_common_pilots pilots
    jammer_detected: bool
    min_common_pilots: int


def rp_occurrence_counts(supports: Sequence[np.ndarray], grid_size: int) -> np.ndarray:
    """Count, per direction, how many pilots include it in their active set."""
    counts = np.zeros(grid_size, dtype=np.int64)
    for support in supports:
        support = np.asarray(support)
        if support.size and (support.min() < 0 or support.max() >= grid_size):
            raise ValueError("support index out of range")
        counts[support] += 1
    return counts


def detect_jammer(occurrence_counts: np.ndarray, min_common_pilots: int) -> DetectionOutcome:
    """Declare a jammer present iff some direction is shared by at least
    ``min_common_pilots`` per-pilot active sets."""
    if min_common_pilots < 2:
        raise ValueError("min_common_pilots must be >= 2")
    common = np.nonzero(occurrence_counts >= min_common_pilots)[0]
    return DetectionOutcome(
        occurrence_counts=occurrence_counts,
        common_set=common,
        jammer_detected=bool(common.size),
        min_common_pilots=min_common_pilots,
    )


def collision_probability_bound(users: int, min_common_pilots: int, angular_spread: float) -> float:
    """Upper bound on g users sharing a common active direction by chance.

    For mean angles uniform over the admissible range, the probability that a
    fixed pair of angular windows overlaps is 1 - ((pi - 2*spread)/(pi - spread))^2
    (clamped to 1 when spread >= pi/2), and a union bound over the C(K, g)
    groups gives min(1, C(K,g) * p_pair^(g-1)).  Evaluated in log-space so
    large binomial coefficients cannot overflow.
    """
    k, g = users, min_common_pilots
    if not 2 <= g <= k:
        raise ValueError("min_common_pilots must lie in [2, users]")
    if not 0.0 < angular_spread < math.pi:
        raise ValueError("angular_spread must lie in (0, pi)")
    if angular_spread >= math.pi / 2.0:
        return 1.0
    ratio = (math.pi - 2.0 * angular_spread) / (math.pi - angular_spread)
    # log(1 - ratio^2) via log1p for accuracy near ratio = 1
    log_pair = math.log1p(-(ratio * ratio))
    log_bound = log_binomial(k, g) + (g - 1) * log_pair
    return min(1.0, math.exp(log_bound))
