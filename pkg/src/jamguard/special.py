"""Regularized incomplete gamma functions and log-domain combinatorics.

Self-contained translations of the classic series / continued-fraction
evaluation (Cephes lineage).  Relative accuracy is better than 1e-12 over
the parameter ranges used by the energy detector (integer shapes up to a
few hundred, arguments within a few hundred of the shape).
"""

import math

_MACHEP = 1.11022302462515654042e-16  # 2**-53
_MAXLOG = 709.782712893383996843
_BIG = 4.503599627370496e15
_BIGINV = 2.22044604925031308085e-16
_MAX_ITER = 2000


class ConvergenceError(ArithmeticError):
    """An iterative numeric routine failed to reach its tolerance."""


def regularized_gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."""
    if a <= 0.0:
        raise ValueError(f"shape must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be non-negative, got {x}")
    if x == 0.0:
        return 0.0
    if x > 1.0 and x > a:
        return 1.0 - _igamc_cf(a, x)
    return _igam_series(a, x)


def regularized_gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).

    This is the survival function of a Gamma(shape=a, scale=1) variate.
    """
    if a <= 0.0:
        raise ValueError(f"shape must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be non-negative, got {x}")
    if x == 0.0:
        return 1.0
    if x <= 1.0 or x <= a:
        return 1.0 - _igam_series(a, x)
    return _igamc_cf(a, x)


def _igam_series(a: float, x: float) -> float:
    # power series around x = 0, effective for x <= max(1, a)
    ax = a * math.log(x) - x - math.lgamma(a)
    if ax < -_MAXLOG:
        return 0.0
    ax = math.exp(ax)
    r = a
    c = 1.0
    total = 1.0
    for _ in range(_MAX_ITER):
        r += 1.0
        c *= x / r
        total += c
        if c / total <= _MACHEP:
            return total * ax / a
    raise ConvergenceError(f"gamma series did not converge for a={a}, x={x}")


def _igamc_cf(a: float, x: float) -> float:
    # Lentz-style continued fraction, effective for x > max(1, a)
    ax = a * math.log(x) - x - math.lgamma(a)
    if ax < -_MAXLOG:
        return 0.0
    ax = math.exp(ax)
    y = 1.0 - a
    z = x + y + 1.0
    c = 0.0
    pkm2, qkm2 = 1.0, x
    pkm1, qkm1 = x + 1.0, z * x
    ans = pkm1 / qkm1
    for _ in range(_MAX_ITER):
        c += 1.0
        y += 1.0
        z += 2.0
        yc = y * c
        pk = pkm1 * z - pkm2 * yc
        qk = qkm1 * z - qkm2 * yc
        if qk != 0.0:
            r = pk / qk
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk
        if abs(pk) > _BIG:
            pkm2 *= _BIGINV
            pkm1 *= _BIGINV
            qkm2 *= _BIGINV
            qkm1 *= _BIGINV
        if t <= _MACHEP:
            return ans * ax
    raise ConvergenceError(
        f"gamma continued fraction did not converge for a={a}, x={x}"
    )


def log_binomial(n: int, k: int) -> float:
    """log of the binomial coefficient C(n, k), via lgamma (no overflow)."""
    if k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    )
