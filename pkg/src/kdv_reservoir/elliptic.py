"""Jacobi elliptic sine and complete elliptic integral of the first kind.

Both come from the same arithmetic-geometric mean (descending Landen)
sequence started at ``a0 = 1, b0 = sqrt(1 - m), c0 = sqrt(m)``.
"""

import math

import numpy as np

AGM_TOL = 1e-12
# Within this distance of m = 1, sn is replaced by its tanh limit.
NEAR_ONE = 1e-12
_MAX_ITER = 64


class EllipticDomainError(ValueError):
    """Raised for an elliptic parameter outside [0, 1] or a non-finite argument."""


class EllipticDivergenceError(EllipticDomainError):
    """Raised when K(m) is requested at the logarithmic singularity m = 1."""


def _check_parameter(m):
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0:
        raise EllipticDomainError(f"elliptic parameter m={m!r} is outside [0, 1]")
    return m


def _agm_sequence(m):
    """Return the lists ``a_n`` and ``c_n`` of the AGM iteration for parameter m."""
    a = 1.0
    b = math.sqrt(1.0 - m)
    c = math.sqrt(m)
    a_seq = [a]
    c_seq = [c]
    for _ in range(_MAX_ITER):
        if abs(c) <= AGM_TOL:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def complete_elliptic_k(m):
    """Quarter period K(m) of sn in its first argument, for 0 <= m < 1."""
    m = _check_parameter(m)
    if m == 1.0:
        raise EllipticDivergenceError("K(m) diverges logarithmically at m = 1")
    a_seq, _ = _agm_sequence(m)
    return math.pi / (2.0 * a_seq[-1])


def jacobi_sn(theta, m):
    """Jacobi elliptic sine sn(theta | m).

    ``theta`` may be a scalar or an array; ``m`` is a scalar parameter in
    [0, 1]. Scalars in give a float out.
    """
    m = _check_parameter(m)
    th = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(th)):
        raise EllipticDomainError("jacobi_sn argument must be finite")

    if m >= 1.0 - NEAR_ONE:
        out = np.tanh(th)
    else:
        a_seq, c_seq = _agm_sequence(m)
        n = len(a_seq) - 1
        phi = (2.0**n) * a_seq[-1] * th
        for j in range(n, 0, -1):
            phi = 0.5 * (phi + np.arcsin(c_seq[j] / a_seq[j] * np.sin(phi)))
        out = np.sin(phi)

    if np.ndim(theta) == 0:
        return float(out)
    return out
