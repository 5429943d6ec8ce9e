"""Distribution helpers for test p-values.

The Student-t CDF is expressed through the regularized incomplete beta
function; its two-tailed survival probability is that function applied
directly, which avoids cancellation near t = 0.
"""

from __future__ import annotations

import math

from scipy.special import betainc


def student_t_cdf(x: float, dof: float) -> float:
    if dof <= 0:
        raise ValueError("degrees of freedom must be positive")
    if x == 0:
        return 0.5
    tail = 0.5 * float(betainc(dof / 2.0, 0.5, dof / (dof + x * x)))
    return tail if x < 0 else 1.0 - tail


def student_t_two_tailed_p(t: float, dof: float) -> float:
    """P(|T| >= |t|) for T ~ Student-t(dof)."""
    if dof <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    if t == 0:
        return 1.0
    return float(betainc(dof / 2.0, 0.5, dof / (dof + t * t)))


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_two_tailed_p(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))
