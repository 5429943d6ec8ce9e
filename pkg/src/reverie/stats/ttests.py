"""Paired and Welch two-sample t-tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import student_t_two_tailed_p
from .scales import DegenerateData


@dataclass(frozen=True)
class TTestResult:
    t: float
    dof: float
    p: float

    def to_dict(self) -> dict:
        return {"t": self.t, "dof": self.dof, "p": self.p}


def paired_t_test(pre, post) -> TTestResult:
    pre = np.asarray(pre, dtype=float).ravel()
    post = np.asarray(post, dtype=float).ravel()
    if pre.shape != post.shape:
        raise ValueError("pre and post must have equal length")
    n = pre.shape[0]
    if n < 2:
        raise DegenerateData("need at least 2 pairs")
    diffs = post - pre
    variance = float(np.var(diffs, ddof=1))
    if variance == 0:
        raise DegenerateData("differences have zero variance")
    t = float(np.mean(diffs) / np.sqrt(variance / n))
    dof = n - 1
    return TTestResult(t=t, dof=float(dof), p=student_t_two_tailed_p(t, dof))


def two_sample_t_test(a, b) -> TTestResult:
    """Welch's t with Welch-Satterthwaite degrees of freedom."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise DegenerateData("need at least 2 observations per group")
    va, vb = float(np.var(a, ddof=1)), float(np.var(b, ddof=1))
    na, nb = a.shape[0], b.shape[0]
    pooled = va / na + vb / nb
    if pooled == 0:
        raise DegenerateData("both groups have zero variance")
    t = float((np.mean(a) - np.mean(b)) / np.sqrt(pooled))
    dof = pooled**2 / (
        (va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1)
    )
    return TTestResult(t=t, dof=float(dof), p=student_t_two_tailed_p(t, dof))
