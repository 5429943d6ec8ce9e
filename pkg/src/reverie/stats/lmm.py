"""Random-intercept linear mixed model fitted by maximum likelihood.

The model is y_ij = x_ij' beta + u_i + e_ij with u_i ~ N(0, sigma2_u) and
e_ij ~ N(0, sigma2_e). Writing theta = sigma2_u / sigma2_e, each subject
block has covariance sigma2_e (I + theta J), whose inverse and determinant
are closed-form, so the log-likelihood profiles down to a one-dimensional
search over theta: given theta, beta comes from generalized least squares
and sigma2_e from the weighted residuals. Inference on beta uses Wald z
statistics with a normal approximation (stated in the result).
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .distributions import normal_two_tailed_p
from .linmod import FitResult

THETA_MIN = 1e-8
THETA_MAX = 1e4
RELATIVE_TOL = 1e-8
COARSE_POINTS = 96

LMM_NAMES = ("intercept", "group", "day", "group_x_day")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class TooFewGroups(ValueError):
    pass


class SingularDesign(ValueError):
    pass


class NonConvergence(RuntimeError):
    pass


def _blocks(subjects, X, y):
    """Per-subject sufficient statistics; the profile evaluation needs only
    these, never the raw rows again."""
    order = {}
    for index, subject in enumerate(subjects):
        order.setdefault(subject, []).append(index)
    blocks = []
    for rows in order.values():
        idx = np.asarray(rows)
        X_i, y_i = X[idx], y[idx]
        blocks.append(
            {
                "n": X_i.shape[0],
                "XtX": X_i.T @ X_i,
                "Xty": X_i.T @ y_i,
                "yty": float(y_i @ y_i),
                "colsum": X_i.sum(axis=0),
                "ysum": float(y_i.sum()),
            }
        )
    return blocks


def _profile(theta: float, blocks, p: int):
    """Profiled quantities at a fixed variance ratio.

    Uses W = (I + theta J)^-1 = I - theta/(1 + n theta) J per block, so all
    weighted products reduce to the precomputed block statistics.
    """
    A = np.zeros((p, p))
    b = np.zeros(p)
    n_total = 0
    logdet = 0.0
    for block in blocks:
        w = theta / (1.0 + theta * block["n"])
        A += block["XtX"] - w * np.outer(block["colsum"], block["colsum"])
        b += block["Xty"] - w * block["colsum"] * block["ysum"]
        n_total += block["n"]
        logdet += math.log1p(theta * block["n"])
    try:
        beta = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SingularDesign(f"weighted normal equations singular: {exc}") from exc
    rss_w = 0.0
    for block in blocks:
        w = theta / (1.0 + theta * block["n"])
        plain = (
            block["yty"]
            - 2.0 * float(block["Xty"] @ beta)
            + float(beta @ block["XtX"] @ beta)
        )
        weighted_sum = block["ysum"] - float(block["colsum"] @ beta)
        rss_w += plain - w * weighted_sum**2
    sigma2_e = rss_w / n_total
    loglik = -0.5 * (
        n_total * math.log(2.0 * math.pi * sigma2_e) + logdet + n_total
    )
    return loglik, beta, sigma2_e, A


def profile_loglik(theta: float, subjects, X, y) -> float:
    """Profiled log-likelihood at one variance ratio (exposed for oracles)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    blocks = _blocks(list(subjects), X, y)
    return _profile(theta, blocks, X.shape[1])[0]


def fit_lmm_random_intercept(subjects, group, day, y) -> FitResult:
    """Fit the group/day/interaction model with a per-subject intercept.

    Arguments are aligned per-observation arrays: subject identifiers,
    group indicators (0/1), day numbers, and the response. The variance
    ratio is profiled by a bracketed golden-section search over
    [1e-8, 1e4] to relative tolerance 1e-8 (seeded by a coarse scan so the
    refinement starts inside the right basin).
    """
    subjects = list(subjects)
    group = np.asarray(group, dtype=float).ravel()
    day = np.asarray(day, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if not (len(subjects) == group.shape[0] == day.shape[0] == y.shape[0]):
        raise ValueError("subjects, group, day, and y must be aligned")
    if len(set(subjects)) < 2:
        raise TooFewGroups("need at least 2 subjects")
    X = np.column_stack([np.ones_like(y), group, day, group * day])
    p = X.shape[1]
    if y.shape[0] <= p:
        raise SingularDesign("more coefficients than observations")
    if np.linalg.matrix_rank(X) < p:
        raise SingularDesign("fixed-effects design is rank deficient")
    blocks = _blocks(subjects, X, y)

    def objective(log_theta: float) -> float:
        return _profile(math.exp(log_theta), blocks, p)[0]

    # Coarse scan localizes the optimum's basin, golden-section refines it.
    lo, hi = math.log(THETA_MIN), math.log(THETA_MAX)
    grid = np.linspace(lo, hi, COARSE_POINTS)
    values = [objective(u) for u in grid]
    best = int(np.argmax(values))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, COARSE_POINTS - 1)]

    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    while (b - a) > RELATIVE_TOL:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = objective(d)
    theta = math.exp(0.5 * (a + b))
    if theta >= THETA_MAX * (1.0 - 1e-6):
        raise NonConvergence(
            f"variance-ratio bracket exhausted at theta={theta:.3g}"
        )

    loglik, beta, sigma2_e, A = _profile(theta, blocks, p)
    cov = sigma2_e * np.linalg.inv(A)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    stats, pvals = [], []
    for coefficient, s in zip(beta, se):
        z = coefficient / s if s > 0 else math.inf * np.sign(coefficient)
        stats.append(float(z))
        pvals.append(normal_two_tailed_p(float(z)))
    sigma2_u = theta * sigma2_e
    return FitResult(
        names=LMM_NAMES,
        coefficients=tuple(float(v) for v in beta),
        standard_errors=tuple(float(s) for s in se),
        test_statistics=tuple(stats),
        p_values=tuple(pvals),
        dof=None,
        dof_method="wald-z (normal approximation)",
        log_likelihood=float(loglik),
        variance_components={"sigma2_u": float(sigma2_u), "sigma2_e": float(sigma2_e)},
    )
