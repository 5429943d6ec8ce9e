"""Ordinary least squares with exact t-based inference, and the
baseline-adjusted group comparison built on top of it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import student_t_two_tailed_p


class RankDeficient(ValueError):
    pass


class TooFewRows(ValueError):
    pass


@dataclass(frozen=True)
class FitResult:
    """Coefficient estimates with their uncertainty and tests.

    ``dof_method`` states how p-values were computed: exact Student-t with
    residual degrees of freedom for OLS, or a normal approximation to the
    Wald statistic for the mixed model.
    """

    names: tuple
    coefficients: tuple
    standard_errors: tuple
    test_statistics: tuple
    p_values: tuple
    dof: Optional[float]
    dof_method: str
    rss: Optional[float] = None
    log_likelihood: Optional[float] = None
    variance_components: Optional[dict] = None

    def _index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no coefficient named {name!r}; have {self.names}")

    def coef(self, name: str) -> float:
        return self.coefficients[self._index(name)]

    def se(self, name: str) -> float:
        return self.standard_errors[self._index(name)]

    def p_value(self, name: str) -> float:
        return self.p_values[self._index(name)]

    def to_dict(self) -> dict:
        out = {
            "names": list(self.names),
            "coefficients": list(self.coefficients),
            "standard_errors": list(self.standard_errors),
            "test_statistics": list(self.test_statistics),
            "p_values": list(self.p_values),
            "dof": self.dof,
            "dof_method": self.dof_method,
        }
        if self.rss is not None:
            out["rss"] = self.rss
        if self.log_likelihood is not None:
            out["log_likelihood"] = self.log_likelihood
        if self.variance_components is not None:
            out["variance_components"] = dict(self.variance_components)
        return out


def ols_fit(X, y, names=None) -> FitResult:
    """Fit y = X beta + eps by least squares.

    Standard errors come from sigma2 (X'X)^-1 with sigma2 = RSS/(n-p);
    test statistics are Student-t with n-p degrees of freedom and two-tailed
    p-values through the regularized incomplete beta function.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim == 1:
        X = X[:, None]
    n, p = X.shape
    if y.shape[0] != n:
        raise ValueError(f"X has {n} rows but y has {y.shape[0]}")
    if n <= p:
        raise TooFewRows(f"need more rows ({n}) than columns ({p})")
    if np.linalg.matrix_rank(X) < p:
        raise RankDeficient("design matrix is rank deficient")
    if names is None:
        names = tuple(f"x{i}" for i in range(p))
    names = tuple(names)

    beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    residuals = y - X @ beta
    rss = float(residuals @ residuals)
    dof = n - p
    sigma2 = rss / dof
    cov = sigma2 * np.linalg.inv(X.T @ X)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))

    stats, pvals = [], []
    for b, s in zip(beta, se):
        if s > 0:
            t = b / s
        else:
            # Perfect fit: the statistic degenerates.
            t = 0.0 if b == 0 else np.inf * np.sign(b)
        stats.append(float(t))
        pvals.append(student_t_two_tailed_p(float(t), dof))
    return FitResult(
        names=names,
        coefficients=tuple(float(b) for b in beta),
        standard_errors=tuple(float(s) for s in se),
        test_statistics=tuple(stats),
        p_values=tuple(pvals),
        dof=dof,
        dof_method=f"t({dof})",
        rss=rss,
    )


ANCOVA_NAMES = ("intercept", "group", "baseline")


def ancova(t2, group, t0) -> FitResult:
    """Post score regressed on group with the baseline as covariate.

    The 'group' coefficient and its p-value are the baseline-adjusted
    group effect.
    """
    t2 = np.asarray(t2, dtype=float).ravel()
    group = np.asarray(group, dtype=float).ravel()
    t0 = np.asarray(t0, dtype=float).ravel()
    if not (t2.shape == group.shape == t0.shape):
        raise ValueError("t2, group, and t0 must be aligned")
    if t2.shape[0] < 4:
        raise TooFewRows("need at least 4 observations")
    X = np.column_stack([np.ones_like(t2), group, t0])
    return ols_fit(X, t2, names=ANCOVA_NAMES)
