"""Independent oracles for the statistics tests.

Each oracle deliberately avoids the implementation's code path: the t CDF
comes from Simpson quadrature of the density, linear systems are solved by
hand-rolled Gaussian elimination, and the mixed-model likelihood is
evaluated with dense per-subject covariance matrices.
"""

import math

import numpy as np


def t_pdf(x, dof):
    log_coefficient = (
        math.lgamma((dof + 1) / 2.0)
        - math.lgamma(dof / 2.0)
        - 0.5 * math.log(dof * math.pi)
    )
    return math.exp(log_coefficient - ((dof + 1) / 2.0) * math.log1p(x * x / dof))


def t_cdf_quadrature(x, dof, panels=40000):
    """CDF(x) = 0.5 + integral of the density from 0 to x, via Simpson."""
    if x == 0:
        return 0.5
    a, b = (x, 0.0) if x < 0 else (0.0, x)
    h = (b - a) / panels
    total = t_pdf(a, dof) + t_pdf(b, dof)
    for i in range(1, panels):
        weight = 4 if i % 2 else 2
        total += weight * t_pdf(a + i * h, dof)
    integral = total * h / 3.0
    return 0.5 - integral if x < 0 else 0.5 + integral


def gaussian_elimination_solve(A, b):
    """Solve A x = b by partial-pivot elimination, plain Python floats."""
    n = len(b)
    M = [[float(A[i][j]) for j in range(n)] + [float(b[i])] for i in range(n)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(M[r][col]))
        if abs(M[pivot][col]) < 1e-12:
            raise ValueError("singular system")
        M[col], M[pivot] = M[pivot], M[col]
        for row in range(col + 1, n):
            factor = M[row][col] / M[col][col]
            for k in range(col, n + 1):
                M[row][k] -= factor * M[col][k]
    x = [0.0] * n
    for row in range(n - 1, -1, -1):
        accumulated = sum(M[row][k] * x[k] for k in range(row + 1, n))
        x[row] = (M[row][n] - accumulated) / M[row][row]
    return x


def ols_normal_equation_oracle(X, y):
    """Coefficients from the normal equations via Gaussian elimination."""
    X = [list(map(float, row)) for row in X]
    n, p = len(X), len(X[0])
    XtX = [[sum(X[r][i] * X[r][j] for r in range(n)) for j in range(p)] for i in range(p)]
    Xty = [sum(X[r][i] * y[r] for r in range(n)) for i in range(p)]
    return gaussian_elimination_solve(XtX, Xty)


def lmm_dense_loglik(theta, subjects, X, y):
    """Profiled mixed-model log-likelihood from dense block matrices."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    order = {}
    for index, subject in enumerate(subjects):
        order.setdefault(subject, []).append(index)
    blocks = [(X[np.asarray(rows)], y[np.asarray(rows)]) for rows in order.values()]
    p = X.shape[1]
    A = np.zeros((p, p))
    b = np.zeros(p)
    logdet = 0.0
    n_total = 0
    for X_i, y_i in blocks:
        n_i = X_i.shape[0]
        V = np.eye(n_i) + theta * np.ones((n_i, n_i))
        V_inv = np.linalg.inv(V)
        A += X_i.T @ V_inv @ X_i
        b += X_i.T @ V_inv @ y_i
        sign, block_logdet = np.linalg.slogdet(V)
        assert sign > 0
        logdet += block_logdet
        n_total += n_i
    beta = np.linalg.solve(A, b)
    rss_w = 0.0
    for X_i, y_i in blocks:
        n_i = X_i.shape[0]
        V_inv = np.linalg.inv(np.eye(n_i) + theta * np.ones((n_i, n_i)))
        r = y_i - X_i @ beta
        rss_w += float(r @ V_inv @ r)
    sigma2 = rss_w / n_total
    return -0.5 * (n_total * math.log(2 * math.pi * sigma2) + logdet + n_total)
