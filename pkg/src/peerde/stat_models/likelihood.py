"""Logistic link, binary-logit and ordered-logit log-likelihoods."""

from __future__ import annotations

import numpy as np

from .. import _kernels
from ..errors import InvalidCutpointsError


def logistic_cdf(z):
    """1 / (1 + exp(-z)), evaluated without overflow for large |z|."""
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(-np.abs(z))
    out = np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return float(out) if out.ndim == 0 else out


def log_logistic_cdf(z):
    return -np.logaddexp(0.0, -np.asarray(z, dtype=np.float64))


def _check_xy(beta, x, y):
    beta = np.asarray(beta, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    if x.ndim != 2 or beta.ndim != 1 or x.shape[1] != beta.size or x.shape[0] != y.shape[0]:
        raise ValueError(
            f"shape mismatch: beta {beta.shape}, X {x.shape}, y {y.shape}"
        )
    return beta, x, y


def binary_loglik(beta, x, y) -> float:
    """Sum of y*log(p) + (1-y)*log(1-p) with p = F(x'beta).

    ``x`` carries the intercept column; ``y`` is 0/1.
    """
    beta, x, y = _check_xy(beta, x, y)
    return -float(_kernels.binary_nll(beta[None, :], x, y.astype(np.float64))[0])


def check_cutpoints(tau) -> np.ndarray:
    tau = np.atleast_1d(np.asarray(tau, dtype=np.float64))
    if tau.ndim != 1 or tau.size == 0:
        raise InvalidCutpointsError("need at least one cutpoint")
    if not np.all(np.isfinite(tau)) or np.any(np.diff(tau) <= 0):
        raise InvalidCutpointsError("cutpoints must be finite and strictly increasing")
    return tau


def ordered_loglik(beta, tau, x, y) -> float:
    """Ordered-logit log-likelihood.

    P(y = c) = F(tau_c - x'beta) - F(tau_{c-1} - x'beta), with tau_{-1} = -inf
    and tau_{C-1} = +inf. ``x`` has no intercept column; ``y`` holds integer
    categories 0..C-1 where C = len(tau) + 1.
    """
    tau = check_cutpoints(tau)
    beta, x, y = _check_xy(beta, x, y)
    y = y.astype(np.int64)
    if y.size and (y.min() < 0 or y.max() > tau.size):
        raise ValueError(f"categories must lie in 0..{tau.size}")
    return -float(_kernels.ordered_nll(x @ beta, tau, y))


def ordered_probabilities(eta, tau) -> np.ndarray:
    """(n, C) matrix of category probabilities for linear predictors ``eta``."""
    tau = check_cutpoints(tau)
    eta = np.asarray(eta, dtype=np.float64)
    cdf = logistic_cdf(tau[None, :] - eta[:, None])
    cdf = np.atleast_2d(cdf)
    ones = np.ones((eta.size, 1))
    return np.diff(np.hstack([np.zeros((eta.size, 1)), cdf, ones]), axis=1)


def cutpoints_from_free(tau0: float, deltas) -> np.ndarray:
    """Strictly increasing cutpoints tau_m = tau0 + sum_{l<=m} exp(delta_l)."""
    deltas = np.asarray(deltas, dtype=np.float64)
    return np.concatenate(([tau0], tau0 + np.cumsum(np.exp(deltas))))


def free_from_cutpoints(tau) -> tuple[float, np.ndarray]:
    tau = check_cutpoints(tau)
    return float(tau[0]), np.log(np.diff(tau))
