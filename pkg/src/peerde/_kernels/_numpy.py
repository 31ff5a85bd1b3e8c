"""Vectorized numpy kernels (reference and fallback path)."""

import numpy as np

# strategy codes, kept in sync with de_core.MutationStrategy
RAND1, BEST1, RAND_TO_BEST1, BEST2, RAND2 = 0, 1, 2, 3, 4


def de_mutate(x, idx, best, strategy, f):
    """Mutant vectors for every row of ``x``.

    ``idx`` is an (NP, k) integer array of donor indices; only the leading
    columns required by ``strategy`` are read.
    """
    if strategy == RAND1:
        return x[idx[:, 0]] + f * (x[idx[:, 1]] - x[idx[:, 2]])
    if strategy == BEST1:
        return x[best] + f * (x[idx[:, 0]] - x[idx[:, 1]])
    if strategy == RAND_TO_BEST1:
        return x + f * (x[best] - x) + f * (x[idx[:, 0]] - x[idx[:, 1]])
    if strategy == BEST2:
        return (
            x[best]
            + f * (x[idx[:, 0]] - x[idx[:, 1]])
            + f * (x[idx[:, 2]] - x[idx[:, 3]])
        )
    if strategy == RAND2:
        return (
            x[idx[:, 0]]
            + f * (x[idx[:, 1]] - x[idx[:, 2]])
            + f * (x[idx[:, 3]] - x[idx[:, 4]])
        )
    raise ValueError(f"unknown strategy code {strategy}")


def de_crossover(x, v, r, jrand, cr):
    take = r <= cr
    take[np.arange(x.shape[0]), jrand] = True
    return np.where(take, v, x)


def sphere(x):
    return np.sum(x * x, axis=1)


def rosenbrock(x):
    a = x[:, 1:] - x[:, :-1] ** 2
    b = 1.0 - x[:, :-1]
    return np.sum(100.0 * a * a + b * b, axis=1)


def rastrigin(x):
    return 10.0 * x.shape[1] + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=1)


def _log_sigmoid(z):
    return -np.logaddexp(0.0, -z)


def binary_nll(betas, x, y):
    """Negative binary-logit log-likelihood for each row of ``betas``."""
    eta = betas @ x.T
    ll = y * _log_sigmoid(eta) + (1.0 - y) * _log_sigmoid(-eta)
    return -np.sum(ll, axis=1)


def ordered_nll(eta, tau, y):
    """Negative ordered-logit log-likelihood given linear predictors ``eta``.

    ``tau`` holds the C-1 cutpoints; ``y`` holds integer categories 0..C-1.
    """
    ncut = tau.shape[0]
    upper = np.where(y < ncut, tau[np.minimum(y, ncut - 1)], np.inf)
    lower = np.where(y > 0, tau[np.maximum(y - 1, 0)], -np.inf)
    b = upper - eta
    a = lower - eta
    out = np.empty_like(eta)
    first = y == 0
    last = y == ncut
    mid = ~(first | last)
    out[first] = _log_sigmoid(b[first])
    out[last] = _log_sigmoid(-a[last])
    am, bm = a[mid], b[mid]
    out[mid] = _log_sigmoid(bm) + _log_sigmoid(-am) + np.log1p(-np.exp(am - bm))
    return -np.sum(out)


def _average_ranks(s):
    order = np.argsort(s, kind="mergesort")
    sorted_s = s[order]
    _, inverse, counts = np.unique(sorted_s, return_inverse=True, return_counts=True)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    group_rank = starts + (counts + 1) / 2.0
    ranks = np.empty(s.shape[0], dtype=np.float64)
    ranks[order] = group_rank[inverse]
    return ranks


def mann_whitney_auc(scores, labels):
    ranks = _average_ranks(scores)
    pos = labels == 1
    n_pos = np.count_nonzero(pos)
    n_neg = labels.shape[0] - n_pos
    u = np.sum(ranks[pos]) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)
