"""Loop kernels compiled with numba (default path)."""

import math

import numpy as np
from numba import njit

RAND1, BEST1, RAND_TO_BEST1, BEST2, RAND2 = 0, 1, 2, 3, 4


@njit(cache=True)
def de_mutate(x, idx, best, strategy, f):
    n, d = x.shape
    v = np.empty_like(x)
    for i in range(n):
        for j in range(d):
            if strategy == RAND1:
                v[i, j] = x[idx[i, 0], j] + f * (x[idx[i, 1], j] - x[idx[i, 2], j])
            elif strategy == BEST1:
                v[i, j] = x[best, j] + f * (x[idx[i, 0], j] - x[idx[i, 1], j])
            elif strategy == RAND_TO_BEST1:
                v[i, j] = (
                    x[i, j]
                    + f * (x[best, j] - x[i, j])
                    + f * (x[idx[i, 0], j] - x[idx[i, 1], j])
                )
            elif strategy == BEST2:
                v[i, j] = (
                    x[best, j]
                    + f * (x[idx[i, 0], j] - x[idx[i, 1], j])
                    + f * (x[idx[i, 2], j] - x[idx[i, 3], j])
                )
            else:
                v[i, j] = (
                    x[idx[i, 0], j]
                    + f * (x[idx[i, 1], j] - x[idx[i, 2], j])
                    + f * (x[idx[i, 3], j] - x[idx[i, 4], j])
                )
    return v


@njit(cache=True)
def de_crossover(x, v, r, jrand, cr):
    n, d = x.shape
    u = np.empty_like(x)
    for i in range(n):
        for j in range(d):
            if r[i, j] <= cr or j == jrand[i]:
                u[i, j] = v[i, j]
            else:
                u[i, j] = x[i, j]
    return u


@njit(cache=True)
def sphere(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for j in range(d):
            s += x[i, j] * x[i, j]
        out[i] = s
    return out


@njit(cache=True)
def rosenbrock(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for j in range(d - 1):
            a = x[i, j + 1] - x[i, j] * x[i, j]
            b = 1.0 - x[i, j]
            s += 100.0 * a * a + b * b
        out[i] = s
    return out


@njit(cache=True)
def rastrigin(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        s = 10.0 * d
        for j in range(d):
            s += x[i, j] * x[i, j] - 10.0 * math.cos(2.0 * math.pi * x[i, j])
        out[i] = s
    return out


@njit(cache=True)
def _log_sigmoid(z):
    # -log(1 + exp(-z)) without overflow
    if z >= 0.0:
        return -math.log1p(math.exp(-z))
    return z - math.log1p(math.exp(z))


@njit(cache=True)
def binary_nll(betas, x, y):
    p, k = betas.shape
    n = x.shape[0]
    out = np.empty(p)
    for m in range(p):
        s = 0.0
        for i in range(n):
            eta = 0.0
            for j in range(k):
                eta += x[i, j] * betas[m, j]
            if y[i] == 1.0:
                s += _log_sigmoid(eta)
            else:
                s += _log_sigmoid(-eta)
        out[m] = -s
    return out


@njit(cache=True)
def ordered_nll(eta, tau, y):
    ncut = tau.shape[0]
    s = 0.0
    for i in range(eta.shape[0]):
        c = y[i]
        if c == 0:
            s += _log_sigmoid(tau[0] - eta[i])
        elif c == ncut:
            s += _log_sigmoid(eta[i] - tau[ncut - 1])
        else:
            b = tau[c] - eta[i]
            a = tau[c - 1] - eta[i]
            s += _log_sigmoid(b) + _log_sigmoid(-a) + math.log1p(-math.exp(a - b))
    return -s


@njit(cache=True)
def mann_whitney_auc(scores, labels):
    n = scores.shape[0]
    order = np.argsort(scores, kind="mergesort")
    rank_sum = 0.0
    n_pos = 0
    i = 0
    while i < n:
        j = i
        while j + 1 < n and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        # tied block i..j shares the average of ranks i+1..j+1
        avg = (i + j + 2) / 2.0
        for t in range(i, j + 1):
            if labels[order[t]] == 1:
                rank_sum += avg
                n_pos += 1
        i = j + 1
    n_neg = n - n_pos
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)
