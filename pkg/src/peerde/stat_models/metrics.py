"""Model diagnostics: AUC, likelihood-ratio test, percent correctly predicted."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaincc

from .. import _kernels
from ..errors import EmptySliceError, InconsistentFitError, UndefinedAUCError

LR_TOL = 1e-9


def auc(scores, labels) -> float:
    """Mann-Whitney AUC: (concordant pairs + ties / 2) / (n_pos * n_neg)."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(np.int64)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1-D of equal length")
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError("labels must be 0/1")
    n_pos = int(labels.sum())
    if n_pos == 0 or n_pos == labels.size:
        raise UndefinedAUCError("AUC needs at least one positive and one negative label")
    return float(_kernels.mann_whitney_auc(scores, labels))


def chi2_sf(x: float, df: int) -> float:
    """Chi-square upper tail via the regularized upper incomplete gamma."""
    if x <= 0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


def lr_test(full_ll: float, null_ll: float, df: int) -> tuple[float, float]:
    """Likelihood-ratio statistic 2*(full - null) and its chi-square p-value."""
    if isinstance(df, bool) or int(df) != df or df < 1:
        raise ValueError("df must be a positive integer")
    if full_ll < null_ll - LR_TOL:
        raise InconsistentFitError(
            f"full log-likelihood {full_ll:.6f} below null {null_ll:.6f}; optimizer did not converge"
        )
    stat = max(0.0, 2.0 * (full_ll - null_ll))
    return stat, chi2_sf(stat, int(df))


def percent_correct(fit, x, y) -> float:
    """Share of observations whose predicted category matches, in percent.

    Binary models predict 1 when p >= 0.5; ordered models predict the most
    probable category. ``x`` has the intercept column in both cases.
    """
    y = np.asarray(y)
    if y.size == 0:
        raise EmptySliceError("no observations")
    pred = fit.predict(x)
    return 100.0 * float(np.count_nonzero(pred == y)) / y.size
