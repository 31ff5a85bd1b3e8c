"""Fitting logit models with differential evolution."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import objectives as _obj
from ..de_core import DEConfig, SearchBounds, evolve
from ..survey.design import DesignMatrix, design_matrix
from .likelihood import logistic_cdf, ordered_probabilities
from .metrics import auc, lr_test, percent_correct
from .specs import Family, ModelSpec

DEFAULT_COEF_BOUND = 10.0
DELTA_BOUNDS = (-6.0, 3.0)


@dataclass
class FitResult:
    """Fitted coefficients and diagnostics.

    ``coefficients`` is intercept-first for binary models and slopes-only for
    ordered models, whose location is carried by ``cutpoints``.
    """

    spec: ModelSpec
    coefficients: np.ndarray
    cutpoints: Optional[np.ndarray]
    log_likelihood: float
    null_log_likelihood: float
    lr_statistic: float
    lr_p_value: float
    df: int
    percent_correct: float
    auc: Optional[float]
    n: int
    n_dropped: int
    criterion: str
    de: dict
    levels: Optional[tuple] = None
    null_params: Optional[np.ndarray] = None

    def linear_predictor(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.spec.family is Family.ORDERED:
            return x[:, 1:] @ self.coefficients
        return x @ self.coefficients

    def predict_proba(self, x) -> np.ndarray:
        """P(y=1) for binary models, an (n, C) matrix for ordered ones."""
        eta = self.linear_predictor(x)
        if self.spec.family is Family.ORDERED:
            return ordered_probabilities(eta, self.cutpoints)
        return logistic_cdf(eta)

    def predict(self, x) -> np.ndarray:
        p = self.predict_proba(x)
        if self.spec.family is Family.ORDERED:
            return np.argmax(p, axis=1)
        return (p >= 0.5).astype(np.float64)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "criterion": self.criterion,
            "coefficients": [float(v) for v in self.coefficients],
            "cutpoints": None if self.cutpoints is None else [float(v) for v in self.cutpoints],
            "response_levels": None if self.levels is None else list(self.levels),
            "log_likelihood": self.log_likelihood,
            "null_log_likelihood": self.null_log_likelihood,
            "lr_statistic": self.lr_statistic,
            "lr_df": self.df,
            "lr_p_value": self.lr_p_value,
            "percent_correct": self.percent_correct,
            "auc": self.auc,
            "n": self.n,
            "n_dropped": self.n_dropped,
            "null_params": None if self.null_params is None else [float(v) for v in self.null_params],
            "de": self.de,
        }


def _search_bounds(obj: "_obj.ModelObjective", coef_bound: float) -> SearchBounds:
    if obj.family is Family.BINARY:
        return SearchBounds.box(-coef_bound, coef_bound, obj.n_params)
    lo = [-coef_bound] * (obj.k + 1) + [DELTA_BOUNDS[0]] * (obj.n_categories - 2)
    hi = [coef_bound] * (obj.k + 1) + [DELTA_BOUNDS[1]] * (obj.n_categories - 2)
    return SearchBounds(np.array(lo), np.array(hi))


def _calibrate_direction(theta, dm: DesignMatrix, config: DEConfig, coef_bound: float):
    """Rescale an AUC-optimal direction to maximum likelihood.

    AUC ignores the intercept and any positive scaling of the slopes, so only
    the slope direction is kept; intercept and scale are refit on the
    log-likelihood with the scale held non-negative (the ranking is kept).
    """
    slopes = np.asarray(theta[1:], dtype=np.float64)
    size = np.max(np.abs(slopes))
    direction = slopes / size if size > 0 else slopes
    z = dm.x[:, 1:] @ direction
    obj = _obj.ModelObjective(_obj.Criterion.NEG_LOGLIK, Family.BINARY, np.column_stack([np.ones_like(z), z]), dm.y)
    run = evolve(obj, SearchBounds(np.array([-coef_bound, 0.0]), np.array([coef_bound, coef_bound])), config)
    a, s = run.best.params
    return np.concatenate(([a], s * direction)), run


def _null_params(obj, theta) -> np.ndarray:
    """Intercept for a binary null model, cutpoints for an ordered one."""
    beta, tau = obj.unpack(theta)
    return np.array(beta if tau is None else tau, dtype=np.float64)


def fit_design(spec: ModelSpec, dm: DesignMatrix, config: Optional[DEConfig] = None,
               criterion="loglik", coef_bound: float = DEFAULT_COEF_BOUND) -> FitResult:
    """Fit ``spec`` on an already-built design matrix."""
    config = config or DEConfig()
    crit = _obj.Criterion.parse(criterion)
    obj = _obj.make_model_objective(crit, spec, dm)
    run = evolve(obj, _search_bounds(obj, coef_bound), config)
    theta = run.best.params
    extra = {}
    if crit is _obj.Criterion.NEG_AUC:
        extra["auc_criterion_value"] = -run.best.fitness
        theta, cal = _calibrate_direction(theta, dm, config, coef_bound)
        extra["calibration_generations"] = cal.generations
        ll_obj = _obj.make_model_objective(_obj.Criterion.NEG_LOGLIK, spec, dm)
    else:
        ll_obj = obj
    full_ll = -ll_obj(theta)
    beta, tau = ll_obj.unpack(theta)

    if spec.family is Family.ORDERED:
        null_obj = _obj.ModelObjective(_obj.Criterion.NEG_LOGLIK, Family.ORDERED, dm.x[:, :0], dm.y, ll_obj.n_categories)
    else:
        null_obj = _obj.ModelObjective(_obj.Criterion.NEG_LOGLIK, Family.BINARY, dm.x[:, :1], dm.y)
    null_run = evolve(null_obj, _search_bounds(null_obj, coef_bound), config)
    null_ll = -null_run.best.fitness
    stat, p = lr_test(full_ll, null_ll, spec.k)

    result = FitResult(
        spec=spec,
        coefficients=np.array(beta, dtype=np.float64),
        cutpoints=None if tau is None else np.array(tau),
        log_likelihood=float(full_ll),
        null_log_likelihood=float(null_ll),
        lr_statistic=stat,
        lr_p_value=p,
        df=spec.k,
        percent_correct=float("nan"),
        auc=None,
        n=dm.n,
        n_dropped=dm.n_dropped,
        criterion=crit.value,
        de={
            **config.to_dict(),
            "generations": run.generations,
            "null_generations": null_run.generations,
            "stop_reason": run.stop_reason,
            **extra,
        },
        levels=dm.levels,
        null_params=_null_params(null_obj, null_run.best.params),
    )
    result.percent_correct = percent_correct(result, dm.x, dm.y)
    if spec.family is Family.BINARY:
        result.auc = auc(result.predict_proba(dm.x), dm.y)
    return result


def fit(spec: ModelSpec, ds, config: Optional[DEConfig] = None, criterion="loglik",
        coef_bound: float = DEFAULT_COEF_BOUND) -> FitResult:
    """Build the design matrix for ``spec`` from ``ds`` and fit it by DE.

    The null model (intercept-only, or cutpoints-only for ordered models) is
    fitted with the same DE configuration to form the likelihood-ratio test.
    """
    return fit_design(spec, design_matrix(ds, spec), config, criterion, coef_bound)
