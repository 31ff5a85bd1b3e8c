"""Objectives for the DE optimizer.

Two families live here: closed-form benchmark functions used to validate
the optimizer, and adapters that turn a regression criterion (negative
log-likelihood or negative AUC) into a minimization target. Every objective
accepts a single vector via ``__call__`` and a row-stacked matrix via
``evaluate_batch``; both are pure, so concurrent calls are safe.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .de_core import SearchBounds
from .errors import ConfigError, UndefinedAUCError
from .stat_models.likelihood import cutpoints_from_free
from .stat_models.specs import Family

__all__ = [
    "Criterion",
    "Objective",
    "TestFunction",
    "ModelObjective",
    "TEST_FUNCTIONS",
    "test_function",
    "evaluate_test",
    "make_model_objective",
]


class Objective:
    """Minimization target. Subclasses implement ``evaluate_batch``."""

    def evaluate_batch(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(self.evaluate_batch(x[None, :])[0])


# name -> (batch kernel, default half-width of the search box, optimum coordinate)
_BENCHMARKS = {
    "sphere": (_kernels.sphere, 5.12, 0.0),
    "rosenbrock": (_kernels.rosenbrock, 2.048, 1.0),
    "rastrigin": (_kernels.rastrigin, 5.12, 0.0),
}
TEST_FUNCTIONS = tuple(_BENCHMARKS)


@dataclass(frozen=True)
class TestFunction(Objective):
    __test__ = False  # not a pytest class

    name: str
    dimension: int

    def __post_init__(self):
        if self.name not in _BENCHMARKS:
            raise ConfigError(f"unknown test function {self.name!r} (expected one of {', '.join(_BENCHMARKS)})")
        if self.dimension < 1 or (self.name == "rosenbrock" and self.dimension < 2):
            raise ConfigError(f"invalid dimension {self.dimension} for {self.name}")

    @property
    def known_optimum_value(self) -> float:
        return 0.0

    @property
    def known_optimum_point(self) -> np.ndarray:
        return np.full(self.dimension, _BENCHMARKS[self.name][2])

    @property
    def bounds(self) -> SearchBounds:
        h = _BENCHMARKS[self.name][1]
        return SearchBounds.box(-h, h, self.dimension)

    def evaluate_batch(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.dimension:
            raise ValueError(f"{self.name} expects vectors of length {self.dimension}, got shape {x.shape}")
        return _BENCHMARKS[self.name][0](np.ascontiguousarray(x))


def test_function(name: str, dimension: int) -> TestFunction:
    return TestFunction(str(name).strip().lower(), int(dimension))


test_function.__test__ = False


def evaluate_test(fn: TestFunction, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (fn.dimension,):
        raise ValueError(f"{fn.name} expects a vector of length {fn.dimension}, got shape {x.shape}")
    return fn(x)


evaluate_test.__test__ = False


class Criterion(enum.Enum):
    NEG_LOGLIK = "loglik"
    NEG_AUC = "auc"

    @classmethod
    def parse(cls, value) -> "Criterion":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        key = {"negloglikelihood": "loglik", "neg_loglik": "loglik", "likelihood": "loglik",
               "negauc": "auc", "neg_auc": "auc"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(f"unknown criterion {value!r} (expected loglik or auc)") from None


class ModelObjective(Objective):
    """Regression criterion over a flat parameter vector.

    Binary family: ``theta = (b0, b1..bk)`` with ``x`` carrying the intercept
    column. Ordered family: ``theta = (b1..bk, tau0, d1..d_{C-2})`` with ``x``
    lacking the intercept; cutpoints are ``tau0 + cumsum(exp(d))``.
    """

    def __init__(self, kind, family, x, y, n_categories: int = 2):
        self.kind = Criterion.parse(kind)
        self.family = Family(family)
        self.x = np.ascontiguousarray(x, dtype=np.float64)
        self.k = self.x.shape[1]
        if self.family is Family.ORDERED:
            self.y = np.asarray(y).astype(np.int64)
            self.n_categories = int(n_categories)
            if self.kind is Criterion.NEG_AUC:
                raise ConfigError("the AUC criterion is defined for binary models only")
            if self.n_categories < 2:
                raise ConfigError("ordered model needs at least two categories")
        else:
            self.y = np.asarray(y, dtype=np.float64)
            self.n_categories = 2
            if self.kind is Criterion.NEG_AUC and np.unique(self.y).size < 2:
                raise UndefinedAUCError("AUC undefined: all responses identical")
            self._labels = self.y.astype(np.int64)

    @property
    def n_params(self) -> int:
        if self.family is Family.ORDERED:
            return self.k + self.n_categories - 1
        return self.k

    def unpack(self, theta):
        """Split ``theta`` into (beta, cutpoints or None)."""
        theta = np.asarray(theta, dtype=np.float64)
        if self.family is Family.ORDERED:
            return theta[: self.k], cutpoints_from_free(theta[self.k], theta[self.k + 1:])
        return theta, None

    def evaluate_batch(self, thetas: np.ndarray) -> np.ndarray:
        thetas = np.ascontiguousarray(thetas, dtype=np.float64)
        if thetas.ndim != 2 or thetas.shape[1] != self.n_params:
            raise ValueError(f"expected parameter vectors of length {self.n_params}, got shape {thetas.shape}")
        if self.family is Family.BINARY:
            if self.kind is Criterion.NEG_LOGLIK:
                return _kernels.binary_nll(thetas, self.x, self.y)
            scores = thetas @ self.x.T
            return np.array([-_kernels.mann_whitney_auc(s, self._labels) for s in scores])
        eta = thetas[:, : self.k] @ self.x.T
        out = np.empty(thetas.shape[0])
        for i, th in enumerate(thetas):
            tau = cutpoints_from_free(th[self.k], th[self.k + 1:])
            out[i] = _kernels.ordered_nll(eta[i], tau, self.y)
        return out


def make_model_objective(kind, spec, data) -> ModelObjective:
    """Objective whose minimum maximizes ``kind`` for ``spec`` on ``data``.

    ``data`` is a :class:`~peerde.survey.DesignMatrix` or an ``(x, y)`` pair;
    ``x`` always includes the leading column of ones and is trimmed here for
    ordered models.
    """
    if hasattr(data, "x") and hasattr(data, "y"):
        x, y = data.x, data.y
    else:
        x, y = data
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise ValueError("design matrix and response disagree in length")
    if x.shape[1] != spec.k + 1:
        raise ValueError(f"design matrix has {x.shape[1]} columns, spec needs {spec.k + 1}")
    family = Family(spec.family)
    if family is Family.ORDERED:
        return ModelObjective(kind, family, x[:, 1:], y, int(y.max()) + 1)
    return ModelObjective(kind, family, x, y)
