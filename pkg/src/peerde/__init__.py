"""Differential evolution and DE-fitted logit models for peer-assessment surveys."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .de_core import (
    DEConfig,
    Individual,
    MutationStrategy,
    Population,
    RunResult,
    SearchBounds,
    StoppingRule,
    crossover,
    evolve,
    initialize,
    mutate,
    select,
)
from .objectives import Criterion, TestFunction, evaluate_test, make_model_objective, test_function

__all__ = [
    "BACKEND", "Criterion", "DEConfig", "Individual", "MutationStrategy", "Population",
    "RunResult", "SearchBounds", "StoppingRule", "TestFunction", "crossover",
    "evaluate_test", "evolve", "initialize", "make_model_objective", "mutate", "select",
    "test_function", "__version__",
]
