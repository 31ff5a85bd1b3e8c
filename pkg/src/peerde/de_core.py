"""Generational differential evolution.

The optimizer minimizes a box-bounded objective with the classic
initialize -> mutate -> crossover -> select loop. All random draws of a
generation come from a single seeded ``numpy.random.Generator`` in a fixed
order, before any fitness evaluation, so a run is reproducible regardless of
how (or in which order) trial vectors are evaluated.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import _kernels
from .errors import ConfigError, EvaluationError, InvalidBoundsError

__all__ = [
    "MutationStrategy",
    "SearchBounds",
    "Individual",
    "Population",
    "StoppingRule",
    "DEConfig",
    "RunResult",
    "GenerationTrace",
    "draw_indices",
    "initialize",
    "mutate",
    "crossover",
    "select",
    "evolve",
]

STAGNATION_TOL = 1e-12


class MutationStrategy(enum.Enum):
    RAND1 = "rand1"
    BEST1 = "best1"
    RAND_TO_BEST1 = "rand-to-best1"
    BEST2 = "best2"
    RAND2 = "rand2"

    @property
    def n_random(self) -> int:
        """Number of distinct random donor indices the strategy consumes."""
        return _N_RANDOM[self]

    @property
    def code(self) -> int:
        return _CODES[self]

    @property
    def uses_best(self) -> bool:
        return self in (MutationStrategy.BEST1, MutationStrategy.RAND_TO_BEST1, MutationStrategy.BEST2)

    @classmethod
    def parse(cls, value) -> "MutationStrategy":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        key = {"rand-1": "rand1", "best-1": "best1", "randtobest1": "rand-to-best1",
               "best-2": "best2", "rand-2": "rand2"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ConfigError(f"unknown strategy {value!r} (expected one of {names})") from None


_N_RANDOM = {
    MutationStrategy.RAND1: 3,
    MutationStrategy.BEST1: 2,
    MutationStrategy.RAND_TO_BEST1: 2,
    MutationStrategy.BEST2: 4,
    MutationStrategy.RAND2: 5,
}
_CODES = {
    MutationStrategy.RAND1: 0,
    MutationStrategy.BEST1: 1,
    MutationStrategy.RAND_TO_BEST1: 2,
    MutationStrategy.BEST2: 3,
    MutationStrategy.RAND2: 4,
}


@dataclass(frozen=True)
class SearchBounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=np.float64))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=np.float64))
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise InvalidBoundsError("lower and upper must be 1-D with the same length")
        if lower.size == 0:
            raise InvalidBoundsError("bounds must have dimension >= 1")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidBoundsError("bounds must be finite")
        if np.any(lower > upper):
            raise InvalidBoundsError("lower bound exceeds upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, low: float, high: float, dimension: int) -> "SearchBounds":
        if dimension < 1:
            raise InvalidBoundsError("bounds must have dimension >= 1")
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Individual:
    params: np.ndarray
    fitness: Optional[float] = None


@dataclass
class Population:
    """NP parameter vectors stored row-wise, with optional cached fitness."""

    params: np.ndarray
    fitness: Optional[np.ndarray] = None
    generation: int = 0

    @property
    def size(self) -> int:
        return self.params.shape[0]

    @property
    def members(self) -> list[Individual]:
        fit = self.fitness
        return [
            Individual(self.params[i].copy(), None if fit is None else float(fit[i]))
            for i in range(self.size)
        ]

    def best_index(self) -> int:
        if self.fitness is None:
            raise ValueError("population has not been evaluated")
        return int(np.argmin(self.fitness))


@dataclass(frozen=True)
class StoppingRule:
    max_generations: int = 1000
    target_fitness: Optional[float] = None
    stagnation_generations: Optional[int] = None

    def __post_init__(self):
        if int(self.max_generations) != self.max_generations or self.max_generations < 0:
            raise ConfigError("max_generations must be a non-negative integer")
        if self.stagnation_generations is not None and self.stagnation_generations < 1:
            raise ConfigError("stagnation_generations must be a positive integer")


@dataclass(frozen=True)
class DEConfig:
    np: int = 40
    f: float = 0.8
    cr: float = 0.9
    strategy: MutationStrategy = MutationStrategy.RAND1
    stop: StoppingRule = field(default_factory=StoppingRule)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "strategy", MutationStrategy.parse(self.strategy))
        if not 0.0 <= self.f <= 2.0:
            raise ConfigError(f"F must lie in [0, 2], got {self.f}")
        if not 0.0 <= self.cr <= 1.0:
            raise ConfigError(f"CR must lie in [0, 1], got {self.cr}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        need = self.strategy.n_random + 1
        if self.np < need:
            raise ConfigError(
                f"strategy {self.strategy.value} needs NP >= {need}, got {self.np}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "np": self.np,
            "f": self.f,
            "cr": self.cr,
            "strategy": self.strategy.value,
            "seed": self.seed,
            "max_generations": self.stop.max_generations,
            "target_fitness": self.stop.target_fitness,
            "stagnation_generations": self.stop.stagnation_generations,
        }


@dataclass
class RunResult:
    best: Individual
    history: np.ndarray
    generations: int
    stop_reason: str
    n_evaluations: int
    config: DEConfig

    def to_dict(self) -> dict[str, Any]:
        return {
            "best_params": [float(v) for v in self.best.params],
            "best_fitness": float(self.best.fitness),
            "history": [float(v) for v in self.history],
            "generations": self.generations,
            "stop_reason": self.stop_reason,
            "n_evaluations": self.n_evaluations,
            "config": self.config.to_dict(),
        }


@dataclass
class GenerationTrace:
    """Snapshot handed to the ``evolve`` callback after each generation."""

    generation: int
    parents: np.ndarray
    parent_fitness: np.ndarray
    indices: np.ndarray
    best_index: int
    jrand: np.ndarray
    trials: np.ndarray
    trial_fitness: np.ndarray
    population: Population


def draw_indices(rng: np.random.Generator, n: int, k: int, targets=None) -> np.ndarray:
    """Draw ``k`` pairwise-distinct indices in ``range(n)`` for each target.

    Each row excludes its own target index. Ranks of uniform keys give a
    uniformly random ordered subset of the ``n - 1`` admissible indices.
    """
    if targets is None:
        targets = np.arange(n)
    targets = np.atleast_1d(np.asarray(targets, dtype=np.int64))
    if k > n - 1:
        raise ConfigError(f"cannot draw {k} distinct indices excluding the target from NP={n}")
    keys = rng.random((targets.size, n - 1))
    picks = np.argsort(keys, axis=1, kind="stable")[:, :k]
    return picks + (picks >= targets[:, None])


def initialize(bounds: SearchBounds, config: DEConfig, rng: Optional[np.random.Generator] = None) -> Population:
    """Uniform initial population: x = lower + r * (upper - lower), r in [0, 1)."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    r = rng.random((config.np, bounds.dimension))
    params = bounds.lower + r * (bounds.upper - bounds.lower)
    return Population(params=params, fitness=None, generation=0)


def mutate(pop: Population, target_index: int, best_index: int, config: DEConfig,
           rng: np.random.Generator) -> np.ndarray:
    """Mutant vector for one target. Not bound-repaired."""
    x = pop.params
    f = config.f
    r = draw_indices(rng, pop.size, config.strategy.n_random, [target_index])[0]
    s = config.strategy
    if s is MutationStrategy.RAND1:
        return x[r[0]] + f * (x[r[1]] - x[r[2]])
    if s is MutationStrategy.BEST1:
        return x[best_index] + f * (x[r[0]] - x[r[1]])
    if s is MutationStrategy.RAND_TO_BEST1:
        xi = x[target_index]
        return xi + f * (x[best_index] - xi) + f * (x[r[0]] - x[r[1]])
    if s is MutationStrategy.BEST2:
        return x[best_index] + f * (x[r[0]] - x[r[1]]) + f * (x[r[2]] - x[r[3]])
    return x[r[0]] + f * (x[r[1]] - x[r[2]]) + f * (x[r[3]] - x[r[4]])


def crossover(target, mutant, cr: float, rng: np.random.Generator, return_jrand: bool = False):
    """Binomial crossover: take the mutant component where r <= CR or j == j_rand."""
    target = np.asarray(target, dtype=np.float64)
    mutant = np.asarray(mutant, dtype=np.float64)
    if target.shape != mutant.shape or target.ndim != 1:
        raise ValueError("target and mutant must be 1-D vectors of equal length")
    d = target.size
    r = rng.random(d)
    jrand = int(rng.integers(d))
    take = r <= cr
    take[jrand] = True
    trial = np.where(take, mutant, target)
    if return_jrand:
        return trial, jrand
    return trial


def _as_fitness(value, vector) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise EvaluationError(f"objective returned {value} at {np.array2string(np.asarray(vector))}", vector)
    return value


def select(target: Individual, trial: Individual, objective: Optional[Callable] = None) -> Individual:
    """Greedy one-to-one selection; ties go to the trial."""
    for ind in (target, trial):
        if ind.fitness is None:
            if objective is None:
                raise ValueError("unevaluated individual and no objective given")
            ind.fitness = _as_fitness(objective(ind.params), ind.params)
        else:
            _as_fitness(ind.fitness, ind.params)
    return trial if trial.fitness <= target.fitness else target


def _evaluate(objective, x: np.ndarray, workers: Optional[int]) -> np.ndarray:
    batch = getattr(objective, "evaluate_batch", None)
    if batch is not None:
        values = np.asarray(batch(x), dtype=np.float64)
    elif workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.fromiter(pool.map(objective, x), dtype=np.float64, count=x.shape[0])
    else:
        values = np.fromiter((objective(row) for row in x), dtype=np.float64, count=x.shape[0])
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        _as_fitness(values[i], x[i])
    return values


def evolve(objective, bounds: SearchBounds, config: DEConfig, *,
           workers: Optional[int] = None,
           callback: Optional[Callable[[GenerationTrace], None]] = None) -> RunResult:
    """Minimize ``objective`` over ``bounds``.

    Parameters
    ----------
    objective : callable
        Maps a 1-D parameter vector to a finite float. If it also exposes
        ``evaluate_batch(X)`` the whole trial matrix is evaluated in one call.
    bounds : SearchBounds
    config : DEConfig
    workers : int, optional
        Thread count for evaluating per-vector objectives. Has no effect on
        the random stream, so results do not depend on it.
    callback : callable, optional
        Called with a :class:`GenerationTrace` after every generation.

    Returns
    -------
    RunResult
        ``history`` holds the population-best fitness for G = 0..generations.
    """
    rng = np.random.default_rng(config.seed)
    pop = initialize(bounds, config, rng)
    fitness = _evaluate(objective, pop.params, workers)
    pop.fitness = fitness
    n_eval = pop.size
    history = [float(fitness.min())]
    stop = config.stop
    strategy = config.strategy
    code = strategy.code
    k = strategy.n_random
    n, d = pop.params.shape
    stall = 0
    reason = "max_generations"

    for g in range(1, stop.max_generations + 1):
        x = pop.params
        best = int(np.argmin(fitness))
        idx = draw_indices(rng, n, k)
        r = rng.random((n, d))
        jrand = rng.integers(d, size=n)
        mutants = _kernels.de_mutate(x, idx, best, code, config.f)
        trials = _kernels.de_crossover(x, bounds.clip(mutants), r, jrand, config.cr)
        trial_fit = _evaluate(objective, trials, workers)
        n_eval += n
        keep = trial_fit <= fitness
        new_x = np.where(keep[:, None], trials, x)
        new_fit = np.where(keep, trial_fit, fitness)
        new_pop = Population(new_x, new_fit, g)
        if callback is not None:
            callback(GenerationTrace(g, x, fitness, idx, best, jrand, trials, trial_fit, new_pop))
        prev_best = history[-1]
        pop, fitness = new_pop, new_fit
        history.append(float(fitness.min()))
        if stop.target_fitness is not None and history[-1] <= stop.target_fitness:
            reason = "target_reached"
            break
        if stop.stagnation_generations is not None:
            stall = 0 if prev_best - history[-1] > STAGNATION_TOL else stall + 1
            if stall >= stop.stagnation_generations:
                reason = "stagnation"
                break

    b = int(np.argmin(fitness))
    return RunResult(
        best=Individual(pop.params[b].copy(), float(fitness[b])),
        history=np.asarray(history),
        generations=pop.generation,
        stop_reason=reason,
        n_evaluations=n_eval,
        config=config,
    )
