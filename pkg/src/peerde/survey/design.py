"""Regression design matrices built from survey records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DegenerateResponseError, EmptyDesignError
from .records import Dataset, question_key


@dataclass(frozen=True)
class ResponseEncoding:
    """How a questionnaire answer becomes a model response.

    kind
        ``"binary"``: 1 if rating >= ``threshold`` else 0.
        ``"ordered"``: rating floored to an integer level 0..3.
        ``"female"``: 1 if the Q9 code is ``F`` else 0.
    """

    kind: str = "binary"
    threshold: float = 2.0

    def __post_init__(self):
        if self.kind not in ("binary", "ordered", "female"):
            raise ValueError(f"unknown response encoding {self.kind!r}")


@dataclass(frozen=True)
class DesignMatrix:
    x: np.ndarray
    y: np.ndarray
    n_dropped: int
    columns: tuple[str, ...]
    levels: Optional[tuple[float, ...]] = None

    @property
    def n(self) -> int:
        return self.y.shape[0]


def _regressor_column(ds: Dataset, q: str) -> np.ndarray:
    if q == "q9":
        return (ds.column("q9") == "F").astype(np.float64)
    return ds.column(q)


def design_matrix(ds: Dataset, spec) -> DesignMatrix:
    """Intercept-first design matrix and encoded response for ``spec``.

    ``spec`` needs ``group``, ``response_question``, ``encoding`` and
    ``regressors``. Records with a not-applicable answer in any used question
    are dropped. Ordered responses are relabelled to consecutive categories
    0..C-1 over the levels actually observed (``levels`` keeps the originals).
    """
    sub = ds.filter(spec.group)
    n_all = len(sub)
    regs = [question_key(q) for q in spec.regressors]
    rq = question_key(spec.response_question)
    cols = [_regressor_column(sub, q) for q in regs]
    enc = spec.encoding
    if enc.kind == "female":
        if rq != "q9":
            raise ValueError("female encoding applies to Q9 only")
        raw_y = (sub.column("q9") == "F").astype(np.float64)
    else:
        if rq == "q9":
            raise ValueError("Q9 responses need the female encoding")
        raw_y = sub.column(rq)

    mask = ~np.isnan(raw_y)
    for c in cols:
        mask &= ~np.isnan(c)
    n = int(mask.sum())
    if n == 0:
        raise EmptyDesignError("no records left after listwise deletion")
    x = np.ones((n, len(regs) + 1))
    for j, c in enumerate(cols, start=1):
        x[:, j] = c[mask]
    raw_y = raw_y[mask]

    levels = None
    if enc.kind == "binary":
        y = (raw_y >= enc.threshold).astype(np.float64)
    elif enc.kind == "female":
        y = raw_y
    else:
        floored = np.floor(raw_y)
        uniq, y = np.unique(floored, return_inverse=True)
        y = y.astype(np.int64)
        levels = tuple(float(v) for v in uniq)
    if np.unique(y).size < 2:
        raise DegenerateResponseError(f"response {rq} takes a single value")
    return DesignMatrix(x, y, n_all - n, ("const",) + tuple(regs), levels)
