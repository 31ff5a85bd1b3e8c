"""Threshold totals, median profiles and per-respondent counts."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..errors import EmptySliceError
from .records import RATING_QUESTIONS, THRESHOLDS, Dataset, RespondentGroup, question_key


def _group_label(group) -> Optional[str]:
    return None if group is None else RespondentGroup.parse(group).value


@dataclass(frozen=True)
class ThresholdEntry:
    question: str
    group: Optional[str]
    threshold: float
    count_at_or_above: int
    n: int

    @property
    def fraction(self) -> float:
        return self.count_at_or_above / self.n


@dataclass(frozen=True)
class ThresholdReport:
    question: str
    group: Optional[str]
    thresholds: tuple[float, ...]
    fraction_at_or_above: tuple[float, ...]
    counts: tuple[int, ...]
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def threshold_breakdown(ds: Dataset, question, group=None, threshold: float = 2.0) -> ThresholdEntry:
    """Share of applicable answers rated at or above ``threshold``.

    Not-applicable answers are excluded from numerator and denominator.
    """
    q = question_key(question)
    if q not in RATING_QUESTIONS:
        raise ValueError("threshold totals are defined for Q1..Q8 only")
    if float(threshold) not in THRESHOLDS:
        raise ValueError(f"threshold must be one of {THRESHOLDS}")
    values = ds.filter(group).column(q)
    values = values[~np.isnan(values)]
    if values.size == 0:
        raise EmptySliceError(f"no applicable answers for {q}")
    return ThresholdEntry(q, _group_label(group), float(threshold),
                          int(np.count_nonzero(values >= threshold)), int(values.size))


def threshold_report(ds: Dataset, question, group=None) -> ThresholdReport:
    entries = [threshold_breakdown(ds, question, group, t) for t in THRESHOLDS]
    return ThresholdReport(
        question=entries[0].question,
        group=_group_label(group),
        thresholds=THRESHOLDS,
        fraction_at_or_above=tuple(e.fraction for e in entries),
        counts=tuple(e.count_at_or_above for e in entries),
        n=entries[0].n,
    )


def median_profile(ds: Dataset, group=None, sex: Optional[str] = None) -> dict[str, Optional[float]]:
    """Median rating per question; ``None`` marks a question with no applicable answers."""
    sub = ds.filter(group, sex)
    out = {}
    for q in RATING_QUESTIONS:
        v = sub.column(q)
        v = v[~np.isnan(v)]
        out[q] = float(np.median(v)) if v.size else None
    return out


@dataclass(frozen=True)
class RespondentStats:
    mean: float
    min: int
    max: int
    n_respondents: int

    def to_dict(self) -> dict:
        return asdict(self)


def respondent_stats(ds: Dataset, group=None) -> RespondentStats:
    counts = Counter(r.respondent_id for r in ds.filter(group).records)
    if not counts:
        raise EmptySliceError("no respondents in the selected group")
    c = np.fromiter(counts.values(), dtype=np.int64)
    return RespondentStats(float(c.mean()), int(c.min()), int(c.max()), int(c.size))
