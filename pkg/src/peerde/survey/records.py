"""Record types for the 0-3 peer-assessment questionnaire."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

GRID = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
RATING_QUESTIONS = ("q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8")
QUESTIONS = RATING_QUESTIONS + ("q9",)
SEX_CODES = ("F", "M", "U")
THRESHOLDS = (1.5, 2.0, 2.5, 3.0)
MIN_AGE, MAX_AGE = 10, 22


class RespondentGroup(enum.Enum):
    CHILD = "child"
    STUDENT = "student"
    PARENT = "parent"

    @classmethod
    def parse(cls, value) -> "RespondentGroup":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError("invalid group") from None


def parse_rating(value) -> float:
    """Return ``value`` as a float on the half-step grid or raise ValueError."""
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ValueError("invalid rating") from None
    if not math.isfinite(x) or x * 2 != round(x * 2) or not 0.0 <= x <= 3.0:
        raise ValueError("invalid rating")
    return x


def question_key(q) -> str:
    key = str(q).strip().lower()
    if not key.startswith("q"):
        key = "q" + key
    if key not in QUESTIONS:
        raise ValueError(f"unknown question {q!r}")
    return key


@dataclass(frozen=True)
class AssessmentRecord:
    """One respondent's evaluation of one subject.

    ``q1`` is ``None`` when the respondent marked Q1 as not applicable.
    ``q9`` codes the assessed subject's sex.
    """

    respondent_id: str
    respondent_group: RespondentGroup
    subject_id: str
    subject_age: int
    q1: Optional[float]
    q2: float
    q3: float
    q4: float
    q5: float
    q6: float
    q7: float
    q8: float
    q9: str
    own_child: bool = False

    def __post_init__(self):
        object.__setattr__(self, "respondent_group", RespondentGroup.parse(self.respondent_group))
        if isinstance(self.subject_age, bool) or int(self.subject_age) != self.subject_age:
            raise ValueError("invalid age")
        if not MIN_AGE <= self.subject_age <= MAX_AGE:
            raise ValueError("invalid age")
        object.__setattr__(self, "subject_age", int(self.subject_age))
        for q in RATING_QUESTIONS:
            v = getattr(self, q)
            if v is None and q == "q1":
                continue
            object.__setattr__(self, q, parse_rating(v))
        if self.q9 not in SEX_CODES:
            raise ValueError("invalid sex")
        if self.own_child and self.respondent_group is not RespondentGroup.PARENT:
            raise ValueError("invalid own_child")

    @property
    def q1_na(self) -> bool:
        return self.q1 is None

    def rating(self, question: str) -> Optional[float]:
        return getattr(self, question_key(question))


@dataclass(frozen=True)
class Rejection:
    line: int
    reason: str


@dataclass(frozen=True)
class Dataset:
    """Immutable collection of assessment records.

    Equality compares the records only; ``provenance`` and ``rejections``
    are bookkeeping.
    """

    records: tuple[AssessmentRecord, ...] = ()
    provenance: str = field(default="", compare=False)
    rejections: tuple[Rejection, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        for rec in self.records:
            key = (rec.respondent_id, rec.subject_id)
            if key in seen:
                raise ValueError("duplicate assessment")
            seen.add(key)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def filter(self, group=None, sex=None) -> "Dataset":
        if group is None and sex is None:
            return self
        g = None if group is None else RespondentGroup.parse(group)
        recs = tuple(
            r for r in self.records
            if (g is None or r.respondent_group is g) and (sex is None or r.q9 == sex)
        )
        return Dataset(recs, self.provenance)

    def column(self, question) -> np.ndarray:
        """Ratings of one question as floats, NaN where not applicable."""
        return self._columns[question_key(question)]

    @cached_property
    def _columns(self) -> dict:
        cols = {}
        for q in RATING_QUESTIONS:
            cols[q] = np.array(
                [np.nan if getattr(r, q) is None else getattr(r, q) for r in self.records],
                dtype=np.float64,
            )
        cols["q9"] = np.array([r.q9 for r in self.records], dtype="<U1")
        return cols
