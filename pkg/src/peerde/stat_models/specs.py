"""Model specifications and the default M1-M6 catalog."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

from ..errors import ConfigError
from ..survey.design import ResponseEncoding
from ..survey.records import RespondentGroup, question_key


class Family(enum.Enum):
    BINARY = "binary_logit"
    ORDERED = "ordered_logit"


@dataclass(frozen=True)
class ModelSpec:
    id: str
    response_question: str
    encoding: ResponseEncoding
    regressors: tuple[str, ...]
    group: Optional[RespondentGroup]
    family: Family
    description: str = ""

    def __post_init__(self):
        rq = question_key(self.response_question)
        regs = tuple(question_key(q) for q in self.regressors)
        object.__setattr__(self, "response_question", rq)
        object.__setattr__(self, "regressors", regs)
        if self.group is not None:
            object.__setattr__(self, "group", RespondentGroup.parse(self.group))
        object.__setattr__(self, "family", Family(self.family))
        if rq in regs:
            raise ConfigError("response question cannot also be a regressor")
        if len(set(regs)) != len(regs):
            raise ConfigError("duplicate regressor")
        if not regs:
            raise ConfigError("model needs at least one regressor")
        if self.family is Family.ORDERED and self.encoding.kind != "ordered":
            raise ConfigError("ordered logit needs an ordered response (>= 3 categories)")
        if self.family is Family.BINARY and self.encoding.kind == "ordered":
            raise ConfigError("binary logit needs a binary response encoding")

    @property
    def k(self) -> int:
        return len(self.regressors)

    def as_binary(self, threshold: float = 2.0) -> "ModelSpec":
        """Same model with the response dichotomized at ``threshold``."""
        if self.family is Family.BINARY:
            return self
        return replace(self, encoding=ResponseEncoding("binary", threshold), family=Family.BINARY)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "response": self.response_question,
            "encoding": self.encoding.kind,
            "threshold": self.encoding.threshold if self.encoding.kind == "binary" else None,
            "regressors": list(self.regressors),
            "group": None if self.group is None else self.group.value,
            "family": self.family.value,
        }


_ORD = ResponseEncoding("ordered")
_FEMALE = ResponseEncoding("female")
_CHILD, _PARENT = RespondentGroup.CHILD, RespondentGroup.PARENT
_ALL_BUT = lambda *skip: tuple(q for q in ("q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9") if q not in skip)  # noqa: E731

CATALOG: dict[str, ModelSpec] = {
    "M1": ModelSpec("M1", "q6", _ORD, ("q3", "q4", "q5", "q7"), _CHILD, Family.ORDERED,
                    "children: failed attempts to cut down (Q6)"),
    "M2": ModelSpec("M2", "q7", _ORD, _ALL_BUT("q7"), _CHILD, Family.ORDERED,
                    "children: school performance (Q7)"),
    "M3": ModelSpec("M3", "q9", _FEMALE, ("q8",), _CHILD, Family.BINARY,
                    "children: subject sex against HIU rating (Q9 ~ Q8)"),
    "M4": ModelSpec("M4", "q6", _ORD, ("q3", "q4", "q5", "q7"), _PARENT, Family.ORDERED,
                    "parents: failed attempts to cut down (Q6)"),
    "M5": ModelSpec("M5", "q7", _ORD, _ALL_BUT("q7"), _PARENT, Family.ORDERED,
                    "parents: school performance (Q7)"),
    "M6": ModelSpec("M6", "q9", _FEMALE, ("q8",), _PARENT, Family.BINARY,
                    "parents: subject sex against HIU rating (Q9 ~ Q8)"),
}


def catalog_spec(model_id: str, binary: bool = False, threshold: float = 2.0) -> ModelSpec:
    try:
        spec = CATALOG[model_id.upper()]
    except KeyError:
        raise ConfigError(f"unknown model {model_id!r} (expected one of {', '.join(CATALOG)})") from None
    return spec.as_binary(threshold) if binary else spec


def custom_spec(response: str, regressors, group=None, encoding: str = "binary",
                threshold: float = 2.0) -> ModelSpec:
    enc = ResponseEncoding(encoding, threshold)
    family = Family.ORDERED if encoding == "ordered" else Family.BINARY
    return ModelSpec("Custom", response, enc, tuple(regressors), group, family)
