"""Peer-assessment questionnaire: records, CSV I/O and aggregations."""

from .aggregate import (
    RespondentStats,
    ThresholdEntry,
    ThresholdReport,
    median_profile,
    respondent_stats,
    threshold_breakdown,
    threshold_report,
)
from .design import DesignMatrix, ResponseEncoding, design_matrix
from .io import COLUMNS, export, ingest
from .records import (
    GRID,
    QUESTIONS,
    RATING_QUESTIONS,
    SEX_CODES,
    THRESHOLDS,
    AssessmentRecord,
    Dataset,
    Rejection,
    RespondentGroup,
    parse_rating,
)

__all__ = [
    "AssessmentRecord", "COLUMNS", "Dataset", "DesignMatrix", "GRID", "QUESTIONS",
    "RATING_QUESTIONS", "Rejection", "RespondentGroup", "RespondentStats",
    "ResponseEncoding", "SEX_CODES", "THRESHOLDS", "ThresholdEntry", "ThresholdReport",
    "design_matrix", "export", "ingest", "median_profile", "parse_rating",
    "respondent_stats", "threshold_breakdown", "threshold_report",
]
