"""CSV ingestion and export for survey datasets."""

from __future__ import annotations

import csv
import io
import os
from typing import IO, Union

from ..errors import IngestError
from .records import RATING_QUESTIONS, AssessmentRecord, Dataset, Rejection

COLUMNS = (
    "respondent_id", "group", "subject_id", "age",
    "q1", "q1_na", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9", "own_child",
)

Source = Union[str, os.PathLike, IO[str]]


def _flag(text: str) -> bool:
    t = text.strip()
    if t not in ("0", "1"):
        raise ValueError
    return t == "1"


def _parse_row(row: dict) -> AssessmentRecord:
    try:
        age = int(row["age"].strip())
    except ValueError:
        raise ValueError("invalid age") from None
    try:
        na = _flag(row["q1_na"])
    except ValueError:
        raise ValueError("invalid q1_na") from None
    try:
        own = _flag(row["own_child"])
    except ValueError:
        raise ValueError("invalid own_child") from None
    ratings = {}
    for q in RATING_QUESTIONS:
        text = row[q].strip()
        if q == "q1" and na:
            ratings[q] = None
            continue
        ratings[q] = text
    if not row["respondent_id"].strip() or not row["subject_id"].strip():
        raise ValueError("invalid id")
    sex = row["q9"].strip().upper()
    if sex not in ("F", "M", "U"):
        raise ValueError("invalid sex")
    return AssessmentRecord(
        respondent_id=row["respondent_id"].strip(),
        respondent_group=row["group"],
        subject_id=row["subject_id"].strip(),
        subject_age=age,
        q9=sex,
        own_child=own,
        **ratings,
    )


def ingest(source: Source, provenance: str | None = None) -> Dataset:
    """Read a survey CSV into a validated :class:`Dataset`.

    Invalid rows are skipped and listed in ``Dataset.rejections`` with their
    1-based line number in the file (the header is line 1). A missing or
    malformed header raises :class:`IngestError`.
    """
    if isinstance(source, (str, os.PathLike)):
        try:
            with open(source, newline="", encoding="utf-8") as fh:
                return ingest(fh, provenance or os.fspath(source))
        except OSError as exc:
            raise IngestError(f"cannot read {source}: {exc}") from exc
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("missing header row") from None
    except (csv.Error, UnicodeDecodeError) as exc:
        raise IngestError(str(exc)) from exc
    header = [h.strip() for h in header]
    if header != list(COLUMNS):
        raise IngestError(f"header must be {','.join(COLUMNS)}")

    records = []
    rejections = []
    seen = set()
    groups = {}
    try:
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(COLUMNS):
                rejections.append(Rejection(line, "wrong column count"))
                continue
            try:
                rec = _parse_row(dict(zip(COLUMNS, row)))
            except ValueError as exc:
                rejections.append(Rejection(line, str(exc)))
                continue
            key = (rec.respondent_id, rec.subject_id)
            if key in seen:
                rejections.append(Rejection(line, "duplicate assessment"))
                continue
            if groups.setdefault(rec.respondent_id, rec.respondent_group) is not rec.respondent_group:
                rejections.append(Rejection(line, "inconsistent group"))
                continue
            seen.add(key)
            records.append(rec)
    except (csv.Error, UnicodeDecodeError) as exc:
        raise IngestError(str(exc)) from exc
    return Dataset(tuple(records), provenance or "", tuple(rejections))


def _fmt(v) -> str:
    return "" if v is None else f"{v:g}"


def export(ds: Dataset, dest: Source | None = None) -> str | None:
    """Write ``ds`` in the ingest format. Returns the text when ``dest`` is None."""
    if dest is None:
        buf = io.StringIO()
        export(ds, buf)
        return buf.getvalue()
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            export(ds, fh)
        return None
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in ds.records:
        w.writerow([
            r.respondent_id, r.respondent_group.value, r.subject_id, r.subject_age,
            _fmt(r.q1), int(r.q1_na), _fmt(r.q2), _fmt(r.q3), _fmt(r.q4), _fmt(r.q5),
            _fmt(r.q6), _fmt(r.q7), _fmt(r.q8), r.q9, int(r.own_child),
        ])
    return None
