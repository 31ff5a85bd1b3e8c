from pathlib import Path

import numpy as np
import pytest

from peerde.survey import AssessmentRecord, Dataset

DATA = Path(__file__).parent / "data"


@pytest.fixture
def hand8_path():
    return DATA / "hand8.csv"


def make_record(rid="r1", sid="s1", group="child", age=12, q9="F", own_child=False, **ratings):
    values = {f"q{i}": 1.0 for i in range(1, 9)}
    values.update(ratings)
    return AssessmentRecord(rid, group, sid, age, q9=q9, own_child=own_child, **values)


def dataset_from_column(question, values, group="child"):
    """One record per value, each from a distinct respondent."""
    recs = [make_record(rid=f"r{i}", sid=f"s{i}", group=group, **{question: v})
            for i, v in enumerate(values)]
    return Dataset(tuple(recs))


def random_dataset(rng, n=60):
    grid = np.arange(7) / 2.0
    recs = []
    for i in range(n):
        group = rng.choice(["child", "student", "parent"])
        ratings = {f"q{j}": float(rng.choice(grid)) for j in range(1, 9)}
        if rng.random() < 0.2:
            ratings["q1"] = None
        recs.append(make_record(rid=f"r{i % 17}-{group}", sid=f"s{i}", group=group,
                                age=int(rng.integers(10, 23)), q9=str(rng.choice(["F", "M", "U"])),
                                **ratings))
    return Dataset(tuple(recs))


ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail=""):
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())
    print(ACCEPTANCE_LINES[-1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
