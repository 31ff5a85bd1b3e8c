"""Synthetic peer-assessment studies with known ground truth.

Each subject gets a true HIU rating on the half-step grid, one self-report,
one parental report and several peer reports. Self-reports under-report and
parental reports err in both directions with fixed probabilities; peer
reports add Gaussian noise that is snapped back to the grid.

Record conventions in the generated :class:`~peerde.survey.Dataset`:
a self-report has ``respondent_id == subject_id``; parental reports come from
group ``parent`` with ``own_child`` set; everything else is a peer report.
The reported HIU rating is stored in Q8.
"""

from __future__ import annotations

import csv
import os
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, IncompleteStudyError
from .survey.io import export
from .survey.records import GRID, MAX_AGE, MIN_AGE, AssessmentRecord, Dataset, RespondentGroup

STEP = 0.5
_GRID = np.asarray(GRID)


@dataclass(frozen=True)
class PopulationProfile:
    n_subjects: int = 300
    true_hiu_distribution: tuple[float, ...] = tuple([1.0 / 7] * 7)
    sex_mix: tuple[float, float, float] = (0.48, 0.48, 0.04)
    peers_per_subject: tuple[int, int] = (5, 5)
    # added to the latent truth of male subjects, in rating units
    male_shift: float = 0.0
    # sd of the other questionnaire items around the reported rating
    item_noise_sd: float = 0.5
    q1_na_prob: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.true_hiu_distribution, dtype=np.float64)
        if w.shape != (len(GRID),) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ConfigError("true_hiu_distribution needs 7 non-negative weights summing to 1")
        s = np.asarray(self.sex_mix, dtype=np.float64)
        if s.shape != (3,) or np.any(s < 0) or abs(s.sum() - 1.0) > 1e-12:
            raise ConfigError("sex_mix needs 3 non-negative weights summing to 1")
        lo, hi = self.peers_per_subject
        if lo < 1 or hi < lo:
            raise ConfigError("peers_per_subject must satisfy 1 <= min <= max")
        if self.n_subjects < 2 or hi > self.n_subjects - 1:
            raise ConfigError("need more subjects than peers per subject")
        if self.item_noise_sd < 0 or not 0.0 <= self.q1_na_prob <= 1.0:
            raise ConfigError("invalid item noise or Q1 N/A probability")


@dataclass(frozen=True)
class ReporterBias:
    self_underreport_prob: float = 0.365
    parent_under_prob: float = 0.357
    parent_over_prob: float = 0.348
    peer_noise_sd: float = 0.5
    step: float = STEP

    def __post_init__(self):
        probs = (self.self_underreport_prob, self.parent_under_prob, self.parent_over_prob)
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ConfigError("bias probabilities must lie in [0, 1]")
        if self.parent_under_prob + self.parent_over_prob > 1.0:
            raise ConfigError("parent_under_prob + parent_over_prob must not exceed 1")
        if self.peer_noise_sd < 0:
            raise ConfigError("peer_noise_sd must be non-negative")
        if self.step < 0 or self.step * 2 != round(self.step * 2):
            raise ConfigError("step must be a non-negative multiple of 0.5")

    @classmethod
    def zero(cls, peer_noise_sd: float = 0.0) -> "ReporterBias":
        return cls(0.0, 0.0, 0.0, peer_noise_sd)


@dataclass
class SyntheticStudy:
    dataset: Dataset
    ground_truth: dict[str, float]
    seed: int
    profile: PopulationProfile = field(default_factory=PopulationProfile)
    bias: ReporterBias = field(default_factory=ReporterBias)

    def export(self, survey_path, truth_path) -> None:
        """Write the survey CSV and a companion ``subject_id,true_rating`` CSV."""
        export(self.dataset, survey_path)
        write_truth(self, truth_path)


def snap(x):
    """Nearest grid point, clamped to [0, 3]."""
    return np.clip(np.round(np.asarray(x) * 2.0) / 2.0, 0.0, 3.0)


def generate(profile: PopulationProfile = PopulationProfile(),
             bias: ReporterBias = ReporterBias(), seed: int = 0) -> SyntheticStudy:
    """Draw one synthetic study. Identical arguments give identical output."""
    if not isinstance(profile, PopulationProfile) or not isinstance(bias, ReporterBias):
        raise ConfigError("profile and bias must be PopulationProfile and ReporterBias")
    rng = np.random.default_rng(seed)
    n = profile.n_subjects
    ids = [f"s{i:05d}" for i in range(n)]
    truth = _GRID[rng.choice(len(GRID), size=n, p=profile.true_hiu_distribution)]
    sex = np.array(["F", "M", "U"])[rng.choice(3, size=n, p=profile.sex_mix)]
    truth = np.where(sex == "M", snap(truth + profile.male_shift), truth)
    ages = rng.integers(MIN_AGE, MAX_AGE + 1, size=n)

    u = rng.random(n)
    self_rep = np.where(u < bias.self_underreport_prob, np.maximum(truth - bias.step, 0.0), truth)
    u = rng.random(n)
    down = u < bias.parent_under_prob
    up = ~down & (u < bias.parent_under_prob + bias.parent_over_prob)
    parent_rep = np.where(down, np.maximum(truth - bias.step, 0.0),
                          np.where(up, np.minimum(truth + bias.step, 3.0), truth))

    lo, hi = profile.peers_per_subject
    n_peers = rng.integers(lo, hi + 1, size=n)
    records = []
    for i in range(n):
        sid = ids[i]
        reports = [(sid, RespondentGroup.CHILD, self_rep[i], False),
                   (f"p{i:05d}", RespondentGroup.PARENT, parent_rep[i], True)]
        picks = rng.choice(n - 1, size=n_peers[i], replace=False)
        picks = picks + (picks >= i)
        peer_vals = snap(truth[i] + bias.peer_noise_sd * rng.standard_normal(n_peers[i]))
        reports += [(ids[j], RespondentGroup.CHILD, v, False) for j, v in zip(picks, peer_vals)]
        for rid, group, rating, own in reports:
            items = snap(rating + profile.item_noise_sd * rng.standard_normal(7))
            q1 = None if rng.random() < profile.q1_na_prob else float(items[0])
            records.append(AssessmentRecord(
                respondent_id=rid, respondent_group=group, subject_id=sid,
                subject_age=int(ages[i]), q1=q1,
                q2=float(items[1]), q3=float(items[2]), q4=float(items[3]),
                q5=float(items[4]), q6=float(items[5]), q7=float(items[6]),
                q8=float(rating), q9=str(sex[i]), own_child=own,
            ))
    ds = Dataset(tuple(records), f"synthgen seed={seed}")
    return SyntheticStudy(ds, dict(zip(ids, truth.tolist())), seed, profile, bias)


def report_kind(rec: AssessmentRecord) -> str:
    if rec.respondent_id == rec.subject_id:
        return "self"
    if rec.respondent_group is RespondentGroup.PARENT:
        return "parent"
    return "peer"


@dataclass(frozen=True)
class EstimatorErrors:
    self: float
    parent: float
    peer_median: float

    def to_dict(self) -> dict:
        return asdict(self)


def estimator_errors(study: SyntheticStudy) -> EstimatorErrors:
    """Mean absolute error over subjects of each estimator of the true rating.

    ``self`` and ``parent`` use the first report of that kind; ``peer_median``
    is the median of the subject's peer reports.
    """
    reports: dict[str, dict[str, list]] = {sid: {"self": [], "parent": [], "peer": []}
                                           for sid in study.ground_truth}
    for rec in study.dataset.records:
        if rec.subject_id not in reports:
            raise IncompleteStudyError(f"subject {rec.subject_id} has no ground truth")
        reports[rec.subject_id][report_kind(rec)].append(rec.q8)
    err = {"self": [], "parent": [], "peer": []}
    for sid, t in study.ground_truth.items():
        r = reports[sid]
        for kind in err:
            if not r[kind]:
                raise IncompleteStudyError(f"subject {sid} has no {kind} report")
        err["self"].append(abs(r["self"][0] - t))
        err["parent"].append(abs(r["parent"][0] - t))
        err["peer"].append(abs(float(np.median(r["peer"])) - t))
    return EstimatorErrors(float(np.mean(err["self"])), float(np.mean(err["parent"])),
                           float(np.mean(err["peer"])))


def replicate(profile: PopulationProfile, bias: ReporterBias, reps: int, seed: int = 0,
              workers: Optional[int] = None) -> list[EstimatorErrors]:
    """Estimator errors for ``reps`` independent studies.

    Replication ``r`` uses the ``r``-th child of ``SeedSequence(seed)``, so the
    result does not depend on ``workers``.
    """
    if reps < 1:
        raise ConfigError("replications must be >= 1")
    seeds = [int(s.generate_state(1, dtype=np.uint64)[0])
             for s in np.random.SeedSequence(seed).spawn(reps)]
    jobs = [(profile, bias, s) for s in seeds]
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_replicate_one, jobs))
    return [_replicate_one(j) for j in jobs]


def _replicate_one(args):
    profile, bias, s = args
    return estimator_errors(generate(profile, bias, s))


def write_truth(study: SyntheticStudy, path: os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["subject_id", "true_rating"])
        for sid, t in study.ground_truth.items():
            w.writerow([sid, f"{t:g}"])
