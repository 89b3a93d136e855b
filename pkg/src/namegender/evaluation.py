"""Abstention-aware classification metrics and per-country accuracy.

Abstentions count against recall and accuracy but never against precision:
precision for a class only looks at records predicted as that class.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, fields
from typing import Iterable, Mapping, Sequence

from .core import BackendId, GenderLabel, PersonRecord, Prediction
from .errors import ContractError, EmptyDatasetError

OTHER = "other"
DEFAULT_MIN_COUNTRY_INSTANCES = 20


@dataclass(frozen=True)
class ConfusionTally:
    """Cell counts; ``fp_f`` is true males predicted female, ``fp_m`` true females predicted male."""

    tp_f: int = 0
    fp_f: int = 0
    tp_m: int = 0
    fp_m: int = 0
    abstain_f: int = 0
    abstain_m: int = 0

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ContractError(f"{f.name} is negative")

    @property
    def n_female(self) -> int:
        return self.tp_f + self.fp_m + self.abstain_f

    @property
    def n_male(self) -> int:
        return self.tp_m + self.fp_f + self.abstain_m

    @property
    def n(self) -> int:
        return self.n_female + self.n_male

    @property
    def correct(self) -> int:
        return self.tp_f + self.tp_m

    @property
    def decided(self) -> int:
        return self.tp_f + self.fp_f + self.tp_m + self.fp_m

    def __add__(self, other: "ConfusionTally") -> "ConfusionTally":
        if not isinstance(other, ConfusionTally):
            return NotImplemented
        return ConfusionTally(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))


def _outcome(truth: GenderLabel, pred: Prediction) -> str:
    female = truth is GenderLabel.FEMALE
    if pred.label is GenderLabel.UNKNOWN:
        return "abstain_f" if female else "abstain_m"
    if pred.label is GenderLabel.FEMALE:
        return "tp_f" if female else "fp_f"
    if pred.label is GenderLabel.MALE:
        return "fp_m" if female else "tp_m"
    raise ContractError(f"prediction label {pred.label.value} is not a final label")


def tally(records: Iterable[tuple[PersonRecord, Prediction]]) -> ConfusionTally:
    cells = dict.fromkeys((f.name for f in fields(ConfusionTally)), 0)
    for person, pred in records:
        cells[_outcome(person.true_gender, pred)] += 1
    return ConfusionTally(**cells)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class MethodMetrics:
    """One column of the per-method table.

    A zero-support flag means the denominator was empty and the matching
    value was reported as 1.0 by convention.
    """

    precision_f: float
    recall_f: float
    f1_f: float
    precision_m: float
    recall_m: float
    f1_m: float
    accuracy: float
    coverage: float
    n: int
    zero_support_precision_f: bool = False
    zero_support_precision_m: bool = False
    zero_support_recall_f: bool = False
    zero_support_recall_m: bool = False


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 1.0, True
    return num / den, False


def metrics(t: ConfusionTally) -> MethodMetrics:
    if t.n == 0:
        raise EmptyDatasetError("cannot compute metrics over zero records")
    p_f, zp_f = _ratio(t.tp_f, t.tp_f + t.fp_f)
    p_m, zp_m = _ratio(t.tp_m, t.tp_m + t.fp_m)
    r_f, zr_f = _ratio(t.tp_f, t.n_female)
    r_m, zr_m = _ratio(t.tp_m, t.n_male)
    return MethodMetrics(
        precision_f=p_f, recall_f=r_f, f1_f=f1_score(p_f, r_f),
        precision_m=p_m, recall_m=r_m, f1_m=f1_score(p_m, r_m),
        accuracy=t.correct / t.n, coverage=t.decided / t.n, n=t.n,
        zero_support_precision_f=zp_f, zero_support_precision_m=zp_m,
        zero_support_recall_f=zr_f, zero_support_recall_m=zr_m,
    )


def accuracy_identity_check(recall_f: float, recall_m: float, n_f: int, n_m: int) -> float:
    """Accuracy implied by per-class recalls and class sizes."""
    if n_f <= 0 or n_m <= 0:
        raise ContractError("class counts must be positive")
    return (recall_f * n_f + recall_m * n_m) / (n_f + n_m)


@dataclass(frozen=True)
class CountryReport:
    """Per-country accuracy; ``instances`` is ordered by count descending, ``other`` last."""

    instances: Mapping[str, int]
    accuracy: Mapping[BackendId, Mapping[str, float]]
    min_instances: int

    @property
    def countries(self) -> list[str]:
        return list(self.instances)


def _group_by_source(records) -> dict[BackendId, list[tuple[PersonRecord, Prediction]]]:
    grouped: dict[BackendId, list] = defaultdict(list)
    for person, pred in records:
        grouped[pred.source].append((person, pred))
    return grouped


def country_breakdown(records: Iterable[tuple[PersonRecord, Prediction]],
                      min_instances: int = DEFAULT_MIN_COUNTRY_INSTANCES) -> CountryReport:
    """Accuracy per country for every prediction source present in *records*.

    Countries with fewer than *min_instances* records, and records without a
    country, are pooled into the ``other`` row.
    """
    if min_instances < 1:
        raise ContractError("min_instances must be at least 1")
    grouped = _group_by_source(records)

    raw_counts: dict[str, int] | None = None
    for source, rows in grouped.items():
        counts: dict[str, int] = defaultdict(int)
        for person, _ in rows:
            counts[person.country or OTHER] += 1
        if raw_counts is None:
            raw_counts = dict(counts)
        elif dict(counts) != raw_counts:
            raise ContractError(f"{source} predictions cover a different set of records")
    raw_counts = raw_counts or {}

    def bucket(country: str | None) -> str:
        if country is None or raw_counts.get(country, 0) < min_instances:
            return OTHER
        return country

    instances: dict[str, int] = defaultdict(int)
    for country, count in raw_counts.items():
        instances[bucket(None if country == OTHER else country)] += count
    ordered = sorted((c for c in instances if c != OTHER), key=lambda c: (-instances[c], c))
    if OTHER in instances:
        ordered.append(OTHER)
    instances = {c: instances[c] for c in ordered}

    accuracy: dict[BackendId, dict[str, float]] = {}
    for source in sorted(grouped, key=list(BackendId).index):
        correct: dict[str, int] = defaultdict(int)
        for person, pred in grouped[source]:
            if pred.label is person.true_gender:
                correct[bucket(person.country)] += 1
        accuracy[source] = {c: correct[c] / instances[c] for c in ordered}
    return CountryReport(instances, accuracy, min_instances)


MethodReport = dict[BackendId, MethodMetrics]


def method_report(results: Mapping[BackendId, Sequence[tuple[PersonRecord, Prediction]]]) -> MethodReport:
    return {b: metrics(tally(results[b])) for b in BackendId if b in results}
