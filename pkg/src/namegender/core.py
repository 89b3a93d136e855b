"""Domain types and the signed-score algebra used by every backend.

A prediction carries a single signed score in ``[-1, +1]``: positive means
male, negative means female and exactly zero means the backend abstained.
The label is always derivable from the sign of the score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import pycountry

from .errors import ContractError, EmptyNameError


class GenderLabel(str, Enum):
    MALE = "male"
    FEMALE = "female"
    MOSTLY_MALE = "mostly_male"
    MOSTLY_FEMALE = "mostly_female"
    UNKNOWN = "unknown"


class BackendId(str, Enum):
    """Every inference method; declaration order is the report column order."""

    SSA = "SSA"
    CENSUS = "Census"
    DICT = "Dict"
    GENDERIZE = "Genderize"
    FACE = "Face"
    MIXED1 = "Mixed1"
    MIXED2 = "Mixed2"

    @classmethod
    def parse(cls, text: str) -> "BackendId":
        folded = text.strip().lower()
        for member in cls:
            if member.value.lower() == folded:
                return member
        raise ValueError(f"unknown method {text!r}; expected one of "
                         + ", ".join(m.value.lower() for m in cls))

    def __str__(self) -> str:
        return self.value


def label_for_score(score: float) -> GenderLabel:
    if score > 0:
        return GenderLabel.MALE
    if score < 0:
        return GenderLabel.FEMALE
    return GenderLabel.UNKNOWN


@dataclass(frozen=True)
class Prediction:
    label: GenderLabel
    score: float
    source: BackendId

    def __post_init__(self):
        if math.isnan(self.score) or abs(self.score) > 1.0:
            raise ContractError(f"score {self.score!r} outside [-1, 1]")
        if self.score == 0.0:
            # -0.0 would print as "-0"
            object.__setattr__(self, "score", 0.0)
        if label_for_score(self.score) is not self.label:
            raise ContractError(f"label {self.label.value} disagrees with score {self.score!r}")

    @classmethod
    def from_score(cls, score: float, source: BackendId) -> "Prediction":
        return cls(label_for_score(score), score, source)

    @property
    def decided(self) -> bool:
        return self.label is not GenderLabel.UNKNOWN

    def relabel(self, source: BackendId) -> "Prediction":
        return Prediction(self.label, self.score, source)


def prediction_from_probability(p_male: float, source: BackendId) -> Prediction:
    """Map a probability of "male" onto the signed score ``2*p - 1``."""
    if not 0.0 <= p_male <= 1.0:
        raise ContractError(f"probability {p_male!r} outside [0, 1]")
    return Prediction.from_score(2.0 * p_male - 1.0, source)


def abstain(source: BackendId) -> Prediction:
    return Prediction(GenderLabel.UNKNOWN, 0.0, source)


# Kosovo is user-assigned in ISO 3166-1 but widely used, including by name lists.
_EXTRA_COUNTRY_CODES = {"XK"}


def is_country_code(code: str) -> bool:
    code = code.upper()
    if len(code) != 2 or not code.isalpha():
        return False
    return code in _EXTRA_COUNTRY_CODES or pycountry.countries.get(alpha_2=code) is not None


def country_name(code: str) -> str:
    entry = pycountry.countries.get(alpha_2=code.upper())
    if entry is None:
        return code
    return getattr(entry, "common_name", None) or entry.name


@dataclass(frozen=True)
class PersonRecord:
    """One labelled individual from an evaluation dataset."""

    full_name: str
    country: str | None
    true_gender: GenderLabel

    def __post_init__(self):
        if not self.full_name or not self.full_name.strip():
            raise EmptyNameError("full_name is empty")
        if self.country is not None:
            if not is_country_code(self.country):
                raise ContractError(f"unrecognised country code {self.country!r}")
            object.__setattr__(self, "country", self.country.upper())
        if self.true_gender not in (GenderLabel.MALE, GenderLabel.FEMALE):
            raise ContractError(f"ground truth must be male or female, got {self.true_gender!r}")
