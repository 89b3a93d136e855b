from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from typing import Optional

from ..core import BackendId
from ..errors import ContractError, DecodeError


@dataclass(frozen=True)
class GenderizeResponse:
    name: str
    gender: Optional[str]
    probability: Optional[float] = None
    count: Optional[int] = None

    @classmethod
    def from_json(cls, body: bytes) -> "GenderizeResponse":
        try:
            data = json.loads(body)
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise DecodeError(f"genderize body is not JSON: {exc}") from None
        if not isinstance(data, dict) or "gender" not in data:
            raise DecodeError("genderize body lacks a 'gender' field")
        gender = data["gender"]
        name = str(data.get("name", ""))
        if gender is None:
            return cls(name, None, None, data.get("count") if isinstance(data.get("count"), int) else None)
        if gender not in ("male", "female"):
            raise DecodeError(f"unexpected gender value {gender!r}")
        prob = data.get("probability")
        if isinstance(prob, bool) or not isinstance(prob, (int, float)):
            raise DecodeError("genderize body lacks a numeric probability")
        prob = float(prob)
        if not 0.5 <= prob <= 1.0:
            raise DecodeError(f"probability {prob!r} outside [0.5, 1] for a non-null gender")
        count = data.get("count")
        if count is not None and (isinstance(count, bool) or not isinstance(count, int) or count < 0):
            raise DecodeError(f"invalid count {count!r}")
        return cls(name, gender, prob, count)


@dataclass(frozen=True)
class FaceObservation:
    image_rank: int
    bounding_box: tuple[int, int, int, int]  # x, y, width, height
    gender: str
    confidence: float

    def __post_init__(self):
        if not 1 <= self.image_rank <= 5:
            raise ContractError(f"image_rank {self.image_rank} outside 1..5")
        _, _, w, h = self.bounding_box
        if w <= 0 or h <= 0:
            raise ContractError(f"degenerate bounding box {self.bounding_box}")
        if self.gender not in ("male", "female"):
            raise ContractError(f"gender must be male or female, got {self.gender!r}")
        if not 0.0 <= self.confidence <= 100.0:
            raise ContractError(f"confidence {self.confidence!r} outside [0, 100]")

    @property
    def area(self) -> int:
        return self.bounding_box[2] * self.bounding_box[3]


@dataclass(frozen=True)
class CachedResponse:
    backend: BackendId
    query: str
    fetched_at: datetime
    payload: bytes
    status: int

    @property
    def ok(self) -> bool:
        return 200 <= self.status < 300
