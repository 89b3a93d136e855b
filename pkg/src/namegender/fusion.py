"""Combine face observations into one image prediction, and fuse name and image predictions."""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import Callable, Iterable, Optional

from .core import BackendId, Prediction, abstain
from .errors import ContractError
from .web.types import FaceObservation


@dataclass(frozen=True)
class ImageEvidence:
    """Per-thumbnail scores for one query; ``None`` where no face was found."""

    query: str
    per_image: tuple[Optional[float], ...]

    def __post_init__(self):
        if len(self.per_image) > 5:
            raise ContractError("at most 5 images per query")
        for s in self.per_image:
            if s is not None and abs(s) > 1.0:
                raise ContractError(f"image score {s!r} outside [-1, 1]")

    def prediction(self) -> Prediction:
        present = [s for s in self.per_image if s is not None]
        if not present:
            return abstain(BackendId.FACE)
        return Prediction.from_score(fmean(present), BackendId.FACE)


def _face_score(obs: FaceObservation) -> float:
    sign = 1.0 if obs.gender == "male" else -1.0
    return sign * obs.confidence / 100.0


def image_evidence(query: str, observations: Iterable[FaceObservation], images_retrieved: int) -> ImageEvidence:
    """Keep the largest face per thumbnail (first one on equal area) and score it."""
    best: dict[int, FaceObservation] = {}
    for obs in observations:
        if not 1 <= obs.image_rank <= images_retrieved:
            raise ContractError(f"observation rank {obs.image_rank} outside 1..{images_retrieved}")
        current = best.get(obs.image_rank)
        if current is None or obs.area > current.area:
            best[obs.image_rank] = obs
    per_image = tuple(
        _face_score(best[rank]) if rank in best else None
        for rank in range(1, images_retrieved + 1)
    )
    return ImageEvidence(query, per_image)


def aggregate_faces(observations: Iterable[FaceObservation], images_retrieved: int, query: str = "") -> Prediction:
    return image_evidence(query, observations, images_retrieved).prediction()


def mixed1(name_pred: Prediction, image_pred_supplier: Callable[[], Prediction]) -> Prediction:
    """Cascade: trust the name prediction when it decides, otherwise ask the images.

    The supplier is only called on abstention, so thumbnails are fetched for
    the unresolved names alone.
    """
    if name_pred.source is not BackendId.GENDERIZE:
        raise ContractError(f"mixed1 expects a Genderize prediction, got {name_pred.source}")
    if name_pred.decided:
        return name_pred.relabel(BackendId.MIXED1)
    return image_pred_supplier().relabel(BackendId.MIXED1)


def mixed2(name_pred: Prediction, image_pred: Prediction) -> Prediction:
    # abstentions enter the mean as 0 rather than leaving the denominator
    return Prediction.from_score((name_pred.score + image_pred.score) / 2.0, BackendId.MIXED2)
