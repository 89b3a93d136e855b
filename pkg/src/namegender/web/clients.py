"""Clients for the name API, the image search API and the face detection API."""

from __future__ import annotations

import json
import logging
from typing import Optional

from ..core import BackendId, Prediction, abstain, prediction_from_probability
from ..errors import ContractError, DecodeError, UpstreamError
from ..fusion import aggregate_faces
from ..normalize import image_query
from .transport import Fetcher, image_digest
from .types import FaceObservation, GenderizeResponse

log = logging.getLogger(__name__)

DEFAULT_GENDERIZE_ENDPOINT = "https://api.genderize.io"
DEFAULT_IMAGES_ENDPOINT = "https://www.googleapis.com/customsearch/v1"
DEFAULT_FACE_ENDPOINT = "https://api-us.faceplusplus.com/facepp/v3/detect"
DEFAULT_THUMBNAILS = 5


def _split_key(key: Optional[str]) -> tuple[Optional[str], Optional[str]]:
    # "key:secret" (face) or "key:cx" (image search)
    if not key:
        return None, None
    head, sep, tail = key.partition(":")
    return head, (tail if sep else None)


def _error_message(body: bytes) -> str:
    try:
        data = json.loads(body)
    except ValueError:
        return body[:200].decode("utf-8", "replace")
    if isinstance(data, dict):
        for field in ("error_message", "error", "message"):
            if field in data:
                return str(data[field])
    return ""


class GenderizeClient:
    def __init__(self, fetcher: Fetcher, endpoint: str = DEFAULT_GENDERIZE_ENDPOINT,
                 api_key: Optional[str] = None):
        self.fetcher = fetcher
        self.endpoint = endpoint
        self.api_key = api_key

    @staticmethod
    def cache_query(first_name: str, country: Optional[str]) -> str:
        query = f"name={first_name}"
        if country:
            query += f"&country_id={country.upper()}"
        return query

    def lookup_raw(self, first_name: str, country: Optional[str] = None) -> GenderizeResponse:
        if not first_name:
            raise ContractError("first name is empty")
        params = {"name": first_name}
        if country:
            params["country_id"] = country.upper()
        if self.api_key:
            params["apikey"] = self.api_key
        query = self.cache_query(first_name, country)
        rec = self.fetcher.fetch(
            BackendId.GENDERIZE, query,
            live=lambda s, t: s.get(self.endpoint, params=params, timeout=t),
            fixture=lambda: self.fetcher.fixtures.genderize(query, first_name, country),
        )
        if not rec.ok:
            raise UpstreamError(rec.status, _error_message(rec.payload))
        return GenderizeResponse.from_json(rec.payload)

    def lookup(self, first_name: str, country: Optional[str] = None) -> Prediction:
        resp = self.lookup_raw(first_name, country)
        if resp.gender is None:
            return abstain(BackendId.GENDERIZE)
        p_male = resp.probability if resp.gender == "male" else 1.0 - resp.probability
        return prediction_from_probability(p_male, BackendId.GENDERIZE)


def genderize_lookup(client: GenderizeClient, first_name: str, country: Optional[str] = None) -> Prediction:
    return client.lookup(first_name, country)


class ImageSearchClient:
    """Ranked thumbnail retrieval through a Custom-Search-style JSON API."""

    def __init__(self, fetcher: Fetcher, endpoint: str = DEFAULT_IMAGES_ENDPOINT,
                 api_key: Optional[str] = None):
        self.fetcher = fetcher
        self.endpoint = endpoint
        self.key, self.cx = _split_key(api_key)

    def _listing(self, query: str) -> list[str]:
        cache_query = f"{query}#search"
        params = {"q": query, "searchType": "image", "num": 10}
        if self.key:
            params["key"] = self.key
        if self.cx:
            params["cx"] = self.cx
        rec = self.fetcher.fetch(
            BackendId.FACE, cache_query,
            live=lambda s, t: s.get(self.endpoint, params=params, timeout=t),
            fixture=lambda: self.fetcher.fixtures.thumbnail_listing(cache_query, query),
        )
        if not rec.ok:
            raise UpstreamError(rec.status, _error_message(rec.payload))
        try:
            data = json.loads(rec.payload)
        except ValueError as exc:
            raise DecodeError(f"image search body is not JSON: {exc}") from None
        if isinstance(data, dict) and isinstance(data.get("thumbnails"), list):
            return [str(u) for u in data["thumbnails"]]
        if not isinstance(data, dict):
            raise DecodeError("image search body is not an object")
        urls = []
        for item in data.get("items") or []:
            image = item.get("image") or {}
            url = image.get("thumbnailLink") or item.get("link")
            if url:
                urls.append(str(url))
        return urls

    def fetch_thumbnails(self, query: str, k: int = DEFAULT_THUMBNAILS) -> list[bytes]:
        if not query:
            raise ContractError("image query is empty")
        if k <= 0:
            return []
        urls = self._listing(query)[:k]
        images = []
        for rank, url in enumerate(urls, start=1):
            cache_query = f"{query}#{rank}"
            rec = self.fetcher.fetch(
                BackendId.FACE, cache_query,
                live=lambda s, t, url=url: s.get(url, timeout=t),
                fixture=lambda rank=rank: self.fetcher.fixtures.thumbnail(cache_query, query, rank),
            )
            if not rec.ok:
                raise UpstreamError(rec.status, f"thumbnail {rank} for {query!r}")
            images.append(rec.payload)
        return images


class FaceClient:
    """Face++-style ``detect`` client reporting per-face gender."""

    def __init__(self, fetcher: Fetcher, endpoint: str = DEFAULT_FACE_ENDPOINT,
                 api_key: Optional[str] = None):
        self.fetcher = fetcher
        self.endpoint = endpoint
        self.key, self.secret = _split_key(api_key)

    def detect_faces(self, image: bytes, image_rank: int) -> list[FaceObservation]:
        if not image:
            raise ContractError("image payload is empty")
        query = f"detect:{image_digest(image)}"
        form = {"return_attributes": "gender"}
        if self.key:
            form["api_key"] = self.key
        if self.secret:
            form["api_secret"] = self.secret
        rec = self.fetcher.fetch(
            BackendId.FACE, query,
            live=lambda s, t: s.post(self.endpoint, data=form,
                                     files={"image_file": ("thumbnail.jpg", image)}, timeout=t),
            fixture=lambda: self.fetcher.fixtures.faces(query, image),
        )
        if not rec.ok:
            raise UpstreamError(rec.status, _error_message(rec.payload))
        return parse_faces(rec.payload, image_rank)


def parse_faces(body: bytes, image_rank: int) -> list[FaceObservation]:
    try:
        data = json.loads(body)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DecodeError(f"face body is not JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("faces"), list):
        raise DecodeError("face body lacks a 'faces' list")
    out = []
    for i, face in enumerate(data["faces"]):
        try:
            rect = face["face_rectangle"]
            box = (int(rect["left"]), int(rect["top"]), int(rect["width"]), int(rect["height"]))
            gender = face["attributes"]["gender"]
            value = str(gender["value"]).lower()
            confidence = float(gender.get("confidence", 100.0))
            out.append(FaceObservation(image_rank, box, value, confidence))
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"face {i}: malformed entry ({exc})") from None
    return out


class FaceBackend:
    """Image-based gender: search thumbnails for the full name, detect faces, average."""

    def __init__(self, search: ImageSearchClient, faces: FaceClient, k: int = DEFAULT_THUMBNAILS):
        self.search = search
        self.faces = faces
        self.k = k

    def predict(self, full_name: str) -> Prediction:
        query = image_query(full_name)
        images = self.search.fetch_thumbnails(query, self.k)
        observations = []
        for rank, image in enumerate(images, start=1):
            try:
                observations.extend(self.faces.detect_faces(image, rank))
            except UpstreamError as exc:
                if exc.status >= 500 or exc.status == 429:
                    raise
                # a rejected thumbnail counts as "no face found"
                log.info("face API rejected thumbnail %d for %r: %s", rank, query, exc)
        return aggregate_faces(observations, len(images), query)
