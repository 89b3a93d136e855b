"""Mode-aware fetching: cache, fixtures, rate-limited HTTP with 429 backoff.

Modes:

* ``live``    - always go to the network, append every final answer to the cache.
* ``cached``  - cache first, then fixtures, then the network.
* ``replay``  - cache and fixtures only; a miss raises :class:`ReplayMissError`.

Fixture directory layout::

    genderize/<name>.json            name API answer without country
    genderize/<name>.<CC>.json       name API answer with country_id=CC
    faces/<sha256 of image>.json     face API answer for one thumbnail
    <query-hash>/1.jpg ... 5.jpg     ranked thumbnails for an image query
    <query-hash>/query.txt           the query text, informational only

``<query-hash>`` is the first 16 hex digits of SHA-256 over the UTF-8 query.
JSON fixtures are envelopes ``{"status": 200, "body": <json>}``; use
``"body_text"`` instead of ``"body"`` to store a body that is not valid JSON.
"""

from __future__ import annotations

import hashlib
import json
import random
import threading
import time
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

import requests

from ..core import BackendId
from ..errors import ReplayMissError, TransportError
from .cache import ResponseCache
from .types import CachedResponse

# Replay records carry a fixed timestamp so nothing downstream depends on wall time.
FIXTURE_TIMESTAMP = datetime(1970, 1, 1, tzinfo=timezone.utc)

RETRY_STATUSES = frozenset({429})
MAX_RETRIES = 5


class Mode(str, Enum):
    LIVE = "live"
    CACHED = "cached"
    REPLAY = "replay"


def query_hash(query: str) -> str:
    return hashlib.sha256(query.encode("utf-8")).hexdigest()[:16]


def image_digest(image: bytes) -> str:
    return hashlib.sha256(image).hexdigest()


class FixtureStore:
    def __init__(self, root):
        self.root = Path(root)

    def _envelope(self, backend: BackendId, query: str, path: Path) -> Optional[CachedResponse]:
        if not path.is_file():
            return None
        env = json.loads(path.read_text(encoding="utf-8"))
        if "body_text" in env:
            payload = env["body_text"].encode("utf-8")
        else:
            payload = json.dumps(env.get("body"), ensure_ascii=False).encode("utf-8")
        return CachedResponse(backend, query, FIXTURE_TIMESTAMP, payload, int(env.get("status", 200)))

    def genderize(self, query: str, name: str, country: str | None) -> Optional[CachedResponse]:
        stem = name if country is None else f"{name}.{country.upper()}"
        return self._envelope(BackendId.GENDERIZE, query, self.root / "genderize" / f"{stem}.json")

    def faces(self, query: str, image: bytes) -> Optional[CachedResponse]:
        return self._envelope(BackendId.FACE, query, self.root / "faces" / f"{image_digest(image)}.json")

    def thumbnail_dir(self, image_query: str) -> Path:
        return self.root / query_hash(image_query)

    def thumbnail_listing(self, cache_query: str, image_query: str) -> Optional[CachedResponse]:
        folder = self.thumbnail_dir(image_query)
        if not folder.is_dir():
            return None
        ranks = sorted(int(p.stem) for p in folder.glob("*.jpg") if p.stem.isdigit())
        items = [{"image": {"thumbnailLink": f"fixture://{folder.name}/{r}.jpg"}} for r in ranks]
        payload = json.dumps({"items": items}).encode("utf-8")
        return CachedResponse(BackendId.FACE, cache_query, FIXTURE_TIMESTAMP, payload, 200)

    def thumbnail(self, cache_query: str, image_query: str, rank: int) -> Optional[CachedResponse]:
        path = self.thumbnail_dir(image_query) / f"{rank}.jpg"
        if not path.is_file():
            return None
        return CachedResponse(BackendId.FACE, cache_query, FIXTURE_TIMESTAMP, path.read_bytes(), 200)


class RateLimiter:
    """Spaces request starts at least ``1 / rate`` seconds apart."""

    def __init__(self, rate: float, clock=time.monotonic, sleep=time.sleep):
        self.interval = 0.0 if rate <= 0 else 1.0 / rate
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next = None

    def acquire(self):
        with self._lock:
            now = self._clock()
            if self._next is not None and now < self._next:
                self._sleep(self._next - now)
                now = self._next
            self._next = now + self.interval


class Fetcher:
    """Resolves ``(backend, query)`` keys through cache, fixtures and the network."""

    def __init__(self, mode: Mode = Mode.CACHED, cache: ResponseCache | None = None,
                 fixtures: FixtureStore | None = None, session: requests.Session | None = None,
                 rate_limits: dict[BackendId, float] | None = None, default_rate: float = 1.0,
                 max_in_flight: int = 4, timeout: float = 30.0, backoff_base: float = 1.0,
                 backoff_cap: float = 60.0, sleep=time.sleep, rng: random.Random | None = None):
        self.mode = Mode(mode)
        self.cache = cache
        self.fixtures = fixtures
        self.timeout = timeout
        self._session = session
        self._rate_limits = dict(rate_limits or {})
        self._default_rate = default_rate
        self._max_in_flight = max_in_flight
        self._limiters: dict[BackendId, RateLimiter] = {}
        self._slots: dict[BackendId, threading.BoundedSemaphore] = {}
        self._setup_lock = threading.Lock()
        self._backoff_base = backoff_base
        self._backoff_cap = backoff_cap
        self._sleep = sleep
        self._rng = rng or random.Random()
        self.network_calls = 0

    @property
    def session(self) -> requests.Session:
        if self._session is None:
            self._session = requests.Session()
        return self._session

    def _per_backend(self, backend: BackendId):
        with self._setup_lock:
            if backend not in self._limiters:
                rate = self._rate_limits.get(backend, self._default_rate)
                self._limiters[backend] = RateLimiter(rate, sleep=self._sleep)
                self._slots[backend] = threading.BoundedSemaphore(self._max_in_flight)
            return self._limiters[backend], self._slots[backend]

    def backoff_delay(self, attempt: int) -> float:
        return min(self._backoff_cap, self._backoff_base * 2 ** attempt) + self._rng.uniform(0, self._backoff_base)

    def fetch(self, backend: BackendId, query: str, *,
              live: Callable[[requests.Session, float], requests.Response],
              fixture: Callable[[], Optional[CachedResponse]] | None = None) -> CachedResponse:
        if self.mode is not Mode.LIVE:
            if self.cache is not None:
                hit = self.cache.get(backend, query)
                if hit is not None:
                    return hit
            if self.fixtures is not None and fixture is not None:
                hit = fixture()
                if hit is not None:
                    return hit
            if self.mode is Mode.REPLAY:
                raise ReplayMissError(backend, query)

        status, body = self._request(backend, live)
        if self.cache is not None and status not in RETRY_STATUSES and status < 500:
            return self.cache.put(backend, query, body, status)
        return CachedResponse(backend, query, datetime.now(timezone.utc), body, status)

    def _request(self, backend: BackendId, live) -> tuple[int, bytes]:
        limiter, slots = self._per_backend(backend)
        attempt = 0
        while True:
            limiter.acquire()
            with slots:
                self.network_calls += 1
                try:
                    resp = live(self.session, self.timeout)
                except requests.RequestException as exc:
                    raise TransportError(f"{backend}: {exc}") from exc
            if resp.status_code in RETRY_STATUSES and attempt < MAX_RETRIES:
                self._sleep(self.backoff_delay(attempt))
                attempt += 1
                continue
            return resp.status_code, resp.content
