"""Append-only JSON-lines store of raw upstream responses.

Each line is one record::

    {"backend": "Genderize", "query": "name=peter", "fetched_at": "2015-06-01T12:00:00Z",
     "status": 200, "payload_b64": "eyJuYW1lIjoi..."}

The most recent line for a ``(backend, query)`` pair wins.
"""

from __future__ import annotations

import base64
import binascii
import json
import logging
import os
import tempfile
import threading
from collections import Counter
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional

from ..core import BackendId
from .types import CachedResponse

log = logging.getLogger(__name__)


def _format_ts(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def _parse_ts(text: str) -> datetime:
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def encode_record(rec: CachedResponse) -> str:
    return json.dumps({
        "backend": rec.backend.value,
        "query": rec.query,
        "fetched_at": _format_ts(rec.fetched_at),
        "status": rec.status,
        "payload_b64": base64.b64encode(rec.payload).decode("ascii"),
    }, ensure_ascii=False, sort_keys=False)


def decode_record(line: str) -> CachedResponse:
    data = json.loads(line)
    if not isinstance(data, dict):
        raise ValueError("record is not an object")
    status = data["status"]
    if isinstance(status, bool) or not isinstance(status, int):
        raise ValueError("status is not an integer")
    return CachedResponse(
        backend=BackendId(data["backend"]),
        query=str(data["query"]),
        fetched_at=_parse_ts(data["fetched_at"]),
        payload=base64.b64decode(data["payload_b64"], validate=True),
        status=status,
    )


class ResponseCache:
    """In-memory index over a JSON-lines cache file.

    Reads hit the index only. Writes append one line under a lock, so a
    single cache instance can be shared across worker threads.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._index: dict[tuple[BackendId, str], CachedResponse] = {}
        self.skipped_lines = 0
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        for lineno, rec in self._read_records():
            self._index[(rec.backend, rec.query)] = rec

    def _read_records(self) -> Iterator[tuple[int, CachedResponse]]:
        with open(self.path, encoding="utf-8", errors="replace") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rec = decode_record(line)
                except (ValueError, KeyError, TypeError, binascii.Error) as exc:
                    self.skipped_lines += 1
                    log.warning("%s:%d: skipping corrupt cache line (%s)", self.path, lineno, exc)
                    continue
                yield lineno, rec

    def get(self, backend: BackendId, query: str) -> Optional[CachedResponse]:
        return self._index.get((backend, query))

    def put(self, backend: BackendId, query: str, payload: bytes, status: int = 200,
            fetched_at: datetime | None = None) -> CachedResponse:
        rec = CachedResponse(backend, query, fetched_at or datetime.now(timezone.utc), bytes(payload), status)
        line = encode_record(rec) + "\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
            self._index[(backend, query)] = rec
        return rec

    def __len__(self):
        return len(self._index)

    def __iter__(self) -> Iterator[CachedResponse]:
        return iter(list(self._index.values()))

    def stats(self) -> dict[BackendId, int]:
        """Distinct keys per backend, every backend listed."""
        counts = Counter(backend for backend, _ in self._index)
        return {b: counts.get(b, 0) for b in BackendId}

    def line_count(self) -> int:
        if not self.path.exists():
            return 0
        return sum(1 for _ in self._read_records())

    def prune(self) -> int:
        """Rewrite the file keeping only the latest record per key; returns records dropped."""
        with self._lock:
            if not self.path.exists():
                return 0
            records = [rec for _, rec in self._read_records()]
            latest: dict[tuple[BackendId, str], int] = {}
            for i, rec in enumerate(records):
                latest[(rec.backend, rec.query)] = i
            keep = sorted(latest.values())
            fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    for i in keep:
                        fh.write(encode_record(records[i]) + "\n")
                os.replace(tmp, self.path)
            except BaseException:
                os.unlink(tmp)
                raise
            self._index = {(records[i].backend, records[i].query): records[i] for i in keep}
            return len(records) - len(keep)


def cache_get(cache: ResponseCache, backend: BackendId, query: str) -> Optional[CachedResponse]:
    return cache.get(backend, query)


def cache_put(cache: ResponseCache, backend: BackendId, query: str, payload: bytes,
              status: int = 200) -> None:
    cache.put(backend, query, payload, status)
