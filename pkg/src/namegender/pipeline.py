"""Run the configured backends over people and collect predictions per method."""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import BackendId, PersonRecord, Prediction, abstain
from .errors import ConfigError, EmptyNameError
from .fusion import mixed1, mixed2
from .namedb import NameDatabase, lookup_counts, lookup_dict
from .normalize import extract_first_name
from .web.clients import FaceBackend, GenderizeClient

log = logging.getLogger(__name__)


@dataclass
class Backends:
    ssa: Optional[NameDatabase] = None
    census: Optional[NameDatabase] = None
    dictionary: Optional[NameDatabase] = None
    genderize: Optional[GenderizeClient] = None
    face: Optional[FaceBackend] = None
    use_dict_country: bool = True
    forward_country: bool = True


_REQUIRES = {
    BackendId.SSA: ("ssa",),
    BackendId.CENSUS: ("census",),
    BackendId.DICT: ("dictionary",),
    BackendId.GENDERIZE: ("genderize",),
    BackendId.FACE: ("face",),
    BackendId.MIXED1: ("genderize", "face"),
    BackendId.MIXED2: ("genderize", "face"),
}


class Predictor:
    def __init__(self, backends: Backends, methods: Sequence[BackendId]):
        self.backends = backends
        self.methods = tuple(methods)
        for m in self.methods:
            missing = [attr for attr in _REQUIRES[m] if getattr(backends, attr) is None]
            if missing:
                raise ConfigError(f"method {m} needs backend(s) {', '.join(missing)} to be configured")
        self._lock = threading.Lock()
        self.face_calls = 0

    def _count_face_call(self):
        with self._lock:
            self.face_calls += 1

    def predict(self, full_name: str, country: Optional[str] = None) -> dict[BackendId, Prediction]:
        b = self.backends
        try:
            key = extract_first_name(full_name)
        except EmptyNameError:
            log.warning("no usable first name in %r; name backends abstain", full_name)
            key = None

        memo: dict[BackendId, Prediction] = {}

        def genderize() -> Prediction:
            if BackendId.GENDERIZE not in memo:
                if key is None:
                    memo[BackendId.GENDERIZE] = abstain(BackendId.GENDERIZE)
                else:
                    memo[BackendId.GENDERIZE] = b.genderize.lookup(
                        key.primary, country if b.forward_country else None)
            return memo[BackendId.GENDERIZE]

        def face() -> Prediction:
            if BackendId.FACE not in memo:
                self._count_face_call()
                memo[BackendId.FACE] = b.face.predict(full_name)
            return memo[BackendId.FACE]

        out: dict[BackendId, Prediction] = {}
        for m in self.methods:
            if m is BackendId.SSA:
                out[m] = lookup_counts(b.ssa, key) if key else abstain(m)
            elif m is BackendId.CENSUS:
                out[m] = lookup_counts(b.census, key) if key else abstain(m)
            elif m is BackendId.DICT:
                out[m] = (lookup_dict(b.dictionary, key, country if b.use_dict_country else None)
                          if key else abstain(m))
            elif m is BackendId.GENDERIZE:
                out[m] = genderize()
            elif m is BackendId.FACE:
                out[m] = face()
            elif m is BackendId.MIXED1:
                out[m] = mixed1(genderize(), face)
            elif m is BackendId.MIXED2:
                out[m] = mixed2(genderize(), face())
        return out

    def run(self, records: Sequence[PersonRecord], workers: int = 1
            ) -> dict[BackendId, list[tuple[PersonRecord, Prediction]]]:
        """Predict every record; output order follows *records* regardless of *workers*."""
        def one(rec: PersonRecord):
            return self.predict(rec.full_name, rec.country)

        if workers > 1 and len(records) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                per_record = list(pool.map(one, records))
        else:
            per_record = [one(r) for r in records]

        results: dict[BackendId, list[tuple[PersonRecord, Prediction]]] = {m: [] for m in self.methods}
        for rec, preds in zip(records, per_record):
            for m in self.methods:
                results[m].append((rec, preds[m]))
        return results
