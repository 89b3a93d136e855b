"""HTTP backends, response cache and offline replay.

Client classes live in :mod:`namegender.web.clients`.
"""

from .cache import ResponseCache, cache_get, cache_put
from .transport import Fetcher, FixtureStore, Mode, RateLimiter, query_hash
from .types import CachedResponse, FaceObservation, GenderizeResponse

__all__ = [
    "CachedResponse",
    "FaceObservation",
    "Fetcher",
    "FixtureStore",
    "GenderizeResponse",
    "Mode",
    "RateLimiter",
    "ResponseCache",
    "cache_get",
    "cache_put",
    "query_hash",
]
