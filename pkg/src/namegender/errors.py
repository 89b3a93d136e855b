"""Exception hierarchy shared across the package."""

from __future__ import annotations


class NameGenderError(Exception):
    """Base class for every error raised by this package."""


class ContractError(NameGenderError, ValueError):
    """A caller violated an operation's precondition."""


class EmptyNameError(ContractError):
    """A name was empty or contained only whitespace."""


class ParseError(NameGenderError, ValueError):
    """A data file could not be parsed.

    ``path``, ``line`` and ``column`` point at the offending input; ``line``
    and ``column`` are 1-based and may be ``None`` when not applicable.
    """

    def __init__(self, message: str, path=None, line: int | None = None, column: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class EmptyDatabaseError(ParseError):
    """A name database source contained no records."""


class EmptyDatasetError(NameGenderError, ValueError):
    """Metrics were requested over zero records."""


class ConfigError(NameGenderError):
    """The run configuration is incomplete or inconsistent."""


class WebError(NameGenderError):
    """Base class for failures of the HTTP backends."""


class TransportError(WebError):
    """The network request failed and no cached answer was available."""


class UpstreamError(WebError):
    """The upstream service answered with a non-success status."""

    def __init__(self, status: int, message: str = ""):
        self.status = status
        super().__init__(f"upstream returned HTTP {status}" + (f": {message}" if message else ""))


class DecodeError(WebError):
    """An upstream response body did not match the expected schema."""


class ReplayMissError(WebError):
    """Replay mode found neither a cached response nor a fixture for a key."""

    def __init__(self, backend, query: str):
        self.backend = backend
        self.query = query
        super().__init__(f"no cached response or fixture for ({backend}, {query!r}) in replay mode")
