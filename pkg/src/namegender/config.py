"""Run configuration, layered as flags > environment > config file > bundled demo > defaults."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Optional

from .core import BackendId
from .errors import ConfigError
from .evaluation import DEFAULT_MIN_COUNTRY_INSTANCES
from .web.clients import DEFAULT_FACE_ENDPOINT, DEFAULT_GENDERIZE_ENDPOINT, DEFAULT_IMAGES_ENDPOINT
from .web.transport import Mode

ENV_KEYS = {
    "genderize_key": "NAMEGENDER_GENDERIZE_KEY",
    "face_key": "NAMEGENDER_FACE_KEY",
    "images_key": "NAMEGENDER_IMG_KEY",
}

WEB_METHODS = frozenset({BackendId.GENDERIZE, BackendId.FACE, BackendId.MIXED1, BackendId.MIXED2})
MAX_THUMBNAILS = 5

_PATH_FIELDS = ("ssa_dir", "census_csv", "dict_file", "dataset_csv", "cache_file", "fixtures_dir", "out_dir")


@dataclass(frozen=True)
class RunConfig:
    methods: tuple[BackendId, ...] = tuple(BackendId)
    mode: Mode = Mode.CACHED
    ssa_dir: Optional[Path] = None
    census_csv: Optional[Path] = None
    dict_file: Optional[Path] = None
    dataset_csv: Optional[Path] = None
    cache_file: Optional[Path] = None
    fixtures_dir: Optional[Path] = None
    out_dir: Path = Path("reports")
    thumbnails_k: int = 5
    rate_limit: float = 1.0
    rate_limits: Mapping[str, float] = field(default_factory=dict)
    max_in_flight: int = 4
    workers: int = 4
    endpoint_genderize: str = DEFAULT_GENDERIZE_ENDPOINT
    endpoint_face: str = DEFAULT_FACE_ENDPOINT
    endpoint_images: str = DEFAULT_IMAGES_ENDPOINT
    genderize_key: Optional[str] = None
    face_key: Optional[str] = None
    images_key: Optional[str] = None
    country_column: str = "country"
    min_country_instances: int = DEFAULT_MIN_COUNTRY_INSTANCES
    use_dict_country: bool = True

    def needs_keys(self) -> bool:
        if self.mode is Mode.LIVE:
            return True
        return self.mode is Mode.CACHED and self.cache_file is None and self.fixtures_dir is None

    def validate(self) -> "RunConfig":
        if not self.methods:
            raise ConfigError("no methods selected")
        if self.mode is Mode.REPLAY and self.cache_file is None and self.fixtures_dir is None:
            raise ConfigError("replay mode needs --cache-file or --fixtures")
        if not 0 <= self.thumbnails_k <= MAX_THUMBNAILS:
            raise ConfigError(f"thumbnails must be between 0 and {MAX_THUMBNAILS}")
        if self.min_country_instances < 1:
            raise ConfigError("--min-country-instances must be at least 1")
        if self.workers < 1 or self.max_in_flight < 1:
            raise ConfigError("workers and max_in_flight must be at least 1")
        needs = {
            BackendId.SSA: ("ssa_dir", "--ssa-dir"),
            BackendId.CENSUS: ("census_csv", "--census-csv"),
            BackendId.DICT: ("dict_file", "--dict-file"),
        }
        for m in self.methods:
            if m in needs and getattr(self, needs[m][0]) is None:
                raise ConfigError(f"method {m} needs {needs[m][1]}")
        if self.needs_keys():
            uses_names = any(m in self.methods for m in (BackendId.GENDERIZE, BackendId.MIXED1, BackendId.MIXED2))
            uses_faces = any(m in self.methods for m in (BackendId.FACE, BackendId.MIXED1, BackendId.MIXED2))
            if uses_names and not self.genderize_key:
                raise ConfigError(f"{ENV_KEYS['genderize_key']} is not set")
            if uses_faces and not self.face_key:
                raise ConfigError(f"{ENV_KEYS['face_key']} is not set")
            if uses_faces and not self.images_key:
                raise ConfigError(f"{ENV_KEYS['images_key']} is not set")
        return self

    def rate_for(self, backend: BackendId) -> float:
        return float(self.rate_limits.get(backend.value, self.rate_limit))


def parse_methods(value) -> tuple[BackendId, ...]:
    items = value.split(",") if isinstance(value, str) else list(value)
    try:
        methods = [BackendId.parse(str(v)) for v in items if str(v).strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    seen = []
    for m in methods:
        if m not in seen:
            seen.append(m)
    return tuple(seen)


def _coerce(name: str, value: Any, base: Path | None = None) -> Any:
    if value is None:
        return None
    if name == "methods":
        return parse_methods(value)
    if name == "mode":
        try:
            return Mode(value)
        except ValueError:
            raise ConfigError(f"unknown mode {value!r}") from None
    if name in _PATH_FIELDS:
        p = Path(value).expanduser()
        return base / p if base is not None and not p.is_absolute() else p
    if name in ("thumbnails_k", "max_in_flight", "workers", "min_country_instances"):
        return int(value)
    if name == "rate_limit":
        return float(value)
    if name == "use_dict_country":
        return bool(value)
    return value


def demo_root() -> Path:
    return Path(str(resources.files("namegender") / "demo"))


def demo_layer() -> dict[str, Any]:
    root = demo_root()
    return {
        "ssa_dir": root / "ssa",
        "census_csv": root / "census.csv",
        "dict_file": root / "nam_dict.txt",
        "dataset_csv": root / "dataset.csv",
        "fixtures_dir": root / "fixtures",
        # the demo dataset is small; 4 keeps its larger countries as separate rows
        "min_country_instances": 4,
    }


def load_config_file(path) -> dict[str, Any]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {', '.join(unknown)}")
    return {k: _coerce(k, v, path.parent) for k, v in data.items()}


def env_layer(environ: Mapping[str, str] | None = None) -> dict[str, Any]:
    environ = os.environ if environ is None else environ
    return {name: environ[var] for name, var in ENV_KEYS.items() if environ.get(var)}


def build_config(flags: Mapping[str, Any], config_file=None, demo: bool = False,
                 environ: Mapping[str, str] | None = None) -> RunConfig:
    """Merge layers; ``None`` in *flags* means "not given"."""
    merged: dict[str, Any] = {}
    if demo:
        merged.update(demo_layer())
    if config_file is not None:
        merged.update(load_config_file(config_file))
    merged.update(env_layer(environ))
    known = {f.name for f in fields(RunConfig)}
    try:
        merged.update({k: _coerce(k, v) for k, v in flags.items() if v is not None and k in known})
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return replace(RunConfig(), **merged)
