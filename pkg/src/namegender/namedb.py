"""Offline name databases: SSA yearly files, a census aggregate and a nam_dict-style dictionary.

Count databases (SSA, census) answer with ``2 * male / (male + female) - 1``.
The dictionary answers from its gender code, using per-country frequency
ranks to pick between conflicting entries for the same name.

Dictionary file layout (1-based columns, UTF-8)::

    1-2    gender code, left-justified: M 1M ?M F 1F ?F ? or =
    3      blank
    4-29   name; '+' joins compound names and is read as '-'
    30     blank (a non-blank here means the name overflowed)
    31-85  one frequency character per country in COUNTRY_COLUMNS order:
           hex digit 1-D (rank, higher is more common) or blank
    86-    ignored

``=`` lines hold two whitespace-separated names after column 3, ``alias
target``; the alias key receives the target's entries.
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .core import BackendId, GenderLabel, Prediction, abstain
from .errors import ContractError, EmptyDatabaseError, ParseError
from .normalize import NameKey, fold

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CountryColumn:
    label: str
    code: str
    # Further ISO codes resolved to this column.
    members: tuple[str, ...] = ()


# Column order of the dictionary's frequency block. Regions without an ISO
# code use user-assigned codes (XF, XS, XA, XX).
COUNTRY_COLUMNS: tuple[CountryColumn, ...] = (
    CountryColumn("Great Britain", "GB", ("UK", "IM", "JE", "GG")),
    CountryColumn("Ireland", "IE"),
    CountryColumn("U.S.A.", "US"),
    CountryColumn("Italy", "IT", ("SM", "VA")),
    CountryColumn("Malta", "MT"),
    CountryColumn("Portugal", "PT"),
    CountryColumn("Spain", "ES", ("AD",)),
    CountryColumn("France", "FR", ("MC",)),
    CountryColumn("Belgium", "BE"),
    CountryColumn("Luxembourg", "LU"),
    CountryColumn("the Netherlands", "NL"),
    CountryColumn("East Frisia", "XF"),
    CountryColumn("Germany", "DE"),
    CountryColumn("Austria", "AT"),
    CountryColumn("Swiss", "CH", ("LI",)),
    CountryColumn("Iceland", "IS"),
    CountryColumn("Denmark", "DK", ("FO", "GL")),
    CountryColumn("Norway", "NO"),
    CountryColumn("Sweden", "SE"),
    CountryColumn("Finland", "FI"),
    CountryColumn("Estonia", "EE"),
    CountryColumn("Latvia", "LV"),
    CountryColumn("Lithuania", "LT"),
    CountryColumn("Poland", "PL"),
    CountryColumn("Czech Republic", "CZ"),
    CountryColumn("Slovakia", "SK"),
    CountryColumn("Hungary", "HU"),
    CountryColumn("Romania", "RO"),
    CountryColumn("Bulgaria", "BG"),
    CountryColumn("Bosnia and Herzegovina", "BA"),
    CountryColumn("Croatia", "HR"),
    CountryColumn("Kosovo", "XK"),
    CountryColumn("Macedonia", "MK"),
    CountryColumn("Montenegro", "ME"),
    CountryColumn("Serbia", "RS"),
    CountryColumn("Slovenia", "SI"),
    CountryColumn("Albania", "AL"),
    CountryColumn("Greece", "GR", ("CY",)),
    CountryColumn("Russia", "RU"),
    CountryColumn("Belarus", "BY"),
    CountryColumn("Moldova", "MD"),
    CountryColumn("Ukraine", "UA"),
    CountryColumn("Armenia", "AM"),
    CountryColumn("Azerbaijan", "AZ"),
    CountryColumn("Georgia", "GE"),
    CountryColumn("Kazakhstan/Uzbekistan etc.", "XS", ("KZ", "UZ", "KG", "TJ", "TM")),
    CountryColumn("Turkey", "TR"),
    CountryColumn("Arabia/Persia", "XA", (
        "SA", "AE", "QA", "KW", "BH", "OM", "YE", "IQ", "IR", "JO", "SY", "LB",
        "PS", "EG", "LY", "TN", "DZ", "MA", "AF",
    )),
    CountryColumn("Israel", "IL"),
    CountryColumn("China", "CN", ("TW", "HK", "MO")),
    CountryColumn("India/Sri Lanka", "IN", ("LK",)),
    CountryColumn("Japan", "JP"),
    CountryColumn("Korea", "KR", ("KP",)),
    CountryColumn("Vietnam", "VN"),
    CountryColumn("other countries", "XX"),
)

_COLUMN_BY_CODE: dict[str, str] = {}
for _col in COUNTRY_COLUMNS:
    _COLUMN_BY_CODE[_col.code] = _col.code
    for _member in _col.members:
        _COLUMN_BY_CODE[_member] = _col.code

GENDER_CODES = ("M", "1M", "?M", "F", "1F", "?F", "?")

_CODE_LABELS = {
    "M": GenderLabel.MALE,
    "1M": GenderLabel.MOSTLY_MALE,
    "?M": GenderLabel.MOSTLY_MALE,
    "F": GenderLabel.FEMALE,
    "1F": GenderLabel.MOSTLY_FEMALE,
    "?F": GenderLabel.MOSTLY_FEMALE,
    "?": GenderLabel.UNKNOWN,
}

_LABEL_SCORES = {
    GenderLabel.MALE: 1.0,
    GenderLabel.MOSTLY_MALE: 0.5,
    GenderLabel.UNKNOWN: 0.0,
    GenderLabel.MOSTLY_FEMALE: -0.5,
    GenderLabel.FEMALE: -1.0,
}

NAME_FIELD = slice(3, 29)
COUNTRY_FIELD_START = 30
COUNTRY_FIELD_END = COUNTRY_FIELD_START + len(COUNTRY_COLUMNS)


def dict_column_for(country: str | None) -> str | None:
    """Frequency column for an ISO country code; unlisted countries map to "other countries"."""
    if country is None:
        return None
    return _COLUMN_BY_CODE.get(country.upper(), "XX")


@dataclass(frozen=True)
class CountRecord:
    name_key: str
    male_count: int
    female_count: int

    def __post_init__(self):
        if self.male_count < 0 or self.female_count < 0:
            raise ContractError("counts must be non-negative")
        if self.male_count + self.female_count < 1:
            raise ContractError(f"record {self.name_key!r} has no occurrences")

    def __add__(self, other: "CountRecord") -> "CountRecord":
        return CountRecord(self.name_key, self.male_count + other.male_count,
                           self.female_count + other.female_count)


@dataclass(frozen=True)
class DictEntry:
    gender_code: str
    name_key: str
    country_freq: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.gender_code not in _CODE_LABELS:
            raise ContractError(f"unknown gender code {self.gender_code!r}")
        for code, rank in self.country_freq.items():
            if not 1 <= rank <= 13:
                raise ContractError(f"frequency {rank} for {code} outside 1..13")
        object.__setattr__(self, "country_freq", MappingProxyType(dict(self.country_freq)))

    @property
    def label(self) -> GenderLabel:
        return _CODE_LABELS[self.gender_code]

    @property
    def score(self) -> float:
        return _LABEL_SCORES[self.label]

    @property
    def global_frequency(self) -> int:
        return sum(self.country_freq.values())

    def __eq__(self, other):
        if not isinstance(other, DictEntry):
            return NotImplemented
        return ((self.gender_code, self.name_key, dict(self.country_freq))
                == (other.gender_code, other.name_key, dict(other.country_freq)))

    def __hash__(self):
        return hash((self.gender_code, self.name_key, tuple(sorted(self.country_freq.items()))))


@dataclass(frozen=True)
class NameDatabase:
    backend: BackendId
    count_index: Mapping[str, CountRecord] | None = None
    dict_index: Mapping[str, tuple[DictEntry, ...]] | None = None

    def __post_init__(self):
        if self.backend in (BackendId.SSA, BackendId.CENSUS):
            if self.count_index is None or self.dict_index is not None:
                raise ContractError(f"{self.backend} database needs a count index only")
        elif self.backend is BackendId.DICT:
            if self.dict_index is None or self.count_index is not None:
                raise ContractError("Dict database needs a dictionary index only")
        else:
            raise ContractError(f"{self.backend} is not a name database backend")

    def __len__(self):
        return len(self.count_index if self.count_index is not None else self.dict_index)


# -- SSA ---------------------------------------------------------------------

_SSA_FILE = re.compile(r"^yob(\d{4})\.txt$")


def parse_ssa_dir(path) -> NameDatabase:
    """Sum ``Name,Sex,Count`` rows over every ``yobYYYY.txt`` in *path*."""
    path = Path(path)
    files = sorted(p for p in path.iterdir() if _SSA_FILE.match(p.name)) if path.is_dir() else []
    if not files:
        raise EmptyDatabaseError("no yobYYYY.txt files found", path)

    totals: dict[str, list[int]] = {}
    for file in files:
        with open(file, encoding="ascii", errors="strict", newline="") as fh:
            try:
                lines = fh.read().splitlines()
            except UnicodeDecodeError as exc:
                raise ParseError(f"non-ASCII content: {exc}", file) from None
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError("expected Name,Sex,Count", file, lineno, 1)
            name, sex, count = (p.strip() for p in parts)
            if not name:
                raise ParseError("empty name", file, lineno, 1)
            if sex not in ("M", "F"):
                raise ParseError(f"sex must be M or F, got {sex!r}", file, lineno, len(parts[0]) + 2)
            if not count.isdigit():
                raise ParseError(f"count must be a non-negative integer, got {count!r}",
                                 file, lineno, len(parts[0]) + len(parts[1]) + 3)
            cell = totals.setdefault(fold(name), [0, 0])
            cell[0 if sex == "M" else 1] += int(count)

    index = {k: CountRecord(k, m, f) for k, (m, f) in totals.items() if m + f > 0}
    if not index:
        raise EmptyDatabaseError("SSA files contain no names", path)
    return NameDatabase(BackendId.SSA, count_index=MappingProxyType(index))


# -- Census aggregate --------------------------------------------------------

CENSUS_HEADER = ["name", "male_count", "female_count"]


def parse_census_csv(path) -> NameDatabase:
    path = Path(path)
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CENSUS_HEADER:
            raise ParseError("header must be " + ",".join(CENSUS_HEADER), path, 1, 1)
        totals: dict[str, list[int]] = {}
        for row in reader:
            lineno = reader.line_num
            if not row or not "".join(row).strip():
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", path, lineno, 1)
            name = row[0].strip()
            if not name:
                raise ParseError("empty name", path, lineno, 1)
            counts = []
            for col, raw in enumerate(row[1:], start=2):
                raw = raw.strip()
                if not raw.isdigit():
                    raise ParseError(f"{CENSUS_HEADER[col - 1]} must be a non-negative integer, got {raw!r}",
                                     path, lineno, col)
                counts.append(int(raw))
            cell = totals.setdefault(fold(name), [0, 0])
            cell[0] += counts[0]
            cell[1] += counts[1]

    index = {k: CountRecord(k, m, f) for k, (m, f) in totals.items() if m + f > 0}
    if not index:
        raise EmptyDatabaseError("census file has no rows", path)
    return NameDatabase(BackendId.CENSUS, count_index=MappingProxyType(index))


# -- Dictionary --------------------------------------------------------------

def _dict_key(raw: str) -> str:
    return fold(raw.strip().replace("+", "-").replace(" ", "-"))


def parse_dict_file(path) -> NameDatabase:
    path = Path(path)
    index: dict[str, list[DictEntry]] = {}
    aliases: list[tuple[str, str, int]] = []

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            code = line[0:2].strip()
            if code == "=":
                parts = line[3:].split()
                if len(parts) != 2:
                    raise ParseError("equivalence line needs 'alias target'", path, lineno, 4)
                aliases.append((_dict_key(parts[0]), _dict_key(parts[1]), lineno))
                continue
            if code not in _CODE_LABELS:
                raise ParseError(f"unknown gender code {code!r}", path, lineno, 1)
            if len(line) > 2 and line[2] != " ":
                raise ParseError("column 3 must be blank", path, lineno, 3)
            if len(line) > 29 and line[29] != " ":
                raise ParseError("name field longer than 26 characters", path, lineno, 30)
            name = line[NAME_FIELD].strip()
            if not name:
                raise ParseError("empty name field", path, lineno, 4)
            key = _dict_key(name)

            freq: dict[str, int] = {}
            block = line[COUNTRY_FIELD_START:COUNTRY_FIELD_END]
            for offset, ch in enumerate(block):
                if ch == " ":
                    continue
                if ch not in "123456789ABCD":
                    raise ParseError(f"frequency must be a hex digit 1-D, got {ch!r}",
                                     path, lineno, COUNTRY_FIELD_START + offset + 1)
                freq[COUNTRY_COLUMNS[offset].code] = int(ch, 16)
            index.setdefault(key, []).append(DictEntry(code, key, freq))

    for alias, target, lineno in aliases:
        if target not in index:
            raise ParseError(f"equivalence target {target!r} is not defined", path, lineno, 4)
        if alias == target:
            continue
        index.setdefault(alias, []).extend(index[target])

    if not index:
        raise EmptyDatabaseError("dictionary file has no entries", path)
    frozen = {k: tuple(v) for k, v in index.items()}
    return NameDatabase(BackendId.DICT, dict_index=MappingProxyType(frozen))


# -- Lookups -----------------------------------------------------------------

def lookup_counts(db: NameDatabase, key: NameKey) -> Prediction:
    if db.backend not in (BackendId.SSA, BackendId.CENSUS):
        raise ContractError(f"lookup_counts needs an SSA or Census database, got {db.backend}")
    for candidate in key.candidates():
        record = db.count_index.get(candidate)
        if record is not None:
            # (m - f) / (m + f) equals 2 * m / (m + f) - 1 and stays exactly antisymmetric
            total = record.male_count + record.female_count
            return Prediction.from_score((record.male_count - record.female_count) / total, db.backend)
    return abstain(db.backend)


def _single_best(entries, weight) -> DictEntry | None:
    best = max(weight(e) for e in entries)
    winners = [e for e in entries if weight(e) == best]
    return winners[0] if len(winners) == 1 else None


def lookup_dict(db: NameDatabase, key: NameKey, country: str | None = None) -> Prediction:
    """Dictionary lookup with country disambiguation.

    With a country, the entry ranked most frequent in that country's column
    wins. Without one, or when no entry is listed for it, the entry with the
    largest frequency sum over all columns wins. Ties abstain.
    """
    if db.backend is not BackendId.DICT:
        raise ContractError(f"lookup_dict needs a Dict database, got {db.backend}")
    entries = None
    for candidate in key.candidates():
        entries = db.dict_index.get(candidate)
        if entries:
            break
    if not entries:
        return abstain(BackendId.DICT)

    column = dict_column_for(country)
    chosen = None
    if column is not None and any(e.country_freq.get(column, 0) > 0 for e in entries):
        chosen = _single_best(entries, lambda e: e.country_freq.get(column, 0))
    else:
        chosen = _single_best(entries, lambda e: e.global_frequency)
    if chosen is None:
        return abstain(BackendId.DICT)
    return Prediction.from_score(chosen.score, BackendId.DICT)
