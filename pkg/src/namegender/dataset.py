"""Labelled evaluation datasets: UTF-8 CSV with header ``full_name,country,gender``."""

from __future__ import annotations

import csv
from pathlib import Path

from .core import GenderLabel, PersonRecord
from .errors import ContractError, EmptyDatasetError, ParseError

_GENDERS = {"M": GenderLabel.MALE, "F": GenderLabel.FEMALE}


def read_dataset(path, country_column: str = "country") -> list[PersonRecord]:
    path = Path(path)
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for required in ("full_name", country_column, "gender"):
            if required not in header:
                raise ParseError(f"missing column {required!r} in header", path, 1)
        records = []
        for rownum, row in enumerate(reader, start=1):
            if not any(str(v or "").strip() for v in row.values()):
                continue
            gender = (row["gender"] or "").strip().upper()
            if gender not in _GENDERS:
                raise ParseError(f"row {rownum}: gender must be M or F, got {row['gender']!r}",
                                 path, reader.line_num)
            country = (row[country_column] or "").strip() or None
            try:
                records.append(PersonRecord(row["full_name"] or "", country, _GENDERS[gender]))
            except ContractError as exc:
                raise ParseError(f"row {rownum}: {exc}", path, reader.line_num) from None
    if not records:
        raise EmptyDatasetError(f"{path}: dataset has no rows")
    return records


def write_dataset(path, records, country_column: str = "country") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["full_name", country_column, "gender"])
        for r in records:
            writer.writerow([r.full_name, r.country or "", "M" if r.true_gender is GenderLabel.MALE else "F"])
