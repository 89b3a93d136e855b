"""Report files written by ``evaluate`` and re-read by ``report``.

Machine-readable files keep full precision (``repr`` of floats):

``method_report.csv``
    ``backend,metric,value`` - one row per metric per backend. Metrics are the
    six tally cells, the Table-1 quantities, coverage and the zero-support
    flags (0/1), in :data:`METHOD_METRICS` order.
``country_report.csv``
    ``country,instance_count,backend,accuracy`` - one row per country per
    backend, countries by instance count descending with ``other`` last.
``predictions.csv``
    ``full_name,country,gender,backend,label,score`` - every raw prediction.

``table1.txt`` and ``table2.txt`` render the same numbers at two decimals.
"""

from __future__ import annotations

import csv
import io
from dataclasses import fields
from pathlib import Path
from typing import Mapping, Sequence

from .core import BackendId, GenderLabel, PersonRecord, Prediction, country_name
from .errors import ParseError
from .evaluation import OTHER, ConfusionTally, CountryReport, MethodMetrics, metrics

TALLY_CELLS = tuple(f.name for f in fields(ConfusionTally))
METHOD_METRICS = TALLY_CELLS + tuple(f.name for f in fields(MethodMetrics))

TABLE1_ROWS = (
    ("female precision", "precision_f"),
    ("female recall", "recall_f"),
    ("female F1", "f1_f"),
    ("male precision", "precision_m"),
    ("male recall", "recall_m"),
    ("male F1", "f1_m"),
    ("accuracy", "accuracy"),
    ("coverage", "coverage"),
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def method_rows(tallies: Mapping[BackendId, ConfusionTally]):
    for backend in BackendId:
        if backend not in tallies:
            continue
        t = tallies[backend]
        m = metrics(t)
        for name in METHOD_METRICS:
            value = getattr(t, name) if name in TALLY_CELLS else getattr(m, name)
            yield backend.value, name, _fmt(value)


def _write_csv(path: Path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8")


def _label_text(label: GenderLabel) -> str:
    return label.value


def score_text(score: float) -> str:
    return f"{score:.6g}"


def render_table1(tallies: Mapping[BackendId, ConfusionTally]) -> str:
    backends = [b for b in BackendId if b in tallies]
    rows = {b: metrics(tallies[b]) for b in backends}
    width = max(len(label) for label, _ in TABLE1_ROWS)
    cols = [max(len(b.value), 4) for b in backends]
    lines = [" " * width + "  " + "  ".join(b.value.rjust(w) for b, w in zip(backends, cols))]
    for label, attr in TABLE1_ROWS:
        cells = [f"{getattr(rows[b], attr):.2f}".rjust(w) for b, w in zip(backends, cols)]
        lines.append(label.ljust(width) + "  " + "  ".join(cells))
    lines.append("n".ljust(width) + "  " + "  ".join(str(rows[b].n).rjust(w) for b, w in zip(backends, cols)))
    return "\n".join(lines) + "\n"


def render_table2(report: CountryReport) -> str:
    backends = [b for b in BackendId if b in report.accuracy]
    names = {c: ("other" if c == OTHER else country_name(c)) for c in report.countries}
    width = max([len("country")] + [len(n) for n in names.values()])
    cols = [max(len(b.value), 4) for b in backends]
    head = "country".ljust(width) + "  # instances  " + "  ".join(b.value.rjust(w) for b, w in zip(backends, cols))
    lines = [head]
    for c in report.countries:
        cells = [f"{report.accuracy[b][c]:.2f}".rjust(w) for b, w in zip(backends, cols)]
        lines.append(names[c].ljust(width) + "  " + str(report.instances[c]).rjust(11) + "  " + "  ".join(cells))
    return "\n".join(lines) + "\n"


def write_reports(out_dir, results: Mapping[BackendId, Sequence[tuple[PersonRecord, Prediction]]],
                  tallies: Mapping[BackendId, ConfusionTally], country: CountryReport) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "method": out_dir / "method_report.csv",
        "country": out_dir / "country_report.csv",
        "predictions": out_dir / "predictions.csv",
        "table1": out_dir / "table1.txt",
        "table2": out_dir / "table2.txt",
    }
    _write_csv(paths["method"], ["backend", "metric", "value"], method_rows(tallies))
    _write_csv(paths["country"], ["country", "instance_count", "backend", "accuracy"], (
        (c, report_count, b.value, repr(country.accuracy[b][c]))
        for c, report_count in country.instances.items()
        for b in BackendId if b in country.accuracy
    ))
    pred_rows = []
    for b in BackendId:
        for person, pred in results.get(b, ()):
            pred_rows.append((person.full_name, person.country or "",
                              "M" if person.true_gender is GenderLabel.MALE else "F",
                              b.value, _label_text(pred.label), repr(pred.score)))
    _write_csv(paths["predictions"], ["full_name", "country", "gender", "backend", "label", "score"], pred_rows)
    paths["table1"].write_text(render_table1(tallies), encoding="utf-8")
    paths["table2"].write_text(render_table2(country), encoding="utf-8")
    return list(paths.values())


def read_method_report(path) -> dict[BackendId, ConfusionTally]:
    path = Path(path)
    cells: dict[BackendId, dict[str, int]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != ["backend", "metric", "value"]:
            raise ParseError("unexpected header", path, 1)
        for row in reader:
            if len(row) != 3:
                raise ParseError("expected backend,metric,value", path, reader.line_num)
            backend, name, value = row
            if name in TALLY_CELLS:
                try:
                    cells.setdefault(BackendId(backend), {})[name] = int(value)
                except ValueError as exc:
                    raise ParseError(str(exc), path, reader.line_num) from None
    return {b: ConfusionTally(**c) for b, c in cells.items()}


def read_country_report(path, min_instances: int = 0) -> CountryReport:
    path = Path(path)
    instances: dict[str, int] = {}
    accuracy: dict[BackendId, dict[str, float]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != ["country", "instance_count", "backend", "accuracy"]:
            raise ParseError("unexpected header", path, 1)
        for row in reader:
            try:
                c, count, backend, acc = row
                instances[c] = int(count)
                accuracy.setdefault(BackendId(backend), {})[c] = float(acc)
            except ValueError as exc:
                raise ParseError(str(exc), path, reader.line_num) from None
    return CountryReport(instances, accuracy, min_instances)
