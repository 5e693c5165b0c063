"""
Benchmark report rows, class aggregates and their CSV / markdown rendering.

Column order is fixed: the run identity and counters first, then the class
tag, deletions, oracle check and a free-form note. ``t`` is wall time and
is not comparable across machines; ``n`` and ``cc`` are exact.
"""
import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Optional


logger = logging.getLogger(__name__)

COLUMNS = ("instance", "algorithm", "verdict", "t", "n", "cc", "bumps", "class", "deletions", "check", "note")
NUMERIC_COLUMNS = ("t", "n", "cc", "bumps", "deletions")
REPORT_FORMATS = ("csv", "markdown")

CONSISTENT = "CONSISTENT"
WIPEOUT = "WIPEOUT"
ERROR = "ERROR"
AGGREGATE = "AGGREGATE"


@dataclass
class ReportRow:
    instance: str
    algorithm: str
    verdict: str
    t: float = 0.0
    n: int = 0
    cc: int = 0
    bumps: int = 0
    class_tag: str = ""
    deletions: int = 0
    check: str = ""
    note: str = ""

    def __post_init__(self):
        self.t = round(float(self.t), 6)

    @property
    def is_aggregate(self) -> bool:
        return self.verdict == AGGREGATE

    def as_data(self) -> dict:
        """Plain dict keyed by column name, JSON-serializable."""
        return {
            "instance": self.instance,
            "algorithm": self.algorithm,
            "verdict": self.verdict,
            "t": self.t,
            "n": self.n,
            "cc": self.cc,
            "bumps": self.bumps,
            "class": self.class_tag,
            "deletions": self.deletions,
            "check": self.check,
            "note": self.note,
        }

    def as_record(self) -> list:
        data = self.as_data()
        data["t"] = f"{self.t:.6f}"
        return [str(data[column]) for column in COLUMNS]

    @classmethod
    def from_data(cls, data: dict) -> "ReportRow":
        return cls(
            instance=data["instance"],
            algorithm=data["algorithm"],
            verdict=data["verdict"],
            t=float(data["t"] or 0),
            n=int(data["n"] or 0),
            cc=int(data["cc"] or 0),
            bumps=int(data["bumps"] or 0),
            class_tag=data.get("class", ""),
            deletions=int(data.get("deletions") or 0),
            check=data.get("check", ""),
            note=data.get("note", ""),
        )


def error_row(instance: str, algorithm: str, exc: Exception, class_tag: str = "") -> ReportRow:
    return ReportRow(instance, algorithm, ERROR, class_tag=class_tag, note=f"{type(exc).__name__}: {exc}")


def aggregate(rows) -> list:
    """
    One row per (class, algorithm) in first-appearance order: mean t, total
    n, cc, bumps and deletions over the runs that completed.
    """
    groups = {}
    for row in rows:
        if row.is_aggregate or row.verdict == ERROR:
            continue
        groups.setdefault((row.class_tag, row.algorithm), []).append(row)
    aggregates = []
    for (class_tag, algorithm), members in groups.items():
        aggregates.append(
            ReportRow(
                instance=f"[{class_tag or 'unclassified'}]",
                algorithm=algorithm,
                verdict=AGGREGATE,
                t=sum(r.t for r in members) / len(members),
                n=sum(r.n for r in members),
                cc=sum(r.cc for r in members),
                bumps=sum(r.bumps for r in members),
                class_tag=class_tag,
                deletions=sum(r.deletions for r in members),
                check="OK" if all(r.check in ("", "OK") for r in members) else "MISMATCH",
                note=f"{len(members)} runs",
            )
        )
    return aggregates


@dataclass
class Report:
    rows: list = field(default_factory=list)
    aggregates: list = field(default_factory=list)
    title: Optional[str] = None

    @classmethod
    def from_rows(cls, rows, title=None) -> "Report":
        rows = list(rows)
        return cls(rows=rows, aggregates=aggregate(rows), title=title)

    def all_rows(self) -> list:
        return self.rows + self.aggregates

    @property
    def errors(self) -> list:
        return [row for row in self.rows if row.verdict == ERROR]


def emit(report: Report, fmt: str = "csv") -> bytes:
    """Render per-instance rows followed by aggregates; an empty report is its header."""
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in report.all_rows():
            writer.writerow(row.as_record())
        text = buffer.getvalue()
    elif fmt == "markdown":
        lines = []
        if report.title:
            lines += [f"### {report.title}", ""]
        lines.append("| " + " | ".join(COLUMNS) + " |")
        lines.append("|" + "|".join("---:" if c in NUMERIC_COLUMNS else "---" for c in COLUMNS) + "|")
        for row in report.all_rows():
            cells = [cell.replace("|", "\\|") for cell in row.as_record()]
            if row.is_aggregate:
                cells[0] = f"**{cells[0]}**"
            lines.append("| " + " | ".join(cells) + " |")
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"Unknown report format {fmt!r}; choose from {', '.join(REPORT_FORMATS)}")
    return text.encode("utf-8")


def parse_csv(data) -> Report:
    """Report back from ``emit(..., "csv")`` output."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.DictReader(io.StringIO(data))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"Unexpected report columns: {reader.fieldnames}")
    report = Report()
    for record in reader:
        row = ReportRow.from_data(record)
        (report.aggregates if row.is_aggregate else report.rows).append(row)
    return report


def write_report(report: Report, fmt: str, path) -> None:
    with open(path, "wb") as handle:
        handle.write(emit(report, fmt))
    logger.info(f"Report with {len(report.rows)} rows written to {path}")
