"""Report rows, deterministic CSV emission, and JSON summaries."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

CSV_COLUMNS = ("experiment", "n", "p", "trial", "ratio",
               "normalized_constant", "bound", "pass")

PASS, FAIL, SKIPPED, REPORT = "pass", "fail", "skipped", "report"


def _fmt(v) -> str:
    """Shortest round-trip decimal form; '' for missing, 'inf' for infinity."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return repr(v)


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    n: int
    p: float | None
    trial: int
    ratio: float | None
    normalized_constant: float | None
    bound: float | None
    status: str

    @classmethod
    def judged(cls, experiment, n, p, trial, ratio, normalized, bound):
        """Row whose pass flag is decided by normalized <= bound."""
        status = PASS if float(normalized) <= float(bound) else FAIL
        return cls(experiment, int(n), p, int(trial), ratio, normalized,
                   float(bound), status)

    @classmethod
    def reported(cls, experiment, n, p, trial, ratio, normalized=None):
        return cls(experiment, int(n), p, int(trial), ratio, normalized,
                   None, REPORT)

    @classmethod
    def skipped(cls, experiment, n, p, trial):
        return cls(experiment, int(n), p, int(trial), None, None, None, SKIPPED)

    def csv_values(self) -> list:
        return [self.experiment, _fmt(self.n), _fmt(self.p), _fmt(self.trial),
                _fmt(self.ratio), _fmt(self.normalized_constant),
                _fmt(self.bound), self.status]

    def to_doc(self) -> dict:
        return dict(zip(CSV_COLUMNS, (self.experiment, self.n,
                                      sanitize(self.p), self.trial,
                                      sanitize(self.ratio),
                                      sanitize(self.normalized_constant),
                                      sanitize(self.bound), self.status)))


def row_from_doc(doc: dict) -> ReportRow:
    def num(v):
        if v is None:
            return None
        if isinstance(v, str):
            return float(v)
        return float(v)

    return ReportRow(doc["experiment"], int(doc["n"]), num(doc["p"]),
                     int(doc["trial"]), num(doc["ratio"]),
                     num(doc["normalized_constant"]), num(doc["bound"]),
                     doc["pass"])


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(row.csv_values()))
    return "\n".join(lines) + "\n"


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows))


def sanitize(obj):
    """Replace non-finite floats so the result is valid strict JSON."""
    if isinstance(obj, dict):
        return {k: sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return "nan"
        return f
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    return obj


def write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(sanitize(doc), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
