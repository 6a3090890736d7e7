"""Set-based evaluation: per-image recall, precision, f-measure, averages.

For one test image with actual species set ``t`` and predicted species
set ``p``::

    recall    = |t & p| / |t|
    precision = |t & p| / |p|      (0 when p is empty)
    fmeasure  = 2 / (1/recall + 1/precision)   (0 when either is 0)

Dataset-level numbers are arithmetic means of the per-image values.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .core import ValidationError, normalize_label


class EmptyTruth(ValidationError):
    """An evaluation record has no actual labels."""


class EmptyInput(ValidationError):
    """aggregate() received no results."""


@dataclass(frozen=True)
class EvalRecord:
    """Actual label set ``t`` and predicted label set ``p`` of one image."""

    image_id: str
    t: frozenset[str]
    p: frozenset[str]

    @classmethod
    def of(cls, image_id: str, t: Iterable[str], p: Iterable[str]) -> EvalRecord:
        """Build a record from raw label iterables, normalizing and
        collapsing duplicates (the metrics are defined on sets)."""
        return cls(
            image_id=image_id,
            t=frozenset(normalize_label(x) for x in t),
            p=frozenset(normalize_label(x) for x in p),
        )


@dataclass(frozen=True)
class EvalResult:
    recall: float
    precision: float
    fmeasure: float


@dataclass(frozen=True)
class AggregateResult:
    mean_recall: float
    mean_precision: float
    mean_fmeasure: float
    n: int


def evaluate(rec: EvalRecord) -> EvalResult:
    """Per-image recall, precision and f-measure of one record."""
    if not rec.t:
        raise EmptyTruth(f"image {rec.image_id!r} has an empty actual label set")
    hits = len(rec.t & rec.p)
    recall = hits / len(rec.t)
    precision = hits / len(rec.p) if rec.p else 0.0
    if recall > 0.0 and precision > 0.0:
        fmeasure = 2.0 / (1.0 / recall + 1.0 / precision)
    else:
        fmeasure = 0.0
    return EvalResult(recall, precision, fmeasure)


def aggregate(results: list[EvalResult]) -> AggregateResult:
    """Arithmetic means of the per-image metrics.

    Uses compensated summation so the result is independent of record
    order to within 1e-12.
    """
    if not results:
        raise EmptyInput("aggregate needs at least one result")
    n = len(results)
    return AggregateResult(
        mean_recall=math.fsum(r.recall for r in results) / n,
        mean_precision=math.fsum(r.precision for r in results) / n,
        mean_fmeasure=math.fsum(r.fmeasure for r in results) / n,
        n=n,
    )


def load_eval_records(path: str | Path) -> list[EvalRecord]:
    """Read (image_id, t, p) records from a CSV or JSON Lines file.

    CSV columns: image_id, actual, predicted, where the label cells hold
    whitespace-separated tokens (labels never contain whitespace). JSONL
    documents carry "image_id", "t" and "p" arrays.
    """
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _load_csv(path)
    return _load_jsonl(path)


def _load_csv(path: Path) -> list[EvalRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                records.append(
                    EvalRecord.of(
                        row["image_id"],
                        row["actual"].split(),
                        row["predicted"].split(),
                    )
                )
            except KeyError as exc:
                raise ValidationError(
                    f"{path}: CSV needs columns image_id, actual, predicted (missing {exc})"
                ) from exc
    return records


def _load_jsonl(path: Path) -> list[EvalRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                records.append(EvalRecord.of(doc["image_id"], doc["t"], doc["p"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValidationError(f"{path}:{lineno}: bad eval record: {exc}") from exc
    return records


def evaluation_report(records: list[EvalRecord]) -> dict:
    """Per-image metrics plus the dataset means, as one JSON-ready dict."""
    results = [evaluate(r) for r in records]
    agg = aggregate(results)
    return {
        "n": agg.n,
        "mean_recall": agg.mean_recall,
        "mean_precision": agg.mean_precision,
        "mean_fmeasure": agg.mean_fmeasure,
        "per_image": [
            {
                "image_id": rec.image_id,
                "recall": res.recall,
                "precision": res.precision,
                "fmeasure": res.fmeasure,
            }
            for rec, res in zip(records, results)
        ],
    }
