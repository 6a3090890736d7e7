"""Detector backends, the confidence threshold, and the wire format.

Detection records cross process (and language) boundaries as JSON Lines,
one record per line, UTF-8, extension ``.detjsonl``::

    {"schema_version": 1, "segment_id": "seg", "frame_index": 0,
     "timestamp_ms": 0, "detector": "D2.A",
     "detections": [{"label": "cacao", "score": 0.91,
                     "box": [x1, y1, x2, y2]}]}

Two backends are built in: a replay backend serving records loaded from
wire files, and a seeded mock that plants configurable true labels and
noise for end-to-end tests without any model weights.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .core import (
    BBox,
    Detection,
    DetectionRecord,
    FrameRef,
    ValidationError,
    normalize_label,
    validate_record,
)
from .sampler import FrameSample

DEFAULT_TAU = 0.5

WIRE_EXTENSION = ".detjsonl"


class ParseError(ValidationError):
    """A wire-format line is malformed; message names file and line."""


class DuplicateKey(ValidationError):
    """Two records share the same (detector, frame) key."""


def threshold_filter(dets: list[Detection], tau: float = DEFAULT_TAU) -> list[Detection]:
    """Keep detections with score >= tau, preserving order.

    The comparison is inclusive so a threshold of 0.5 keeps scores of
    exactly 0.5.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"tau must be in [0, 1]: {tau}")
    return [d for d in dets if d.score >= tau]


class DetectorBackend:
    """Uniform detector interface: a name plus detect(sample) -> detections.

    Implementations must be deterministic for a fixed configuration and
    frame, and safe to call from multiple threads concurrently.
    """

    name: str

    def detect(self, sample: FrameSample) -> list[Detection]:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Wire format
# ---------------------------------------------------------------------------

def encode_record(record: DetectionRecord) -> str:
    """One wire-format line (no trailing newline) for a validated record."""
    validate_record(record)
    doc = {
        "schema_version": record.schema_version,
        "segment_id": record.frame.segment_id,
        "frame_index": record.frame.frame_index,
        "timestamp_ms": record.frame.timestamp_ms,
        "detector": record.detector,
        "detections": [
            {"label": d.label, "score": d.score, "box": d.box.as_list()}
            for d in record.detections
        ],
    }
    return json.dumps(doc, separators=(",", ":"))


def decode_record(line: str) -> DetectionRecord:
    """Parse one wire-format line into a validated DetectionRecord."""
    doc = json.loads(line)
    if not isinstance(doc, dict):
        raise ValidationError("wire record must be a JSON object")
    try:
        detections = tuple(
            Detection(
                label=normalize_label(str(d["label"])),
                score=float(d["score"]),
                box=BBox(*(float(v) for v in d["box"])),
            )
            for d in doc["detections"]
        )
        record = DetectionRecord(
            frame=FrameRef(
                segment_id=str(doc["segment_id"]),
                frame_index=int(doc["frame_index"]),
                timestamp_ms=int(doc["timestamp_ms"]),
            ),
            detector=str(doc["detector"]),
            detections=detections,
            schema_version=int(doc["schema_version"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"wire record missing/malformed field: {exc}") from exc
    return validate_record(record)


@dataclass
class ReplayStore:
    """Validated detection records keyed by (detector, frame), read-only."""

    records: dict[tuple[str, FrameRef], DetectionRecord] = field(default_factory=dict)

    def add(self, record: DetectionRecord) -> None:
        key = (record.detector, record.frame)
        if key in self.records:
            raise DuplicateKey(
                f"duplicate record for detector {record.detector!r} "
                f"frame {record.frame}"
            )
        self.records[key] = record

    def __len__(self) -> int:
        return len(self.records)


def load_wire(paths: list[str | Path]) -> ReplayStore:
    """Load wire files into a ReplayStore, rejecting duplicate keys.

    ParseError names the offending file and 1-based line number; blank
    lines are ignored.
    """
    store = ReplayStore()
    for path in paths:
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = decode_record(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from exc
                except ValidationError as exc:
                    raise ParseError(f"{path}:{lineno}: {exc}") from exc
                store.add(record)
    return store


def replay_detect(store: ReplayStore, detector: str, frame: FrameRef) -> list[Detection]:
    """Detections recorded for (detector, frame); a missing key is simply
    an empty list, indistinguishable from a detector that found nothing."""
    record = store.records.get((detector, frame))
    return list(record.detections) if record is not None else []


class ReplayBackend(DetectorBackend):
    """Serves previously recorded detections for one detector identity."""

    def __init__(self, name: str, store: ReplayStore):
        self.name = name
        self.store = store

    def detect(self, sample: FrameSample) -> list[Detection]:
        return replay_detect(self.store, self.name, sample.frame)


# ---------------------------------------------------------------------------
# Seeded mock
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MockDetectorConfig:
    """Configuration of the deterministic noisy mock detector.

    Each true label of a frame is emitted independently with probability
    ``hit_rate``; each vocabulary label not in the truth is emitted with
    probability ``fp_rate``. Scores are uniform in ``score_range``. All
    randomness is a pure function of (seed, frame identity, label), so
    repeated calls and any scheduling order agree exactly.
    """

    seed: int
    true_labels: dict[FrameRef, frozenset[str]] = field(default_factory=dict)
    hit_rate: float = 1.0
    fp_rate: float = 0.0
    fp_vocabulary: tuple[str, ...] = ()
    score_range: tuple[float, float] = (0.5, 1.0)

    def __post_init__(self) -> None:
        lo, hi = self.score_range
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValidationError(f"score_range must satisfy 0 <= lo <= hi <= 1: {self.score_range}")
        for rate, name in ((self.hit_rate, "hit_rate"), (self.fp_rate, "fp_rate")):
            if not 0.0 <= rate <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1]: {rate}")


def _hash01(seed: int, kind: str, frame: FrameRef, label: str) -> float:
    """Uniform [0, 1) value derived from a stable cryptographic hash."""
    material = f"{seed}|{kind}|{frame.segment_id}|{frame.frame_index}|{frame.timestamp_ms}|{label}"
    digest = hashlib.blake2b(material.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") / 2.0**64


def mock_detect(cfg: MockDetectorConfig, frame: FrameSample) -> list[Detection]:
    """Deterministic noisy detections for one frame.

    Boxes are inert in label-level consensus, so the mock synthesizes a
    centered box of half the frame size for every emission.
    """
    truth = cfg.true_labels.get(frame.frame, frozenset())
    height, width = frame.pixels.shape[:2]
    box = _centered_box(width, height)
    out: list[Detection] = []
    for label in sorted(truth):
        if _hash01(cfg.seed, "hit", frame.frame, label) < cfg.hit_rate:
            out.append(Detection(label, _mock_score(cfg, frame.frame, label), box))
    for label in sorted(set(cfg.fp_vocabulary) - truth):
        if _hash01(cfg.seed, "fp", frame.frame, label) < cfg.fp_rate:
            out.append(Detection(label, _mock_score(cfg, frame.frame, label), box))
    return out


def _mock_score(cfg: MockDetectorConfig, frame: FrameRef, label: str) -> float:
    lo, hi = cfg.score_range
    return lo + (hi - lo) * _hash01(cfg.seed, "score", frame, label)


def _centered_box(width: int, height: int) -> BBox:
    w = max(width / 2.0, 0.5)
    h = max(height / 2.0, 0.5)
    x1 = max((width - w) / 2.0, 0.0)
    y1 = max((height - h) / 2.0, 0.0)
    return BBox(x1, y1, x1 + w, y1 + h)


class MockBackend(DetectorBackend):
    """DetectorBackend wrapper around a MockDetectorConfig."""

    def __init__(self, name: str, cfg: MockDetectorConfig):
        self.name = name
        self.cfg = cfg

    def detect(self, sample: FrameSample) -> list[Detection]:
        return mock_detect(self.cfg, sample)
