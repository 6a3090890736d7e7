"""Shared domain types for detections, frames, and detection records."""

from __future__ import annotations

from dataclasses import dataclass, field

SCHEMA_VERSION = 1


class WildVisionError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(WildVisionError):
    """A value violates a domain invariant."""


class InvalidLabel(ValidationError):
    """Label is empty, contains whitespace, or is not in normalized form."""


class InvalidBox(ValidationError):
    """Bounding box is degenerate or has negative coordinates."""


class InvalidScore(ValidationError):
    """Confidence score is outside [0, 1]."""


class UnknownSchema(ValidationError):
    """Record carries a schema version this code does not understand."""


def normalize_label(name: str) -> str:
    """Normalize a class label at ingestion: strip and lowercase.

    Raises InvalidLabel if the result is empty or contains whitespace.
    Labels are compared case-sensitively after this normalization, so
    every boundary that accepts external labels must pass through here.
    """
    token = name.strip().lower()
    _check_label(token)
    return token


def _check_label(label: str) -> None:
    if not label:
        raise InvalidLabel("label must be non-empty")
    if any(c.isspace() for c in label):
        raise InvalidLabel(f"label must not contain whitespace: {label!r}")
    if label != label.lower():
        raise InvalidLabel(f"label must be lowercase (normalize at ingestion): {label!r}")


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in absolute pixel coordinates, origin top-left.

    Fractional pixels are allowed; x2/y2 are exclusive-ish right/bottom
    edges and must be strictly greater than x1/y1.
    """

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self) -> None:
        for name in ("x1", "y1", "x2", "y2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if min(self.x1, self.y1, self.x2, self.y2) < 0:
            raise InvalidBox(f"coordinates must be >= 0: {self}")
        if not (self.x2 > self.x1 and self.y2 > self.y1):
            raise InvalidBox(f"box must have positive width and height: {self}")

    def as_list(self) -> list[float]:
        return [self.x1, self.y1, self.x2, self.y2]


@dataclass(frozen=True)
class Detection:
    """One (label, score, box) hypothesis from one detector on one frame."""

    label: str
    score: float
    box: BBox

    def __post_init__(self) -> None:
        object.__setattr__(self, "score", float(self.score))
        _check_label(self.label)
        if not 0.0 <= self.score <= 1.0:
            raise InvalidScore(f"score must be in [0, 1]: {self.score}")


@dataclass(frozen=True)
class FrameRef:
    """Identity of one sampled frame within a video segment."""

    segment_id: str
    frame_index: int
    timestamp_ms: int

    def __post_init__(self) -> None:
        if self.frame_index < 0:
            raise ValidationError(f"frame_index must be >= 0: {self.frame_index}")
        if self.timestamp_ms < 0:
            raise ValidationError(f"timestamp_ms must be >= 0: {self.timestamp_ms}")


@dataclass(frozen=True)
class DetectionRecord:
    """All detections from one detector on one frame; the wire-format unit.

    ``detections`` may be empty: a detector that saw the frame and found
    nothing still produces a record.
    """

    frame: FrameRef
    detector: str
    detections: tuple[Detection, ...] = field(default_factory=tuple)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        object.__setattr__(self, "detections", tuple(self.detections))
        _check_record(self)


def _check_record(record: DetectionRecord) -> None:
    if record.schema_version != SCHEMA_VERSION:
        raise UnknownSchema(
            f"schema_version {record.schema_version} not supported (expected {SCHEMA_VERSION})"
        )
    if not record.detector:
        raise ValidationError("detector id must be non-empty")
    for det in record.detections:
        _check_label(det.label)
        if not 0.0 <= det.score <= 1.0:
            raise InvalidScore(f"score must be in [0, 1]: {det.score}")
        # BBox re-validates via its own constructor invariants.
        BBox(det.box.x1, det.box.y1, det.box.x2, det.box.y2)


def validate_record(record: DetectionRecord) -> DetectionRecord:
    """Return ``record`` unchanged iff every domain invariant holds.

    Idempotent; raises InvalidLabel, InvalidBox, InvalidScore, or
    UnknownSchema on the first violation found.
    """
    _check_record(record)
    return record
