"""Frame sampling, attention cropping, and per-frame luminance statistics.

A video segment is consumed as a directory of pre-extracted frame images
(ordered, e.g. ``frame_000001.png``) plus a small JSON manifest; video
decoding itself is out of scope. An external extractor is expected to
write frames at a constant rate with zero-padded names so that the
lexicographic file order equals the temporal order.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .core import BBox, FrameRef, ValidationError, WildVisionError

# BT.601 luma weights; fixed so luminance numbers are exactly reproducible.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

FRAME_EXTENSIONS = (".png", ".jpg", ".jpeg")

DEFAULT_CROP_FRACTION = 0.6


class CountExceedsFrames(ValidationError):
    """Requested more samples than the segment has frames."""


class EmptyBatch(ValidationError):
    """An operation that needs at least one sample received none."""


class MissingFrame(WildVisionError):
    """A referenced frame image file does not exist."""


class DecodeError(WildVisionError):
    """A frame image file exists but cannot be decoded."""


@dataclass(frozen=True)
class SegmentManifest:
    """One video segment: an ordered frame directory plus timing info."""

    segment_id: str
    frame_dir: Path
    fps: float
    frame_count: int

    def __post_init__(self) -> None:
        if self.fps <= 0:
            raise ValidationError(f"fps must be > 0: {self.fps}")
        if self.frame_count < 1:
            raise ValidationError(f"frame_count must be >= 1: {self.frame_count}")


@dataclass(frozen=True)
class SamplingPlan:
    """How many frames to draw, evenly spaced across the segment."""

    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValidationError(f"sample count must be >= 1: {self.count}")


@dataclass(frozen=True)
class AttentionCrop:
    """Centered crop keeping ``fraction`` of each side (the focus area)."""

    fraction: float = DEFAULT_CROP_FRACTION

    def __post_init__(self) -> None:
        if not 0.0 < self.fraction <= 1.0:
            raise ValidationError(f"crop fraction must be in (0, 1]: {self.fraction}")


@dataclass(frozen=True)
class FrameSample:
    """A loaded, cropped frame with its luminance statistics."""

    frame: FrameRef
    pixels: np.ndarray = field(compare=False, repr=False)
    crop_applied: AttentionCrop = AttentionCrop(1.0)
    mean_luma: float = 0.0
    std_luma: float = 0.0


def load_manifest(path: str | Path) -> SegmentManifest:
    """Read a segment manifest JSON document.

    The document carries ``segment_id``, ``fps`` and ``frame_count``;
    the frame images live in the directory containing the manifest.
    Raises ValidationError when frame_count disagrees with the number of
    frame images actually present.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        manifest = SegmentManifest(
            segment_id=str(doc["segment_id"]),
            frame_dir=path.parent,
            fps=float(doc["fps"]),
            frame_count=int(doc["frame_count"]),
        )
    except KeyError as exc:
        raise ValidationError(f"manifest {path} missing field {exc}") from exc
    present = len(list_frame_files(manifest))
    if present != manifest.frame_count:
        raise ValidationError(
            f"manifest {path} declares {manifest.frame_count} frames "
            f"but {present} image files are present"
        )
    return manifest


def list_frame_files(manifest: SegmentManifest) -> list[Path]:
    """Frame image files of the segment in temporal (lexicographic) order."""
    files = [
        p
        for p in sorted(manifest.frame_dir.iterdir())
        if p.suffix.lower() in FRAME_EXTENSIONS
    ]
    return files


def timestamp_ms_for(index: int, fps: float) -> int:
    """Millisecond timestamp of a frame index (round half up).

    This rule is part of the wire contract: every producer of detection
    records must derive timestamps the same way or replay lookups miss.
    """
    return int(math.floor(index * 1000.0 / fps + 0.5))


def frame_ref(manifest: SegmentManifest, index: int) -> FrameRef:
    """FrameRef for one index of the segment, timestamp derived from fps."""
    if not 0 <= index < manifest.frame_count:
        raise ValidationError(
            f"frame index {index} outside [0, {manifest.frame_count})"
        )
    return FrameRef(
        segment_id=manifest.segment_id,
        frame_index=index,
        timestamp_ms=timestamp_ms_for(index, manifest.fps),
    )


def plan_samples(manifest: SegmentManifest, plan: SamplingPlan) -> list[FrameRef]:
    """Pick ``plan.count`` evenly spaced frames from the segment.

    Index i of the plan maps to round((i + 0.5) * frame_count / count),
    with exact halves rounded down; computed in integer arithmetic so the
    result is deterministic. Indices are strictly increasing and clamped
    to [0, frame_count - 1].
    """
    if plan.count > manifest.frame_count:
        raise CountExceedsFrames(
            f"cannot sample {plan.count} frames from {manifest.frame_count}"
        )
    fc, n = manifest.frame_count, plan.count
    refs = []
    for i in range(n):
        # round-half-down((2i+1) * fc / (2n)) == ceil(((2i+1) * fc - n) / (2n))
        idx = -(-((2 * i + 1) * fc - n) // (2 * n))
        idx = min(max(idx, 0), fc - 1)
        refs.append(frame_ref(manifest, idx))
    return refs


def attention_crop(width: int, height: int, crop: AttentionCrop) -> BBox:
    """Centered crop box of ``fraction`` of each side, rounded half up."""
    if width < 1 or height < 1:
        raise ValidationError(f"image must be at least 1x1: {width}x{height}")
    w = min(max(_round_half_up(crop.fraction * width), 1), width)
    h = min(max(_round_half_up(crop.fraction * height), 1), height)
    x1 = min(_round_half_up((width - w) / 2.0), width - w)
    y1 = min(_round_half_up((height - h) / 2.0), height - h)
    return BBox(float(x1), float(y1), float(x1 + w), float(y1 + h))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def load_samples(
    manifest: SegmentManifest,
    refs: list[FrameRef],
    crop: AttentionCrop = AttentionCrop(1.0),
    max_workers: int | None = None,
) -> list[FrameSample]:
    """Load, crop, and measure the referenced frames, in ref order.

    Frames are decoded in parallel threads but the output order always
    equals the input ref order. Raises MissingFrame / DecodeError for
    unreadable files.
    """
    files = list_frame_files(manifest)
    workers = max_workers or default_workers()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: _load_one(files, r, crop), refs))


def _load_one(files: list[Path], ref: FrameRef, crop: AttentionCrop) -> FrameSample:
    if ref.frame_index >= len(files):
        raise MissingFrame(
            f"frame index {ref.frame_index} of segment {ref.segment_id!r} "
            f"has no file ({len(files)} frames present)"
        )
    path = files[ref.frame_index]
    if not path.exists():
        raise MissingFrame(str(path))
    try:
        with Image.open(path) as img:
            rgb = np.asarray(img.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc
    height, width = rgb.shape[:2]
    box = attention_crop(width, height, crop)
    cropped = rgb[int(box.y1) : int(box.y2), int(box.x1) : int(box.x2)]
    luma = luma_of(cropped)
    return FrameSample(
        frame=ref,
        pixels=cropped,
        crop_applied=crop,
        mean_luma=float(luma.mean()),
        std_luma=float(luma.std()),
    )


def luma_of(pixels: np.ndarray) -> np.ndarray:
    """Per-pixel BT.601 luma (0.299 R + 0.587 G + 0.114 B) as float64."""
    rgb = pixels.astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    return wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2]


def luminance_spread(samples: list[FrameSample]) -> float:
    """Spread of mean luma across the batch: max(mean) - min(mean).

    Reported as the lighting-variation diversity of a sampled batch; a
    single sample (or identical frames) yields 0.0.
    """
    if not samples:
        raise EmptyBatch("luminance_spread needs at least one sample")
    means = [s.mean_luma for s in samples]
    return max(means) - min(means)


def default_workers() -> int:
    """Parallelism cap: WILDVISION_THREADS if set, else CPU count."""
    env = os.environ.get("WILDVISION_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)
