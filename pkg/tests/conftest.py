from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from wildvision.core import FrameRef
from wildvision.sampler import AttentionCrop, FrameSample, SegmentManifest


def write_segment(
    root: Path,
    arrays: list[np.ndarray],
    segment_id: str = "seg",
    fps: float = 1.0,
) -> Path:
    """Write frame PNGs plus a manifest JSON; returns the manifest path."""
    root.mkdir(parents=True, exist_ok=True)
    for i, arr in enumerate(arrays):
        Image.fromarray(arr).save(root / f"frame_{i + 1:06d}.png")
    manifest_path = root / "manifest.json"
    manifest_path.write_text(
        json.dumps({"segment_id": segment_id, "fps": fps, "frame_count": len(arrays)}),
        encoding="utf-8",
    )
    return manifest_path


def flat_frame(value: int, shape: tuple[int, int] = (8, 8)) -> np.ndarray:
    return np.full(shape + (3,), value, dtype=np.uint8)


def synthetic_samples(
    n: int, segment_id: str = "synthetic", fps: float = 1.0
) -> list[FrameSample]:
    """In-memory FrameSamples (no files) for backend/pipeline tests."""
    out = []
    for i in range(n):
        ref = FrameRef(segment_id, i, round(i * 1000 / fps))
        out.append(
            FrameSample(
                frame=ref,
                pixels=np.zeros((8, 8, 3), dtype=np.uint8),
                crop_applied=AttentionCrop(1.0),
            )
        )
    return out


@pytest.fixture
def segment_dir(tmp_path: Path) -> Path:
    """A 10-frame segment of increasing gray levels at 1 fps."""
    arrays = [flat_frame(25 * i) for i in range(10)]
    return write_segment(tmp_path / "seg", arrays, segment_id="seg", fps=1.0)


def manifest_of(manifest_path: Path) -> SegmentManifest:
    from wildvision.sampler import load_manifest

    return load_manifest(manifest_path)
