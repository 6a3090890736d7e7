"""Sampling frames from a video segment
========================================

A segment arrives as a directory of extracted frames plus a tiny JSON
manifest. This script builds a synthetic 19-frame segment whose
brightness drifts over time, samples one frame per second, crops each
frame to the central focus area, and reports the luminance spread of
the batch.
"""

import json
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from wildvision.sampler import (
    AttentionCrop,
    SamplingPlan,
    load_manifest,
    load_samples,
    luminance_spread,
    plan_samples,
)

workdir = Path(tempfile.mkdtemp(prefix="wildvision-demo-"))
segment = workdir / "forest-walk"
segment.mkdir()

# 19 frames at 1 fps: brightness rises then falls, like patchy canopy light.
for i in range(19):
    level = int(80 + 70 * np.sin(i / 6.0))
    frame = np.full((90, 160, 3), level, dtype=np.uint8)
    Image.fromarray(frame).save(segment / f"frame_{i + 1:06d}.png")

(segment / "manifest.json").write_text(
    json.dumps({"segment_id": "forest-walk", "fps": 1.0, "frame_count": 19})
)

manifest = load_manifest(segment / "manifest.json")
refs = plan_samples(manifest, SamplingPlan(19))
print("sampled frame indices:", [r.frame_index for r in refs])

crop = AttentionCrop(0.6)
samples = load_samples(manifest, refs, crop)
print(f"crop fraction {crop.fraction}: frames are now {samples[0].pixels.shape}")

for sample in samples[:5]:
    print(
        f"  frame {sample.frame.frame_index:2d} @ {sample.frame.timestamp_ms:5d} ms"
        f"  mean luma {sample.mean_luma:6.1f}  std {sample.std_luma:5.1f}"
    )

print(f"luminance spread across the batch: {luminance_spread(samples):.1f}")
print("(a healthy spread means the detectors will see varied lighting)")
