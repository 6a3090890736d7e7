"""Detection records on the wire
=================================

Detector output crosses process and language boundaries as JSON Lines
(`.detjsonl`): one record per detector per frame. This script writes a
small wire file by hand, loads it back into a replay store, and runs the
consensus pipeline purely from the recorded detections, the same way the
command line's `classify` consumes the output of an external detector
adapter.
"""

import tempfile
from pathlib import Path

import numpy as np

from wildvision.consensus import ConsensusConfig, run_pipeline
from wildvision.core import BBox, Detection, DetectionRecord, FrameRef
from wildvision.detectors import ReplayBackend, encode_record, load_wire
from wildvision.sampler import AttentionCrop, FrameSample

workdir = Path(tempfile.mkdtemp(prefix="wildvision-demo-"))

# Two detectors looked at three frames; their records disagree a little.
scene = [
    ("D2.A", 0, [("cacao", 0.91), ("banana", 0.66)]),
    ("D2.A", 1, [("cacao", 0.88)]),
    ("D2.A", 2, [("cacao", 0.79), ("taro", 0.52)]),
    ("D2.B", 0, [("banana", 0.71)]),
    ("D2.B", 1, [("cacao", 0.58), ("banana", 0.69)]),
    ("D2.B", 2, []),
]

wire_path = workdir / "scene.detjsonl"
with open(wire_path, "w", encoding="utf-8") as fh:
    for detector, index, labeled in scene:
        record = DetectionRecord(
            frame=FrameRef("scene", index, index * 1000),
            detector=detector,
            detections=tuple(
                Detection(label, score, BBox(10, 10, 50, 50))
                for label, score in labeled
            ),
        )
        fh.write(encode_record(record) + "\n")

print("wire file:", wire_path)
print(wire_path.read_text().strip())
print()

store = load_wire([wire_path])
print(f"loaded {len(store)} records")

samples = [
    FrameSample(
        frame=FrameRef("scene", i, i * 1000),
        pixels=np.zeros((4, 4, 3), dtype=np.uint8),
        crop_applied=AttentionCrop(1.0),
    )
    for i in range(3)
]
backends = [ReplayBackend("D2.A", store), ReplayBackend("D2.B", store)]
result = run_pipeline(samples, backends, ConsensusConfig(tau=0.5, min_count=2))

print("tally:", result.tally)
print("selected:", result.selected, "(taro was seen once and dropped)")
