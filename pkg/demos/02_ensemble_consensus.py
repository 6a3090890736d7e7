"""Consensus across an ensemble of imperfect detectors
=======================================================

No single detector handles cluttered field imagery reliably, but labels
that several detectors (or several frames) agree on are much more likely
to be real. This script plants two species in a synthetic scene, runs
four noisy mock detectors over ten sampled frames, and shows how the
cross-frame, cross-detector tally separates the planted species from
one-off noise.
"""

import numpy as np

from wildvision.consensus import ConsensusConfig, run_pipeline
from wildvision.core import FrameRef
from wildvision.detectors import MockBackend, MockDetectorConfig
from wildvision.sampler import AttentionCrop, FrameSample

VOCABULARY = (
    "bamboo", "banana", "breadfruit", "cacao", "candlenut", "clove",
    "coconut", "coffee", "dragonfruit", "durian", "frangipani", "ginger",
    "guava", "hibiscus", "jackfruit", "lemongrass", "mango", "mangosteen",
    "nutmeg", "papaya", "patchouli", "rambutan", "sugarpalm", "taro",
    "turmeric", "vanilla",
)

# Ten frames of one scene that actually contains cacao and banana.
samples = [
    FrameSample(
        frame=FrameRef("demo-scene", i, i * 1000),
        pixels=np.zeros((8, 8, 3), dtype=np.uint8),
        crop_applied=AttentionCrop(1.0),
    )
    for i in range(10)
]
truth = {s.frame: frozenset({"cacao", "banana"}) for s in samples}

# Four detectors, each right 90% of the time but hallucinating rarely.
backends = [
    MockBackend(
        f"mock-{i}",
        MockDetectorConfig(
            seed=2026 + i,
            true_labels=truth,
            hit_rate=0.9,
            fp_rate=0.05,
            fp_vocabulary=VOCABULARY,
            score_range=(0.5, 1.0),
        ),
    )
    for i in range(4)
]

# 4 detectors x 10 frames = 40 votes per label at most; ask for agreement
# from at least a quarter of them.
cfg = ConsensusConfig(tau=0.5, min_count=10)
result = run_pipeline(samples, backends, cfg)

print("TALLY:", result.tally)
print()
print("ranked by agreement:")
for label, count in result.ranked:
    marker = "<-- selected" if count >= cfg.min_count else ""
    print(f"  {label:12s} {count:3d}  {marker}")
print()
print("final selection:", result.selected)
print("planted truth:  ", sorted({"cacao", "banana"}))
