"""Acceptance suite: one test per release criterion, with its tolerance
and time budget pinned. Run with ``pytest tests/test_acceptance.py -v``
for one pass/fail line per criterion.
"""

from __future__ import annotations

import math
import os
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildvision.complexity import (
    analyze_dataset,
    explained_variance_fractions,
    local_entropy,
    shannon_entropy,
)
from wildvision.consensus import ConsensusConfig, final_selection, rank, run_pipeline, tally
from wildvision.core import BBox, Detection, DetectionRecord, FrameRef
from wildvision.detectors import (
    MockBackend,
    MockDetectorConfig,
    ReplayBackend,
    encode_record,
    load_wire,
)
from wildvision.metrics import EvalRecord, evaluate
from wildvision.sampler import AttentionCrop, FrameSample

VOCABULARY_26 = (
    "bamboo", "banana", "breadfruit", "cacao", "candlenut", "clove",
    "coconut", "coffee", "dragonfruit", "durian", "frangipani", "ginger",
    "guava", "hibiscus", "jackfruit", "lemongrass", "mango", "mangosteen",
    "nutmeg", "papaya", "patchouli", "rambutan", "sugarpalm", "taro",
    "turmeric", "vanilla",
)

GOLDEN_COUNTS = {
    "sugarpalm": 6,
    "cacao": 4,
    "taro": 1,
    "banana": 3,
    "bamboo": 1,
    "dragonfruit": 1,
}


class _Budget:
    """Context manager asserting a wall-clock budget and printing a line."""

    def __init__(self, name: str, seconds: float):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"{self.name} took {elapsed:.2f}s, budget {self.seconds}s"
            )
            print(f"ACCEPTANCE {self.name}: PASS ({elapsed:.2f}s)")
        else:
            print(f"ACCEPTANCE {self.name}: FAIL")
        return False


def _samples(n: int, segment_id: str = "synthetic") -> list[FrameSample]:
    return [
        FrameSample(
            frame=FrameRef(segment_id, i, i * 1000),
            pixels=np.zeros((8, 8, 3), dtype=np.uint8),
            crop_applied=AttentionCrop(1.0),
        )
        for i in range(n)
    ]


# ---------------------------------------------------------------------------
# 1. Golden consensus
# ---------------------------------------------------------------------------

def test_criterion_1_golden_consensus(tmp_path: Path):
    with _Budget("1 golden-consensus", 1.0):
        per_frame = [
            ["sugarpalm", "cacao", "banana", "taro"],
            ["sugarpalm", "cacao", "banana", "bamboo"],
            ["sugarpalm", "cacao", "banana", "dragonfruit"],
            ["sugarpalm", "cacao"],
            ["sugarpalm"],
            ["sugarpalm"],
        ]
        lines = []
        for i, labels in enumerate(per_frame):
            record = DetectionRecord(
                frame=FrameRef("field19", i, i * 1000),
                detector="D2.A",
                detections=tuple(
                    Detection(label, 0.8, BBox(0, 0, 4, 4)) for label in labels
                ),
            )
            lines.append(encode_record(record))
        wire = tmp_path / "field19.detjsonl"
        wire.write_text("\n".join(lines) + "\n", encoding="utf-8")

        store = load_wire([wire])
        samples = _samples(6, segment_id="field19")
        result = run_pipeline(samples, [ReplayBackend("D2.A", store)], ConsensusConfig())

        assert result.tally == GOLDEN_COUNTS
        assert result.selected == ["sugarpalm", "cacao", "banana"]


# ---------------------------------------------------------------------------
# 2. Metrics oracle equivalence
# ---------------------------------------------------------------------------

def test_criterion_2_metrics_match_enumeration_oracle():
    import itertools

    universe = ["a", "b", "c", "d", "e"]

    def subsets(labels):
        for r in range(len(labels) + 1):
            yield from (set(c) for c in itertools.combinations(labels, r))

    def oracle(t, p):
        hits = sum(1 for x in t if x in p)
        recall = hits / len(t)
        precision = hits / len(p) if len(p) > 0 else 0.0
        if recall == 0.0 or precision == 0.0:
            return recall, precision, 0.0
        return recall, precision, (2.0 * recall * precision) / (recall + precision)

    with _Budget("2 metrics-oracle", 1.0):
        pairs = 0
        for t in subsets(universe):
            if not t:
                continue
            for p in subsets(universe):
                got = evaluate(EvalRecord.of("img", t, p))
                want = oracle(t, p)
                assert abs(got.recall - want[0]) <= 1e-12
                assert abs(got.precision - want[1]) <= 1e-12
                assert abs(got.fmeasure - want[2]) <= 1e-12
                pairs += 1
        assert pairs == 992


# ---------------------------------------------------------------------------
# 3. Entropy suite
# ---------------------------------------------------------------------------

def test_criterion_3_entropy_suite():
    with _Budget("3 entropy-suite", 5.0):
        assert shannon_entropy(np.full((64, 64), 17, dtype=np.uint8)) == pytest.approx(
            0.0, abs=1e-12
        )

        half = np.zeros((16, 16), dtype=np.uint8)
        half[:, 8:] = 200
        assert shannon_entropy(half) == pytest.approx(1.0, abs=1e-12)

        rng = np.random.default_rng(20260809)
        noise = rng.integers(0, 256, size=(512, 512), dtype=np.uint8)
        assert shannon_entropy(noise) >= 7.98

        emap, stats = local_entropy(noise[:96, :96], 10)
        assert np.all(emap >= 0.0) and np.all(emap <= 8.0)
        assert 0.0 <= stats.min <= stats.mean <= stats.max <= 8.0

        flat = noise.reshape(-1).copy()
        rng.shuffle(flat)
        assert shannon_entropy(noise) == shannon_entropy(flat.reshape(512, 512))


# ---------------------------------------------------------------------------
# 4. PCA suite
# ---------------------------------------------------------------------------

def test_criterion_4_pca_suite():
    with _Budget("4 pca-suite", 10.0):
        rng = np.random.default_rng(404)

        pattern = rng.normal(size=256)
        rank1 = np.stack([c * pattern + 3.0 for c in rng.uniform(0.5, 4.0, size=12)])
        fractions = explained_variance_fractions(rank1)
        assert fractions[0] == pytest.approx(1.0, abs=1e-9)

        x = rng.normal(size=(30, 500))
        fractions = explained_variance_fractions(x)
        assert np.all(np.diff(fractions) >= -1e-12)
        assert fractions[-1] == pytest.approx(1.0, abs=1e-9)
        assert fractions[30 - 2] == pytest.approx(1.0, abs=1e-9)  # k = n-1 is full rank

        imgs = rng.normal(size=(20, 256)) * 2.5 + 10.0  # 20 images, 16x16 flattened
        gram = explained_variance_fractions(imgs)
        centered = imgs - imgs.mean(axis=0)
        cov = centered.T @ centered / (imgs.shape[0] - 1)
        eigvals = np.clip(np.linalg.eigvalsh(cov)[::-1], 0.0, None)
        dense = np.cumsum(eigvals) / eigvals.sum()
        k = min(len(gram), len(dense))
        assert np.allclose(gram[:k], dense[:k], rtol=1e-6, atol=1e-12)


# ---------------------------------------------------------------------------
# 5. End-to-end synthetic recovery
# ---------------------------------------------------------------------------

def _ensemble(samples, base_seed: int) -> list[MockBackend]:
    truth = {s.frame: frozenset({"cacao", "banana"}) for s in samples}
    return [
        MockBackend(
            f"mock-{i}",
            MockDetectorConfig(
                seed=base_seed * 4 + i,
                true_labels=truth,
                hit_rate=0.9,
                fp_rate=0.05,
                fp_vocabulary=VOCABULARY_26,
                score_range=(0.5, 1.0),
            ),
        )
        for i in range(4)
    ]


def test_criterion_5_synthetic_recovery():
    # min_count 10 = a quarter of the 40 (detector, frame) pairs; the true
    # labels land near 36 while a noise label reaches 10 with p ~ 2e-5.
    cfg = ConsensusConfig(tau=0.5, min_count=10, dedupe_per_frame_detector=True)
    with _Budget("5 synthetic-recovery", 30.0):
        samples = _samples(10)
        recovered = 0
        for seed in range(100):
            result = run_pipeline(samples, _ensemble(samples, seed), cfg, max_workers=4)
            if set(result.selected) == {"cacao", "banana"}:
                recovered += 1
        assert recovered >= 95, f"planted set recovered in only {recovered}/100 seeds"

        # Pinned seed: recompute the tally by hand from the raw detections.
        backends = _ensemble(samples, 7)
        expected = Counter()
        for backend in backends:
            for sample in samples:
                kept = {d.label for d in backend.detect(sample) if d.score >= cfg.tau}
                expected.update(sorted(kept))
        hand_ranked = sorted(expected.items(), key=lambda kv: (-kv[1], kv[0]))
        hand_selected = [label for label, n in hand_ranked if n >= cfg.min_count]

        result = run_pipeline(samples, backends, cfg)
        assert result.tally == dict(expected)
        assert result.ranked == hand_ranked
        assert result.selected == hand_selected
        assert set(hand_selected) == {"cacao", "banana"}


# ---------------------------------------------------------------------------
# 6. Consensus invariants (property suite, >= 1000 cases)
# ---------------------------------------------------------------------------

def _acceptance_records():
    def build(entries):
        return [
            DetectionRecord(
                frame=FrameRef("seg", idx, idx * 1000),
                detector=det,
                detections=tuple(
                    Detection(label, score, BBox(0, 0, 4, 4)) for label, score in labeled
                ),
            )
            for (det, idx), labeled in entries.items()
        ]

    return st.dictionaries(
        keys=st.tuples(
            st.sampled_from(["D2.A", "D2.B", "D2.C", "D2.D"]),
            st.integers(min_value=0, max_value=5),
        ),
        values=st.lists(
            st.tuples(
                st.sampled_from(VOCABULARY_26[:8]),
                st.floats(min_value=0.0, max_value=1.0),
            ),
            max_size=5,
        ),
        max_size=10,
    ).map(build)


def test_criterion_6_consensus_invariants():
    cases = Counter()
    records_strategy = _acceptance_records()

    @settings(max_examples=350, deadline=None)
    @given(records=records_strategy, seed=st.integers(min_value=0, max_value=2**31))
    def check_permutation_invariance(records, seed):
        import random

        cases["permutation"] += 1
        cfg = ConsensusConfig()
        shuffled = records[:]
        random.Random(seed).shuffle(shuffled)
        assert tally(shuffled, cfg) == tally(records, cfg)
        assert rank(tally(shuffled, cfg)) == rank(tally(records, cfg))
        assert final_selection(tally(shuffled, cfg), cfg) == final_selection(
            tally(records, cfg), cfg
        )

    @settings(max_examples=350, deadline=None)
    @given(
        records=records_strategy,
        t1=st.floats(min_value=0.0, max_value=1.0),
        t2=st.floats(min_value=0.0, max_value=1.0),
    )
    def check_threshold_monotonicity(records, t1, t2):
        cases["tau"] += 1
        lo, hi = min(t1, t2), max(t1, t2)
        loose = tally(records, ConsensusConfig(tau=lo))
        strict = tally(records, ConsensusConfig(tau=hi))
        for label, count in strict.items():
            assert count <= loose.get(label, 0)

    @settings(max_examples=350, deadline=None)
    @given(records=records_strategy, k=st.integers(min_value=1, max_value=8))
    def check_min_count_monotonicity(records, k):
        cases["min_count"] += 1
        counts = tally(records, ConsensusConfig())
        tighter = set(final_selection(counts, ConsensusConfig(min_count=k + 1)))
        looser = set(final_selection(counts, ConsensusConfig(min_count=k)))
        assert tighter <= looser

    with _Budget("6 consensus-invariants", 30.0):
        check_permutation_invariance()
        check_threshold_monotonicity()
        check_min_count_monotonicity()
        assert sum(cases.values()) >= 1000, cases


# ---------------------------------------------------------------------------
# 7. Extended data check (optional; needs user-supplied datasets)
# ---------------------------------------------------------------------------

BALI_DIR = os.environ.get("WILDVISION_BALI26_DIR")
IMAGENET_DIR = os.environ.get("WILDVISION_IMAGENET_DIR")


@pytest.mark.skipif(
    not (BALI_DIR and IMAGENET_DIR),
    reason="extended check: set WILDVISION_BALI26_DIR and WILDVISION_IMAGENET_DIR",
)
def test_criterion_7_extended_dataset_comparison():
    bali = analyze_dataset(BALI_DIR, image_size=(300, 300))
    imagenet = analyze_dataset(IMAGENET_DIR, image_size=(300, 300))
    delta = (
        bali.mean_shannon["green"] - imagenet.mean_shannon["green"]
    )
    assert delta >= 0.3, f"green-channel entropy delta {delta:.3f} < 0.3 bits"
    assert bali.pca is not None and imagenet.pca is not None
    assert bali.pca.cumulative_fraction < imagenet.pca.cumulative_fraction
    print(
        f"ACCEPTANCE 7 extended-datasets: PASS (delta={delta:.3f} bits, "
        f"pca {bali.pca.cumulative_fraction:.2f} < {imagenet.pca.cumulative_fraction:.2f})"
    )
