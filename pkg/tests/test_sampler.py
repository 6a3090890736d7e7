from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import flat_frame, write_segment
from wildvision.core import FrameRef, ValidationError
from wildvision.sampler import (
    AttentionCrop,
    CountExceedsFrames,
    DecodeError,
    EmptyBatch,
    MissingFrame,
    SamplingPlan,
    SegmentManifest,
    attention_crop,
    frame_ref,
    load_manifest,
    load_samples,
    luma_of,
    luminance_spread,
    plan_samples,
    timestamp_ms_for,
)


def _manifest(frame_count: int, fps: float = 1.0) -> SegmentManifest:
    from pathlib import Path

    return SegmentManifest("seg", Path("."), fps, frame_count)


# ---------------------------------------------------------------------------
# plan_samples
# ---------------------------------------------------------------------------

def test_plan_one_per_second_covers_19s_video():
    refs = plan_samples(_manifest(19, fps=1.0), SamplingPlan(19))
    assert [r.frame_index for r in refs] == list(range(19))


def test_plan_single_sample_hits_midpoint():
    refs = plan_samples(_manifest(100), SamplingPlan(1))
    assert [r.frame_index for r in refs] == [50]


def test_plan_four_of_hundred():
    # round((i + 0.5) * 100 / 4) with halves rounded down: 12, 37, 62, 87
    refs = plan_samples(_manifest(100), SamplingPlan(4))
    assert [r.frame_index for r in refs] == [12, 37, 62, 87]


def test_plan_count_exceeding_frames_rejected():
    with pytest.raises(CountExceedsFrames):
        plan_samples(_manifest(5), SamplingPlan(6))


def test_plan_timestamps_follow_fps():
    refs = plan_samples(_manifest(30, fps=30.0), SamplingPlan(3))
    for ref in refs:
        assert ref.timestamp_ms == timestamp_ms_for(ref.frame_index, 30.0)
        assert abs(ref.timestamp_ms / 1000.0 - ref.frame_index / 30.0) < 1.0 / 30.0


@given(
    frame_count=st.integers(min_value=1, max_value=5000),
    count=st.integers(min_value=1, max_value=5000),
)
def test_plan_indices_strictly_increasing_in_range(frame_count: int, count: int):
    if count > frame_count:
        with pytest.raises(CountExceedsFrames):
            plan_samples(_manifest(frame_count), SamplingPlan(count))
        return
    indices = [r.frame_index for r in plan_samples(_manifest(frame_count), SamplingPlan(count))]
    assert len(indices) == count
    assert all(0 <= i < frame_count for i in indices)
    assert all(a < b for a, b in zip(indices, indices[1:]))


def test_plan_is_deterministic():
    a = plan_samples(_manifest(321, fps=7.0), SamplingPlan(13))
    b = plan_samples(_manifest(321, fps=7.0), SamplingPlan(13))
    assert a == b


# ---------------------------------------------------------------------------
# attention_crop
# ---------------------------------------------------------------------------

def test_crop_identity_fraction():
    assert attention_crop(1920, 1080, AttentionCrop(1.0)).as_list() == [0, 0, 1920, 1080]


def test_crop_centered_at_point_six():
    assert attention_crop(1920, 1080, AttentionCrop(0.6)).as_list() == [384, 216, 1536, 864]


def test_crop_tiny_image_rounds_half_up():
    # 0.5 * 3 = 1.5 rounds up to a 2x2 box anchored at round(0.5) = 1
    assert attention_crop(3, 3, AttentionCrop(0.5)).as_list() == [1, 1, 3, 3]


def test_crop_fraction_validated_at_construction():
    with pytest.raises(ValidationError):
        AttentionCrop(0.0)
    with pytest.raises(ValidationError):
        AttentionCrop(1.5)


@given(
    width=st.integers(min_value=1, max_value=4000),
    height=st.integers(min_value=1, max_value=4000),
    fraction=st.floats(min_value=0.01, max_value=1.0),
)
def test_crop_always_within_bounds_with_area(width: int, height: int, fraction: float):
    box = attention_crop(width, height, AttentionCrop(fraction))
    assert 0 <= box.x1 < box.x2 <= width
    assert 0 <= box.y1 < box.y2 <= height


@given(width=st.integers(min_value=1, max_value=4000), height=st.integers(min_value=1, max_value=4000))
def test_crop_identity_for_all_dimensions(width: int, height: int):
    assert attention_crop(width, height, AttentionCrop(1.0)).as_list() == [0, 0, width, height]


# ---------------------------------------------------------------------------
# load_samples / luminance
# ---------------------------------------------------------------------------

def test_black_frame_luma(tmp_path):
    manifest = load_manifest(write_segment(tmp_path, [flat_frame(0)]))
    [sample] = load_samples(manifest, [frame_ref(manifest, 0)])
    assert sample.mean_luma == 0.0
    assert sample.std_luma == 0.0


def test_white_frame_luma(tmp_path):
    manifest = load_manifest(write_segment(tmp_path, [flat_frame(255)]))
    [sample] = load_samples(manifest, [frame_ref(manifest, 0)])
    assert sample.mean_luma == pytest.approx(255.0, abs=1e-9)


def test_half_black_half_white_luma(tmp_path):
    arr = np.zeros((8, 8, 3), dtype=np.uint8)
    arr[:, 4:] = 255
    manifest = load_manifest(write_segment(tmp_path, [arr]))
    [sample] = load_samples(manifest, [frame_ref(manifest, 0)])
    assert sample.mean_luma == pytest.approx(127.5, abs=1e-9)
    assert sample.std_luma == pytest.approx(127.5, abs=1e-9)


def test_crop_then_luma_equals_luma_of_cropped_region(tmp_path):
    rng = np.random.default_rng(5)
    arr = rng.integers(0, 256, size=(20, 30, 3), dtype=np.uint8)
    manifest = load_manifest(write_segment(tmp_path, [arr]))
    crop = AttentionCrop(0.5)
    [sample] = load_samples(manifest, [frame_ref(manifest, 0)], crop)
    box = attention_crop(30, 20, crop)
    region = arr[int(box.y1) : int(box.y2), int(box.x1) : int(box.x2)]
    assert np.array_equal(sample.pixels, region)
    assert sample.mean_luma == pytest.approx(float(luma_of(region).mean()), abs=1e-12)


def test_load_is_deterministic_and_ordered(tmp_path):
    arrays = [flat_frame(v) for v in (0, 60, 120, 180, 240)]
    manifest = load_manifest(write_segment(tmp_path, arrays))
    refs = plan_samples(manifest, SamplingPlan(5))
    first = load_samples(manifest, refs)
    second = load_samples(manifest, refs, max_workers=1)
    assert [s.frame.frame_index for s in first] == [r.frame_index for r in refs]
    for a, b in zip(first, second):
        assert a.frame == b.frame
        assert np.array_equal(a.pixels, b.pixels)
        assert a.mean_luma == b.mean_luma


def test_missing_frame_raises(tmp_path):
    manifest = load_manifest(write_segment(tmp_path, [flat_frame(1), flat_frame(2)]))
    bad_ref = FrameRef("seg", 7, 7000)
    with pytest.raises(MissingFrame):
        load_samples(manifest, [bad_ref])


def test_undecodable_frame_raises(tmp_path):
    manifest_path = write_segment(tmp_path, [flat_frame(1)])
    (tmp_path / "frame_000001.png").write_bytes(b"this is not a png")
    manifest = load_manifest(manifest_path)
    with pytest.raises(DecodeError):
        load_samples(manifest, [frame_ref(manifest, 0)])


def test_manifest_count_mismatch_rejected(tmp_path):
    manifest_path = write_segment(tmp_path, [flat_frame(1), flat_frame(2)])
    (tmp_path / "frame_000002.png").unlink()
    with pytest.raises(ValidationError):
        load_manifest(manifest_path)


def test_thread_cap_env_var(monkeypatch):
    from wildvision.sampler import default_workers

    monkeypatch.setenv("WILDVISION_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("WILDVISION_THREADS", "not-a-number")
    assert default_workers() >= 1
    monkeypatch.delenv("WILDVISION_THREADS")
    assert default_workers() >= 1


def test_load_respects_thread_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("WILDVISION_THREADS", "1")
    arrays = [flat_frame(v) for v in (0, 100, 200)]
    manifest = load_manifest(write_segment(tmp_path, arrays))
    refs = plan_samples(manifest, SamplingPlan(3))
    samples = load_samples(manifest, refs)
    assert [s.mean_luma for s in samples] == [0.0, pytest.approx(100.0), pytest.approx(200.0)]


def test_luminance_spread():
    from wildvision.sampler import FrameSample

    def fake(mean: float) -> FrameSample:
        return FrameSample(
            frame=FrameRef("seg", 0, 0),
            pixels=np.zeros((1, 1, 3), dtype=np.uint8),
            mean_luma=mean,
        )

    assert luminance_spread([fake(100.0)]) == 0.0
    assert luminance_spread([fake(100.0), fake(120.0), fake(111.0)]) == 20.0
    assert luminance_spread([fake(42.0)] * 3) == 0.0
    with pytest.raises(EmptyBatch):
        luminance_spread([])
