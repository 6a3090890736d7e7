"""Cross-frame, cross-detector label tally and consensus selection.

Detections are pooled over every (detector, frame) pair, counted per
label, ranked by frequency, and the labels whose count clears a minimum
agreement count (default 2, i.e. seen by more than a single detector
view) become the final selection. Labels seen only once are treated as
likely spurious.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import DetectionRecord, ValidationError
from .detectors import DEFAULT_TAU, DetectorBackend, threshold_filter
from .sampler import FrameSample, default_workers

DEFAULT_MIN_COUNT = 2


@dataclass(frozen=True)
class ConsensusConfig:
    """Threshold, minimum agreement count, and per-pair dedupe toggle.

    With ``dedupe_per_frame_detector`` on (the default), a label counts
    at most once per (detector, frame) pair no matter how many boxes one
    detector drew, so the tally measures agreement across views and
    models rather than box multiplicity.
    """

    tau: float = DEFAULT_TAU
    min_count: int = DEFAULT_MIN_COUNT
    dedupe_per_frame_detector: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.tau <= 1.0:
            raise ValidationError(f"tau must be in [0, 1]: {self.tau}")
        if self.min_count < 1:
            raise ValidationError(f"min_count must be >= 1: {self.min_count}")


def tally(records: list[DetectionRecord], cfg: ConsensusConfig = ConsensusConfig()) -> dict[str, int]:
    """Label -> agreement count over all records.

    Each record's detections are threshold-filtered at cfg.tau first;
    labels that never survive are absent from the result (no zero
    entries). Record order never matters.
    """
    counts: Counter[str] = Counter()
    for record in records:
        kept = threshold_filter(list(record.detections), cfg.tau)
        labels = [d.label for d in kept]
        if cfg.dedupe_per_frame_detector:
            labels = sorted(set(labels))
        counts.update(labels)
    return dict(counts)


def rank(counts: dict[str, int]) -> list[tuple[str, int]]:
    """Labels ordered by descending count, ties broken alphabetically."""
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def final_selection(counts: dict[str, int], cfg: ConsensusConfig = ConsensusConfig()) -> list[str]:
    """Labels whose count reaches cfg.min_count, in rank order."""
    return [label for label, n in rank(counts) if n >= cfg.min_count]


@dataclass(frozen=True)
class ConsensusResult:
    """Tally, ranking, and final selection of one pipeline run."""

    tally: dict[str, int]
    ranked: list[tuple[str, int]]
    selected: list[str]
    config: ConsensusConfig

    def to_json_dict(self) -> dict:
        return {
            "tally": dict(self.tally),
            "ranked": [[label, n] for label, n in self.ranked],
            "selected": list(self.selected),
            "config": {
                "tau": self.config.tau,
                "min_count": self.config.min_count,
                "dedupe_per_frame_detector": self.config.dedupe_per_frame_detector,
            },
        }


class BackendError(ValidationError):
    """A backend failed; message carries the (detector, frame) context."""


def run_pipeline(
    samples: list[FrameSample],
    backends: list[DetectorBackend],
    cfg: ConsensusConfig = ConsensusConfig(),
    max_workers: int | None = None,
) -> ConsensusResult:
    """Fan detect() over every (backend, sample) pair, then tally.

    The reduction is plain integer addition over labels, so neither the
    thread schedule nor the backend order can change the result.
    """
    if not samples:
        raise ValidationError("run_pipeline needs at least one sample")
    if not backends:
        raise ValidationError("run_pipeline needs at least one backend")
    pairs = [(backend, sample) for backend in backends for sample in samples]
    workers = max_workers or default_workers()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(lambda bs: _detect_one(*bs), pairs))
    counts = tally(records, cfg)
    return ConsensusResult(
        tally=counts,
        ranked=rank(counts),
        selected=final_selection(counts, cfg),
        config=cfg,
    )


def _detect_one(backend: DetectorBackend, sample: FrameSample) -> DetectionRecord:
    try:
        detections = backend.detect(sample)
        return DetectionRecord(
            frame=sample.frame,
            detector=backend.name,
            detections=tuple(detections),
        )
    except Exception as exc:
        raise BackendError(
            f"detector {backend.name!r} failed on frame "
            f"{sample.frame.segment_id}/{sample.frame.frame_index}: {exc}"
        ) from exc
