"""wildvision: video-informed image classification.

Sample frames from a video segment, run an ensemble of imperfect object
detectors over them, tally the detected labels across frames and
detectors, and keep the labels the ensemble agrees on. Includes the
set-based evaluation metrics and the dataset complexity measures
(entropy, local entropy, PCA explained variance) used to characterize
field imagery.
"""

from .core import (
    BBox,
    Detection,
    DetectionRecord,
    FrameRef,
    InvalidBox,
    InvalidLabel,
    InvalidScore,
    UnknownSchema,
    ValidationError,
    WildVisionError,
    normalize_label,
    validate_record,
)
from .sampler import (
    AttentionCrop,
    FrameSample,
    SamplingPlan,
    SegmentManifest,
    attention_crop,
    load_manifest,
    load_samples,
    luminance_spread,
    plan_samples,
)
from .detectors import (
    DetectorBackend,
    MockBackend,
    MockDetectorConfig,
    ReplayBackend,
    ReplayStore,
    decode_record,
    encode_record,
    load_wire,
    mock_detect,
    replay_detect,
    threshold_filter,
)
from .consensus import (
    ConsensusConfig,
    ConsensusResult,
    final_selection,
    rank,
    run_pipeline,
    tally,
)
from .metrics import (
    AggregateResult,
    EvalRecord,
    EvalResult,
    aggregate,
    evaluate,
    load_eval_records,
)
from .complexity import (
    ComplexityReport,
    LocalEntropyStats,
    PcaVarianceReport,
    analyze_dataset,
    explained_variance_fractions,
    local_entropy,
    pca_explained_variance,
    shannon_entropy,
    subsample,
)

__version__ = "0.1.0"
