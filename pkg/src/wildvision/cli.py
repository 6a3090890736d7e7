"""Command-line front end for sampling, classification, evaluation,
complexity reports, and wire-file validation.

Exit codes: 0 success, 2 validation/config error, 3 I/O error,
4 internal error. ``WILDVISION_THREADS`` caps internal parallelism.
"""

from __future__ import annotations

import csv
import datetime
import functools
import json
import sys
from pathlib import Path

import click
import numpy as np
from PIL import Image

from . import complexity as cx
from . import consensus as cs
from . import detectors as dt
from . import metrics as mt
from . import sampler as sp
from .core import ValidationError, normalize_label

EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _fail(code: int, message: object) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    """Map exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (sp.MissingFrame, sp.DecodeError) as exc:
            _fail(EXIT_IO, exc)
        except ValidationError as exc:
            _fail(EXIT_VALIDATION, exc)
        except json.JSONDecodeError as exc:
            _fail(EXIT_VALIDATION, f"malformed JSON: {exc}")
        except OSError as exc:
            _fail(EXIT_IO, exc)
        except Exception as exc:  # pragma: no cover - defensive
            _fail(EXIT_INTERNAL, f"internal error: {exc!r}")

    return wrapper


def _write_json(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group()
def main() -> None:
    """Video-informed image classification tools."""


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

@main.command("sample")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(), help="Segment manifest JSON.")
@click.option("--count", default=None, type=int, help="Frames to sample (default: one per second).")
@click.option("--crop-fraction", default=sp.DEFAULT_CROP_FRACTION, show_default=True, type=float)
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
@_guarded
def cmd_sample(manifest_path: str, count: int | None, crop_fraction: float, out_dir: str) -> None:
    """Sample, crop, and measure frames; write them plus a batch manifest."""
    manifest = sp.load_manifest(manifest_path)
    if count is None:
        count = min(manifest.frame_count, max(1, round(manifest.frame_count / manifest.fps)))
    crop = sp.AttentionCrop(crop_fraction)
    refs = sp.plan_samples(manifest, sp.SamplingPlan(count))
    samples = sp.load_samples(manifest, refs, crop)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for sample in samples:
        name = f"sample_{sample.frame.frame_index:06d}.png"
        Image.fromarray(sample.pixels).save(out / name)
        entries.append(
            {
                "frame_index": sample.frame.frame_index,
                "timestamp_ms": sample.frame.timestamp_ms,
                "file": name,
                "mean_luma": sample.mean_luma,
                "std_luma": sample.std_luma,
            }
        )
    batch = {
        "segment_id": manifest.segment_id,
        "fps": manifest.fps,
        "crop_fraction": crop_fraction,
        "luminance_spread": sp.luminance_spread(samples),
        "frames": entries,
    }
    (out / "batch.json").write_text(json.dumps(batch, indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote {len(samples)} frames to {out}")


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def _build_backends(specs: list[dict], refs: list, fps: float) -> list[dt.DetectorBackend]:
    backends: list[dt.DetectorBackend] = []
    for spec in specs:
        kind = spec.get("kind")
        if kind == "replay":
            store = dt.load_wire([p for p in spec["wire"]])
            backends.append(dt.ReplayBackend(str(spec["id"]), store))
        elif kind == "mock":
            truth_spec = spec.get("true_labels", {})
            truth: dict = {}
            for ref in refs:
                if isinstance(truth_spec, dict):
                    labels = truth_spec.get(str(ref.frame_index), [])
                else:
                    labels = truth_spec
                truth[ref] = frozenset(normalize_label(x) for x in labels)
            cfg = dt.MockDetectorConfig(
                seed=int(spec["seed"]),
                true_labels=truth,
                hit_rate=float(spec.get("hit_rate", 1.0)),
                fp_rate=float(spec.get("fp_rate", 0.0)),
                fp_vocabulary=tuple(normalize_label(x) for x in spec.get("vocabulary", [])),
                score_range=tuple(spec.get("score_range", (0.5, 1.0))),
            )
            backends.append(dt.MockBackend(str(spec["id"]), cfg))
        else:
            raise ValidationError(f"unknown backend kind: {kind!r}")
    return backends


@main.command("classify")
@click.option("--config", "config_path", required=True, type=click.Path(), help="Pipeline config JSON.")
@click.option("--manifest", "manifest_path", default=None, type=click.Path(), help="Override manifest path.")
@click.option("--count", default=None, type=int, help="Override sample count.")
@click.option("--crop-fraction", default=None, type=float, help="Override crop fraction.")
@click.option("--tau", default=None, type=float, help="Override confidence threshold.")
@click.option("--min-count", default=None, type=int, help="Override minimum agreement count.")
@click.option("--dedupe/--no-dedupe", "dedupe", default=None, help="Override per-(detector, frame) dedupe.")
@click.option("--out", default=None, type=click.Path(), help="Report path (default: config value or stdout).")
@click.option("--no-timestamp", is_flag=True, help="Omit generated_at for byte-identical reports.")
@_guarded
def cmd_classify(
    config_path: str,
    manifest_path: str | None,
    count: int | None,
    crop_fraction: float | None,
    tau: float | None,
    min_count: int | None,
    dedupe: bool | None,
    out: str | None,
    no_timestamp: bool,
) -> None:
    """Run the full pipeline: sample, detect with every backend, tally."""
    with open(config_path, encoding="utf-8") as fh:
        cfg_doc = json.load(fh)
    if not isinstance(cfg_doc, dict):
        raise ValidationError("pipeline config must be a JSON object")

    manifest_path = manifest_path or cfg_doc.get("manifest")
    if not manifest_path:
        raise ValidationError("config needs a 'manifest' path")
    manifest = sp.load_manifest(manifest_path)

    count = count if count is not None else cfg_doc.get("count")
    if count is None:
        count = min(manifest.frame_count, max(1, round(manifest.frame_count / manifest.fps)))
    crop_fraction = (
        crop_fraction if crop_fraction is not None
        else cfg_doc.get("crop_fraction", sp.DEFAULT_CROP_FRACTION)
    )
    consensus_cfg = cs.ConsensusConfig(
        tau=tau if tau is not None else cfg_doc.get("tau", dt.DEFAULT_TAU),
        min_count=min_count if min_count is not None else cfg_doc.get("min_count", cs.DEFAULT_MIN_COUNT),
        dedupe_per_frame_detector=(
            dedupe if dedupe is not None
            else cfg_doc.get("dedupe_per_frame_detector", True)
        ),
    )

    refs = sp.plan_samples(manifest, sp.SamplingPlan(int(count)))
    samples = sp.load_samples(manifest, refs, sp.AttentionCrop(float(crop_fraction)))
    backend_specs = cfg_doc.get("backends", [])
    if not backend_specs:
        raise ValidationError("config needs at least one backend")
    backends = _build_backends(backend_specs, refs, manifest.fps)

    result = cs.run_pipeline(samples, backends, consensus_cfg)
    report = result.to_json_dict()
    report["segment_id"] = manifest.segment_id
    report["n_frames"] = len(samples)
    report["frame_indices"] = [r.frame_index for r in refs]
    report["detectors"] = [b.name for b in backends]
    report["luminance_spread"] = sp.luminance_spread(samples)
    report["crop_fraction"] = float(crop_fraction)
    if not no_timestamp:
        report["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    _write_json(report, out or cfg_doc.get("out"))


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------

@main.command("evaluate")
@click.argument("pairs_file", type=click.Path())
@click.option("--out", default=None, type=click.Path(), help="JSON report path (default stdout).")
@click.option("--csv-out", default=None, type=click.Path(), help="Also write per-image metrics CSV.")
@_guarded
def cmd_evaluate(pairs_file: str, out: str | None, csv_out: str | None) -> None:
    """Score (actual, predicted) label-set pairs from a CSV/JSONL file."""
    records = mt.load_eval_records(pairs_file)
    report = mt.evaluation_report(records)
    if csv_out:
        with open(csv_out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["image_id", "recall", "precision", "fmeasure"])
            for row in report["per_image"]:
                writer.writerow([row["image_id"], row["recall"], row["precision"], row["fmeasure"]])
    _write_json(report, out)


# ---------------------------------------------------------------------------
# complexity
# ---------------------------------------------------------------------------

def _parse_size(text: str | None) -> tuple[int, int] | None:
    if text is None or text.lower() in ("native", "none"):
        return None
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise ValidationError(f"size must look like 300x300 (or 'native'): {text!r}") from exc


@main.command("complexity")
@click.argument("dataset_dirs", nargs=-1, required=True, type=click.Path())
@click.option("--size", default="300x300", show_default=True, help="Subsample size WxH, or 'native'.")
@click.option("--radius", default=cx.DEFAULT_LOCAL_RADIUS, show_default=True, type=int, help="Local-entropy disk radius.")
@click.option("--pca-k", default=cx.DEFAULT_PCA_COMPONENTS, show_default=True, type=int, help="PCA components.")
@click.option("--no-pca", is_flag=True, help="Skip the PCA report.")
@click.option("--out", default=None, type=click.Path(), help="JSON report path (default stdout).")
@click.option("--csv-out", default=None, type=click.Path(), help="Also write the report as CSV rows.")
@_guarded
def cmd_complexity(
    dataset_dirs: tuple[str, ...],
    size: str,
    radius: int,
    pca_k: int,
    no_pca: bool,
    out: str | None,
    csv_out: str | None,
) -> None:
    """Entropy and PCA complexity report for one dataset directory,
    or a side-by-side comparison with per-metric deltas for two."""
    if len(dataset_dirs) > 2:
        raise ValidationError("give one dataset directory, or two to compare")
    reports = [
        cx.analyze_dataset(
            d,
            image_size=_parse_size(size),
            radius_px=radius,
            pca_k=None if no_pca else pca_k,
        ).to_json_dict()
        for d in dataset_dirs
    ]
    if len(reports) == 1:
        doc = reports[0]
    else:
        first, second = reports
        delta = {
            key: first[key] - second[key]
            for key in first
            if key in second and isinstance(first[key], (int, float))
            and not isinstance(first[key], bool) and key != "n_images"
        }
        doc = {"datasets": reports, "delta": delta}
    if csv_out:
        _write_complexity_csv(reports, csv_out)
    _write_json(doc, out)


def _write_complexity_csv(reports: list[dict], csv_out: str) -> None:
    keys = [k for k in reports[0] if isinstance(reports[0][k], (int, float, str))]
    with open(csv_out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric"] + [r["dataset_name"] for r in reports])
        for key in keys:
            writer.writerow([key] + [r.get(key) for r in reports])


# ---------------------------------------------------------------------------
# validate-wire
# ---------------------------------------------------------------------------

@main.command("validate-wire")
@click.argument("wire_files", nargs=-1, required=True, type=click.Path())
@_guarded
def cmd_validate_wire(wire_files: tuple[str, ...]) -> None:
    """Validate detection wire files; nonzero exit on the first defect."""
    store = dt.load_wire(list(wire_files))
    click.echo(f"ok: {len(store)} records from {len(wire_files)} file(s)")


if __name__ == "__main__":
    main()
