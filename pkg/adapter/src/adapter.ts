import { existsSync, readdirSync, writeFileSync } from "node:fs";

import { AdapterConfig, ConfigError, ModelError } from "./config.js";
import { stubDetections } from "./stub.js";
import { WireDetection, encodeRecord, timestampMs } from "./wire.js";

const FRAME_EXTENSIONS = [".png", ".jpg", ".jpeg"];

export function listFrames(frameDir: string): string[] {
  let entries: string[];
  try {
    entries = readdirSync(frameDir);
  } catch (err) {
    throw new ConfigError(`cannot read frame directory ${frameDir}: ${(err as Error).message}`);
  }
  const frames = entries
    .filter((name) => FRAME_EXTENSIONS.some((ext) => name.toLowerCase().endsWith(ext)))
    .sort();
  if (frames.length === 0) {
    throw new ConfigError(`no frame images found in ${frameDir}`);
  }
  return frames;
}

/**
 * Emit one detection record per frame of the input directory, ordered
 * by frame index, and write them as wire lines to cfg.out.
 *
 * Frames with nothing above the model's score cutoff still produce a
 * record with an empty detections array: "saw the frame, found
 * nothing" must be distinguishable from "never ran" only by the
 * record's presence. No consensus logic happens here; the wire file is
 * the complete, auditable model output.
 */
export function runAdapter(cfg: AdapterConfig): { frames: number; out: string } {
  if (cfg.weights !== "stub") {
    // Real model execution needs an inference runtime that is not part
    // of this adapter; fail loudly rather than emit fabricated output.
    if (!existsSync(cfg.weights)) {
      throw new ModelError(`weights not found: ${cfg.weights}`);
    }
    throw new ModelError(
      `no inference runtime available to load ${cfg.weights}; use weights="stub"`,
    );
  }
  const frames = listFrames(cfg.frameDir);
  const lines: string[] = [];
  frames.forEach((_name, index) => {
    const detections: WireDetection[] = stubDetections(cfg, index);
    lines.push(
      encodeRecord({
        schema_version: 1,
        segment_id: cfg.segmentId,
        frame_index: index,
        timestamp_ms: timestampMs(index, cfg.fps),
        detector: cfg.detector,
        detections,
      }),
    );
  });
  writeFileSync(cfg.out, lines.join("\n") + "\n", "utf-8");
  return { frames: frames.length, out: cfg.out };
}
