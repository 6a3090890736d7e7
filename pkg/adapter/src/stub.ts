import { AdapterConfig } from "./config.js";
import { hash01 } from "./hash.js";
import { WireDetection } from "./wire.js";

// Nominal frame size used for synthesized stub boxes; box geometry is
// inert downstream (consensus is label-level) but must stay valid.
const NOMINAL_W = 640;
const NOMINAL_H = 480;

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}

/**
 * Deterministic detections for one frame, derived purely from
 * (seed, frame_index): a candidate count, then per-candidate label,
 * score, and box. Candidates below the model's score cutoff are
 * dropped, exactly as a real detector applies its own threshold.
 */
export function stubDetections(cfg: AdapterConfig, frameIndex: number): WireDetection[] {
  const out: WireDetection[] = [];
  const n = Math.floor(hash01(cfg.seed, "n", frameIndex) * (cfg.maxDetections + 1));
  for (let k = 0; k < n; k++) {
    const score = 0.25 + 0.75 * hash01(cfg.seed, "score", frameIndex, k);
    if (score < cfg.scoreThreshold) {
      continue;
    }
    const label = cfg.labels[Math.floor(hash01(cfg.seed, "label", frameIndex, k) * cfg.labels.length)];
    const x1 = round2(hash01(cfg.seed, "x", frameIndex, k) * (NOMINAL_W / 2));
    const y1 = round2(hash01(cfg.seed, "y", frameIndex, k) * (NOMINAL_H / 2));
    const w = round2(32 + hash01(cfg.seed, "w", frameIndex, k) * (NOMINAL_W / 4));
    const h = round2(24 + hash01(cfg.seed, "h", frameIndex, k) * (NOMINAL_H / 4));
    out.push({ label, score, box: [x1, y1, x1 + w, y1 + h] });
  }
  return out;
}
