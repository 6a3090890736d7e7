import { readFileSync } from "node:fs";

/** Configuration of one adapter run, read from a JSON document. */
export interface AdapterConfig {
  /** Detector identity written into every record (e.g. "D2.A"). */
  detector: string;
  /** Path to model weights, or "stub" for the deterministic CI stub. */
  weights: string;
  /** The model's own score cutoff; detections below it are never emitted. */
  scoreThreshold: number;
  /** Directory of ordered frame images (.png/.jpg/.jpeg). */
  frameDir: string;
  segmentId: string;
  fps: number;
  /** Output wire-file path. */
  out: string;
  /** Label vocabulary the detector may emit. */
  labels: string[];
  /** Stub-mode seed. */
  seed: number;
  /** Stub-mode cap on detections per frame. */
  maxDetections: number;
}

export class ConfigError extends Error {}

export class ModelError extends Error {}

function requireString(doc: Record<string, unknown>, key: string): string {
  const value = doc[key];
  if (typeof value !== "string" || value.length === 0) {
    throw new ConfigError(`config field '${key}' must be a non-empty string`);
  }
  return value;
}

function normalizeLabel(raw: unknown): string {
  if (typeof raw !== "string") {
    throw new ConfigError(`labels must be strings, got ${JSON.stringify(raw)}`);
  }
  const label = raw.trim().toLowerCase();
  if (label.length === 0 || /\s/.test(label)) {
    throw new ConfigError(`invalid label ${JSON.stringify(raw)}: labels are non-empty tokens without whitespace`);
  }
  return label;
}

export function parseConfig(doc: unknown): AdapterConfig {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new ConfigError("adapter config must be a JSON object");
  }
  const obj = doc as Record<string, unknown>;
  const threshold = obj.score_threshold === undefined ? 0.5 : Number(obj.score_threshold);
  if (!(threshold >= 0 && threshold <= 1)) {
    throw new ConfigError(`score_threshold must be in [0, 1]: ${obj.score_threshold}`);
  }
  const fps = Number(obj.fps);
  if (!(fps > 0) || !Number.isFinite(fps)) {
    throw new ConfigError(`fps must be a positive number: ${obj.fps}`);
  }
  const rawLabels = obj.labels;
  if (!Array.isArray(rawLabels) || rawLabels.length === 0) {
    throw new ConfigError("config field 'labels' must be a non-empty array");
  }
  const seed = obj.seed === undefined ? 0 : Number(obj.seed);
  if (!Number.isInteger(seed)) {
    throw new ConfigError(`seed must be an integer: ${obj.seed}`);
  }
  const maxDetections = obj.max_detections === undefined ? 3 : Number(obj.max_detections);
  if (!Number.isInteger(maxDetections) || maxDetections < 0) {
    throw new ConfigError(`max_detections must be a non-negative integer: ${obj.max_detections}`);
  }
  return {
    detector: requireString(obj, "detector"),
    weights: requireString(obj, "weights"),
    scoreThreshold: threshold,
    frameDir: requireString(obj, "frame_dir"),
    segmentId: requireString(obj, "segment_id"),
    fps,
    out: requireString(obj, "out"),
    labels: rawLabels.map(normalizeLabel),
    seed,
    maxDetections,
  };
}

export function loadConfig(path: string): AdapterConfig {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new ConfigError(`cannot read config ${path}: ${(err as Error).message}`);
  }
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new ConfigError(`config ${path} is not valid JSON: ${(err as Error).message}`);
  }
  return parseConfig(doc);
}
