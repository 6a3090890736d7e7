/** Detection-record wire format (one JSON object per line, `.detjsonl`). */

export interface WireDetection {
  label: string;
  score: number;
  box: [number, number, number, number];
}

export interface WireRecord {
  schema_version: 1;
  segment_id: string;
  frame_index: number;
  timestamp_ms: number;
  detector: string;
  detections: WireDetection[];
}

/** Millisecond timestamp of a frame index: floor(i * 1000 / fps + 0.5).
 *  Part of the wire contract; the consumer derives frame identities with
 *  the same rule, so replay lookups only match if this is exact. */
export function timestampMs(frameIndex: number, fps: number): number {
  return Math.floor((frameIndex * 1000) / fps + 0.5);
}

export function encodeRecord(record: WireRecord): string {
  return JSON.stringify({
    schema_version: record.schema_version,
    segment_id: record.segment_id,
    frame_index: record.frame_index,
    timestamp_ms: record.timestamp_ms,
    detector: record.detector,
    detections: record.detections.map((d) => ({
      label: d.label,
      score: d.score,
      box: d.box,
    })),
  });
}
