#!/usr/bin/env node
import { runAdapter } from "./adapter.js";
import { ConfigError, ModelError, loadConfig } from "./config.js";

const USAGE = `usage: wildvision-adapter --config <adapter.json>

Runs a detector (or the deterministic stub) over a frame directory and
writes one detection record per frame as .detjsonl wire lines.

Config fields:
  detector        detector identity written to every record (e.g. "D2.A")
  weights         path to model weights, or "stub"
  score_threshold model score cutoff, default 0.5
  frame_dir       directory of ordered frame images
  segment_id      segment identity
  fps             frames per second of the extracted frames
  out             output .detjsonl path
  labels          label vocabulary (lowercase tokens)
  seed            stub randomness seed, default 0
  max_detections  stub per-frame detection cap, default 3

Exit codes: 0 ok, 2 config error, 3 model-load/I/O failure.`;

function main(argv: string[]): number {
  let configPath: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--help" || arg === "-h") {
      console.log(USAGE);
      return 0;
    }
    if (arg === "--config") {
      configPath = argv[++i];
    } else if (!arg.startsWith("-") && configPath === undefined) {
      configPath = arg;
    } else {
      console.error(`error: unknown argument ${arg}`);
      return 2;
    }
  }
  if (!configPath) {
    console.error("error: --config <adapter.json> is required");
    return 2;
  }
  try {
    const cfg = loadConfig(configPath);
    const result = runAdapter(cfg);
    console.log(`wrote ${result.frames} records to ${result.out}`);
    return 0;
  } catch (err) {
    if (err instanceof ConfigError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof ModelError) {
      console.error(`error: ${err.message}`);
      return 3;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 3;
    }
    console.error(`internal error: ${err}`);
    return 4;
  }
}

process.exit(main(process.argv.slice(2)));
