/**
 * Deterministic uniform [0, 1) values from string/number keys.
 *
 * Two independent 32-bit FNV-1a passes (forward and reverse) are
 * combined into 54 bits, giving stable, platform-independent values --
 * the stub's output must be byte-identical across runs and machines.
 */

const FNV_OFFSET = 0x811c9dc5;
const FNV_PRIME = 0x01000193;

function fnv1a(key: string, seed: number, reverse: boolean): number {
  let h = (FNV_OFFSET ^ seed) >>> 0;
  if (reverse) {
    for (let i = key.length - 1; i >= 0; i--) {
      h ^= key.charCodeAt(i);
      h = Math.imul(h, FNV_PRIME) >>> 0;
    }
  } else {
    for (let i = 0; i < key.length; i++) {
      h ^= key.charCodeAt(i);
      h = Math.imul(h, FNV_PRIME) >>> 0;
    }
  }
  return h >>> 0;
}

export function hash01(...parts: Array<string | number>): number {
  const key = parts.join("|");
  const hi = fnv1a(key, 0, false) >>> 5; // 27 bits
  const lo = fnv1a(key, 0x9e3779b9, true) >>> 5; // 27 bits
  return (hi * 0x8000000 + lo) / 0x40000000000000; // / 2^54
}
