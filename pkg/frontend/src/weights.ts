/** Slider-weight bookkeeping.
 *
 * The only arithmetic the client performs is L1 normalization of its own
 * slider positions (the displayed weights must satisfy sum(|w|) = 1).
 * Every analytical number on screen comes from a server response.
 */

export type Weights = ReadonlyMap<string, number>;

/** Scale so absolute values sum to 1; an all-zero vector stays all-zero. */
export function normalizeL1(weights: Weights): Map<string, number> {
  let total = 0;
  for (const value of weights.values()) total += Math.abs(value);
  const out = new Map<string, number>();
  for (const [name, value] of weights) {
    out.set(name, total === 0 ? value : value / total);
  }
  return out;
}

/** Serialize as the service's `name:value,name:value` weights parameter. */
export function weightsParam(weights: Weights): string {
  const parts: string[] = [];
  for (const [name, value] of weights) parts.push(`${name}:${String(value)}`);
  return parts.join(",");
}

/** Parse the `name:value` list form; returns null on any malformed token. */
export function parseWeightsParam(text: string): Map<string, number> | null {
  const out = new Map<string, number>();
  if (text === "") return out;
  for (const token of text.split(",")) {
    const sep = token.indexOf(":");
    if (sep <= 0) return null;
    const name = token.slice(0, sep).trim();
    const value = Number(token.slice(sep + 1));
    if (name === "" || !Number.isFinite(value)) return null;
    out.set(name, value);
  }
  return out;
}

export function clampSlider(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.max(-1, Math.min(1, value));
}
