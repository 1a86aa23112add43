import { describe, expect, it } from "vitest";

import {
  clampSlider,
  normalizeL1,
  parseWeightsParam,
  weightsParam,
} from "../src/weights.js";

function weights(entries: [string, number][]): Map<string, number> {
  return new Map(entries);
}

describe("normalizeL1", () => {
  it("makes absolute values sum to one", () => {
    const out = normalizeL1(weights([["a", 0.5], ["b", -1.5]]));
    expect(out.get("a")).toBe(0.25);
    expect(out.get("b")).toBe(-0.75);
  });

  it("keeps an all-zero vector all-zero", () => {
    const out = normalizeL1(weights([["a", 0], ["b", 0]]));
    expect([...out.values()]).toEqual([0, 0]);
  });

  it("is invariant under positive scaling, bit for bit", () => {
    // seeded LCG so the sweep is reproducible
    let s = 12345;
    const rand = () => ((s = (s * 1103515245 + 12345) % 2147483648) / 2147483648) * 2 - 1;
    for (let i = 0; i < 500; i++) {
      const base = weights([["a", rand()], ["b", rand()], ["c", rand()]]);
      const doubled = new Map([...base].map(([k, v]) => [k, v * 2]));
      expect(weightsParam(normalizeL1(doubled))).toBe(weightsParam(normalizeL1(base)));
      let total = 0;
      for (const v of normalizeL1(base).values()) total += Math.abs(v);
      if ([...base.values()].some((v) => v !== 0)) {
        expect(total).toBeCloseTo(1, 12);
      }
    }
  });

  it("preserves signs", () => {
    const out = normalizeL1(weights([["up", 3], ["down", -1]]));
    expect(out.get("up")!).toBeGreaterThan(0);
    expect(out.get("down")!).toBeLessThan(0);
  });
});

describe("weightsParam", () => {
  it("round-trips through parse", () => {
    const original = weights([["citation_count", 0.62], ["h_index", -0.38]]);
    const back = parseWeightsParam(weightsParam(original));
    expect(back).not.toBeNull();
    expect([...back!]).toEqual([...original]);
  });

  it("rejects malformed tokens", () => {
    expect(parseWeightsParam("a:1,borked")).toBeNull();
    expect(parseWeightsParam(":1")).toBeNull();
    expect(parseWeightsParam("a:nope")).toBeNull();
  });

  it("treats the empty string as an empty map", () => {
    expect(parseWeightsParam("")!.size).toBe(0);
  });
});

describe("clampSlider", () => {
  it("clamps to [-1, 1] and maps NaN to 0", () => {
    expect(clampSlider(2)).toBe(1);
    expect(clampSlider(-7)).toBe(-1);
    expect(clampSlider(0.4)).toBe(0.4);
    expect(clampSlider(Number.NaN)).toBe(0);
  });
});
