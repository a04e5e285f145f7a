import { describe, expect, it } from "vitest";

import {
  FACTOR_ORDER,
  clampState,
  roundWeights,
  squareToWeights,
} from "../src/square.js";

// Deterministic linear congruential generator so the 1,000 random states
// are reproducible across runs.
function lcg(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    s = (s * 1664525 + 1013904223) >>> 0;
    return s / 2 ** 32;
  };
}

describe("squareToWeights", () => {
  it("maps each corner to a 100% pure factor", () => {
    expect(squareToWeights({ x: 0, y: 0 })).toEqual({
      duration: 100,
      slope: 0,
      amenity: 0,
      comfort: 0,
    });
    expect(squareToWeights({ x: 1, y: 0 })).toEqual({
      duration: 0,
      slope: 100,
      amenity: 0,
      comfort: 0,
    });
    expect(squareToWeights({ x: 0, y: 1 })).toEqual({
      duration: 0,
      slope: 0,
      amenity: 100,
      comfort: 0,
    });
    expect(squareToWeights({ x: 1, y: 1 })).toEqual({
      duration: 0,
      slope: 0,
      amenity: 0,
      comfort: 100,
    });
  });

  it("maps the center to an even 25/25/25/25 split", () => {
    expect(squareToWeights({ x: 0.5, y: 0.5 })).toEqual({
      duration: 25,
      slope: 25,
      amenity: 25,
      comfort: 25,
    });
  });

  it("sums to exactly 100 before rounding and stays nonnegative", () => {
    const rand = lcg(1);
    for (let i = 0; i < 1000; i++) {
      const w = squareToWeights({ x: rand(), y: rand() });
      const sum = w.slope + w.duration + w.amenity + w.comfort;
      expect(Math.abs(sum - 100)).toBeLessThan(1e-9);
      for (const factor of FACTOR_ORDER) {
        expect(w[factor]).toBeGreaterThanOrEqual(0);
      }
    }
  });

  it("rounds 1,000 random states to integers summing to exactly 100", () => {
    const rand = lcg(20240824);
    for (let i = 0; i < 1000; i++) {
      const rounded = roundWeights(squareToWeights({ x: rand(), y: rand() }));
      let sum = 0;
      for (const factor of FACTOR_ORDER) {
        expect(Number.isInteger(rounded[factor])).toBe(true);
        expect(rounded[factor]).toBeGreaterThanOrEqual(0);
        sum += rounded[factor];
      }
      expect(sum).toBe(100);
    }
  });

  it("clamps out-of-range states into the unit square", () => {
    expect(clampState({ x: -0.3, y: 1.7 })).toEqual({ x: 0, y: 1 });
    expect(squareToWeights({ x: 2, y: -1 })).toEqual({
      duration: 0,
      slope: 100,
      amenity: 0,
      comfort: 0,
    });
  });

  it("largest-remainder rounding favors the biggest fractional parts", () => {
    // 33.4 / 33.3 / 33.3 / 0 → the first entry absorbs the leftover unit.
    const rounded = roundWeights({ slope: 33.4, duration: 33.3, amenity: 33.3, comfort: 0 });
    expect(rounded).toEqual({ slope: 34, duration: 33, amenity: 33, comfort: 0 });
  });
});
