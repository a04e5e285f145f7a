// The preference square: a draggable handle in the unit square whose
// position blends the four routing factors. Corners are pure factors,
// the center is an even 25/25/25/25 split.

export interface SquareState {
  x: number; // 0 = duration side, 1 = slope/comfort side
  y: number; // 0 = bottom (duration/slope), 1 = top (amenity/comfort)
}

export interface Weights {
  slope: number;
  duration: number;
  amenity: number;
  comfort: number;
}

export const FACTOR_ORDER = ["slope", "duration", "amenity", "comfort"] as const;
export type Factor = (typeof FACTOR_ORDER)[number];

export function clampState(s: SquareState): SquareState {
  return {
    x: Math.min(1, Math.max(0, s.x)),
    y: Math.min(1, Math.max(0, s.y)),
  };
}

/**
 * Bilinear corner blend: duration at (0,0), slope at (1,0),
 * amenity at (0,1), comfort at (1,1). The result is exact percentages
 * summing to 100 before any display rounding.
 */
export function squareToWeights(state: SquareState): Weights {
  const { x, y } = clampState(state);
  return {
    duration: (1 - x) * (1 - y) * 100,
    slope: x * (1 - y) * 100,
    amenity: (1 - x) * y * 100,
    comfort: x * y * 100,
  };
}

/**
 * Round percentages to integers that still sum to exactly 100, using
 * largest-remainder apportionment (ties broken by factor order).
 */
export function roundWeights(weights: Weights): Weights {
  const entries = FACTOR_ORDER.map((factor) => {
    const value = weights[factor];
    return { factor, floor: Math.floor(value), remainder: value - Math.floor(value) };
  });
  let leftover = 100 - entries.reduce((acc, e) => acc + e.floor, 0);
  const byRemainder = [...entries].sort((a, b) => b.remainder - a.remainder);
  for (const entry of byRemainder) {
    if (leftover <= 0) break;
    entry.floor += 1;
    leftover -= 1;
  }
  const out = {} as Weights;
  for (const entry of entries) {
    out[entry.factor] = entry.floor;
  }
  return out;
}
