// Deployment configuration: where the planning service lives and which
// slippy-tile server backs the map. Both are data, not code.

export interface UiConfig {
  apiBaseUrl: string;
  tileUrlTemplate: string;
}

export const DEFAULT_CONFIG: UiConfig = {
  apiBaseUrl: "http://localhost:8080",
  tileUrlTemplate: "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
};

/** Merge a partial override (e.g. a fetched config.json) over the defaults. */
export function resolveConfig(overrides: Partial<UiConfig> = {}): UiConfig {
  return { ...DEFAULT_CONFIG, ...overrides };
}
