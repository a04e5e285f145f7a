// Thin client for the planning service. The UI never computes routes or
// metrics itself; everything displayed comes verbatim from these responses.

import type { Weights } from "./square.js";

export interface LatLon {
  lat: number;
  lon: number;
}

export interface RouteMetrics {
  duration_s: number;
  ascent_m: number;
  descent_m: number;
  slope_score: number;
  amenities: number;
  comfortable_elements: number;
}

export interface PlanResponse {
  geometry: { type: "LineString"; coordinates: [number, number][] };
  metrics: RouteMetrics | null;
  weights: { slope: number; duration: number; amenity: number; comfort: number };
  no_route: boolean;
}

export interface HealthResponse {
  status: string;
  graph_loaded: boolean;
  vertices: number;
  edges: number;
}

export class PlanError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class PlanClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async health(): Promise<HealthResponse> {
    const res = await this.fetchFn(`${this.baseUrl}/health`);
    if (!res.ok) {
      throw new PlanError(res.status, `health check failed (${res.status})`);
    }
    return (await res.json()) as HealthResponse;
  }

  async plan(
    from: LatLon,
    to: LatLon,
    weights: Weights,
    signal?: AbortSignal,
  ): Promise<PlanResponse> {
    const params = new URLSearchParams({
      fromLat: String(from.lat),
      fromLon: String(from.lon),
      toLat: String(to.lat),
      toLon: String(to.lon),
      slope: String(weights.slope),
      duration: String(weights.duration),
      amenity: String(weights.amenity),
      comfort: String(weights.comfort),
    });
    const res = await this.fetchFn(`${this.baseUrl}/plan?${params}`, { signal });
    const body = (await res.json()) as PlanResponse & { error?: string };
    if (res.status === 422 || body.no_route) {
      throw new PlanError(422, "no route between the selected points");
    }
    if (!res.ok) {
      throw new PlanError(res.status, body.error ?? `plan request failed (${res.status})`);
    }
    return body;
  }
}
