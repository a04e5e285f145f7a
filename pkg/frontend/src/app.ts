// Application wiring: route requests with latest-wins cancellation, the
// four-profile comparison overlay, and DOM bootstrap.

import { PlanClient, PlanError, type LatLon, type PlanResponse } from "./api.js";
import { resolveConfig, type UiConfig } from "./config.js";
import { MapView } from "./map.js";
import { renderComparisonTable, renderMetricsPanel, type ProfileColumn } from "./metrics.js";
import type { Weights } from "./square.js";
import { SquareWidget } from "./widget.js";

export interface ProfileSpec {
  name: string;
  color: string;
  weights: Weights;
}

// The four preset profiles, each strongly favouring one factor.
export const PROFILES: ProfileSpec[] = [
  { name: "Fastest", color: "#d62728", weights: { slope: 14, duration: 72, amenity: 12, comfort: 2 } },
  { name: "Flattest", color: "#1f77b4", weights: { slope: 74, duration: 8, amenity: 2, comfort: 16 } },
  { name: "Amenity-rich", color: "#2ca02c", weights: { slope: 4, duration: 15, amenity: 66, comfort: 15 } },
  { name: "Most comfortable", color: "#9467bd", weights: { slope: 8, duration: 3, amenity: 22, comfort: 67 } },
];

export interface AppElements {
  map: HTMLElement;
  square: HTMLElement;
  metrics: HTMLElement;
  comparison: HTMLElement;
  error: HTMLElement;
}

export class App {
  readonly mapView: MapView;
  readonly squareWidget: SquareWidget;
  private from: LatLon | null = null;
  private to: LatLon | null = null;
  private inflight: AbortController | null = null;

  constructor(
    private readonly elements: AppElements,
    private readonly client: PlanClient,
    config: UiConfig = resolveConfig(),
  ) {
    this.mapView = new MapView(elements.map, config.tileUrlTemplate);
    this.squareWidget = new SquareWidget(elements.square, () => {
      // Weight change with endpoints already set re-queries automatically.
      void this.requestPlan();
    });
  }

  setEndpoints(from: LatLon, to: LatLon): void {
    this.from = from;
    this.to = to;
    this.mapView.setMarker("from", from);
    this.mapView.setMarker("to", to);
    this.mapView.setView(
      { lat: (from.lat + to.lat) / 2, lon: (from.lon + to.lon) / 2 },
      15,
    );
  }

  /**
   * Fetch and draw the route for the current square weights. A newer call
   * aborts any in-flight one; errors are surfaced inline and the previously
   * drawn route is left on the map.
   */
  async requestPlan(): Promise<PlanResponse | null> {
    if (!this.from || !this.to) return null;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const plan = await this.client.plan(
        this.from,
        this.to,
        this.squareWidget.getWeights(),
        controller.signal,
      );
      if (controller.signal.aborted) return null;
      this.elements.error.textContent = "";
      this.mapView.setRoute({ id: "current", color: "#ff6600", coordinates: plan.geometry.coordinates });
      if (plan.metrics) renderMetricsPanel(this.elements.metrics, plan.metrics);
      return plan;
    } catch (err) {
      if (controller.signal.aborted) return null;
      this.elements.error.textContent =
        err instanceof PlanError ? err.message : "planning service unreachable";
      return null;
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  /**
   * Issue the four preset-profile requests for the current endpoints and
   * overlay the resulting routes with a side-by-side metrics table.
   * Profiles whose request fails are skipped; the rest still render.
   */
  async compareProfiles(): Promise<ProfileColumn[]> {
    if (!this.from || !this.to) return [];
    const from = this.from;
    const to = this.to;
    const results = await Promise.all(
      PROFILES.map(async (profile): Promise<ProfileColumn> => {
        try {
          const plan = await this.client.plan(from, to, profile.weights);
          this.mapView.setRoute({
            id: `profile-${profile.name}`,
            color: profile.color,
            coordinates: plan.geometry.coordinates,
          });
          return { name: profile.name, color: profile.color, metrics: plan.metrics };
        } catch {
          return { name: profile.name, color: profile.color, metrics: null };
        }
      }),
    );
    renderComparisonTable(this.elements.comparison, results);
    return results;
  }
}

export function bootstrap(root: Document, baseConfig: Partial<UiConfig> = {}): App {
  const config = resolveConfig(baseConfig);
  const byId = (id: string): HTMLElement => {
    const el = root.getElementById(id);
    if (!el) throw new Error(`missing #${id} element`);
    return el;
  };
  const elements: AppElements = {
    map: byId("map"),
    square: byId("square"),
    metrics: byId("metrics"),
    comparison: byId("comparison"),
    error: byId("error"),
  };
  const app = new App(elements, new PlanClient(config.apiBaseUrl), config);
  root.getElementById("compare")?.addEventListener("click", () => {
    void app.compareProfiles();
  });
  return app;
}
