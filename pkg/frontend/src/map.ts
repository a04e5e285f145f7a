// Minimal slippy map: a tile layer plus SVG overlays for markers and route
// polylines. Kept dependency-free so the whole client stays a static bundle.

import type { LatLon } from "./api.js";

const TILE_SIZE = 256;

export function lonToTileX(lon: number, zoom: number): number {
  return ((lon + 180) / 360) * 2 ** zoom;
}

export function latToTileY(lat: number, zoom: number): number {
  const phi = (lat * Math.PI) / 180;
  return ((1 - Math.asinh(Math.tan(phi)) / Math.PI) / 2) * 2 ** zoom;
}

export interface RouteLayer {
  id: string;
  color: string;
  coordinates: [number, number][]; // GeoJSON order: [lon, lat]
}

export class MapView {
  private readonly tilePane: HTMLDivElement;
  private readonly overlay: SVGSVGElement;
  private center: LatLon = { lat: 0, lon: 0 };
  private zoom = 16;
  private layers = new Map<string, RouteLayer>();
  private markers = new Map<string, LatLon>();

  constructor(
    private readonly container: HTMLElement,
    private readonly tileUrlTemplate: string,
  ) {
    container.classList.add("map-view");
    this.tilePane = document.createElement("div");
    this.tilePane.className = "tile-pane";
    this.overlay = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.overlay.classList.add("route-overlay");
    container.append(this.tilePane, this.overlay);
  }

  setView(center: LatLon, zoom: number): void {
    this.center = center;
    this.zoom = zoom;
    this.render();
  }

  setMarker(id: string, pos: LatLon): void {
    this.markers.set(id, pos);
    this.render();
  }

  /** Add or replace a named route; pass coordinates in GeoJSON [lon, lat] order. */
  setRoute(layer: RouteLayer): void {
    this.layers.set(layer.id, layer);
    this.render();
  }

  removeRoute(id: string): void {
    this.layers.delete(id);
    this.render();
  }

  clearRoutes(): void {
    this.layers.clear();
    this.render();
  }

  get routeIds(): string[] {
    return [...this.layers.keys()];
  }

  private pixel(lat: number, lon: number): [number, number] {
    const width = this.container.clientWidth || 640;
    const height = this.container.clientHeight || 480;
    const cx = lonToTileX(this.center.lon, this.zoom) * TILE_SIZE;
    const cy = latToTileY(this.center.lat, this.zoom) * TILE_SIZE;
    const px = lonToTileX(lon, this.zoom) * TILE_SIZE;
    const py = latToTileY(lat, this.zoom) * TILE_SIZE;
    return [width / 2 + (px - cx), height / 2 + (py - cy)];
  }

  private render(): void {
    this.renderTiles();
    this.renderOverlay();
  }

  private renderTiles(): void {
    this.tilePane.replaceChildren();
    const width = this.container.clientWidth || 640;
    const height = this.container.clientHeight || 480;
    const scale = 2 ** this.zoom;
    const cx = lonToTileX(this.center.lon, this.zoom);
    const cy = latToTileY(this.center.lat, this.zoom);
    const x0 = Math.floor(cx - width / 2 / TILE_SIZE);
    const x1 = Math.floor(cx + width / 2 / TILE_SIZE);
    const y0 = Math.max(0, Math.floor(cy - height / 2 / TILE_SIZE));
    const y1 = Math.min(scale - 1, Math.floor(cy + height / 2 / TILE_SIZE));
    for (let ty = y0; ty <= y1; ty++) {
      for (let tx = x0; tx <= x1; tx++) {
        const img = document.createElement("img");
        img.className = "map-tile";
        img.src = this.tileUrlTemplate
          .replace("{z}", String(this.zoom))
          .replace("{x}", String(((tx % scale) + scale) % scale))
          .replace("{y}", String(ty));
        img.style.left = `${width / 2 + (tx - cx) * TILE_SIZE}px`;
        img.style.top = `${height / 2 + (ty - cy) * TILE_SIZE}px`;
        this.tilePane.append(img);
      }
    }
  }

  private renderOverlay(): void {
    this.overlay.replaceChildren();
    for (const layer of this.layers.values()) {
      if (layer.coordinates.length < 2) continue;
      const poly = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
      poly.setAttribute("data-route", layer.id);
      poly.setAttribute("fill", "none");
      poly.setAttribute("stroke", layer.color);
      poly.setAttribute("stroke-width", "4");
      poly.setAttribute(
        "points",
        layer.coordinates
          .map(([lon, lat]) => this.pixel(lat, lon).map((v) => v.toFixed(1)).join(","))
          .join(" "),
      );
      this.overlay.append(poly);
    }
    for (const [id, pos] of this.markers) {
      const [x, y] = this.pixel(pos.lat, pos.lon);
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("data-marker", id);
      dot.setAttribute("cx", x.toFixed(1));
      dot.setAttribute("cy", y.toFixed(1));
      dot.setAttribute("r", "6");
      dot.setAttribute("class", `marker marker-${id}`);
      this.overlay.append(dot);
    }
  }
}
