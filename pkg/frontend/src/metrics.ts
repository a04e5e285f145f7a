// Metrics rendering: a single-route panel and the four-profile comparison
// table. Values are shown verbatim from plan responses; the only logic here
// is picking which cell to bold in each comparison row.

import type { RouteMetrics } from "./api.js";

export interface MetricRow {
  key: keyof RouteMetrics;
  label: string;
  best: "min" | "max";
  format: (v: number) => string;
}

export const METRIC_ROWS: MetricRow[] = [
  { key: "slope_score", label: "Incline", best: "min", format: (v) => v.toFixed(2) },
  { key: "duration_s", label: "Duration", best: "min", format: (v) => `${(v / 60).toFixed(1)} min` },
  { key: "amenities", label: "Amenities", best: "max", format: (v) => String(v) },
  {
    key: "comfortable_elements",
    label: "Comfortable elements",
    best: "max",
    format: (v) => String(v),
  },
];

export function renderMetricsPanel(container: HTMLElement, metrics: RouteMetrics): void {
  container.replaceChildren();
  const list = document.createElement("dl");
  list.className = "metrics-panel";
  for (const row of METRIC_ROWS) {
    const dt = document.createElement("dt");
    dt.textContent = row.label;
    const dd = document.createElement("dd");
    dd.dataset.metric = row.key;
    dd.textContent = row.format(metrics[row.key]);
    list.append(dt, dd);
  }
  container.append(list);
}

export interface ProfileColumn {
  name: string;
  color: string;
  metrics: RouteMetrics | null; // null when that profile's request failed
}

/** Indices of the cells to bold in one row: every column attaining the extreme. */
export function bestColumns(values: (number | null)[], best: "min" | "max"): number[] {
  const present = values.filter((v): v is number => v !== null);
  if (present.length === 0) return [];
  const target = best === "min" ? Math.min(...present) : Math.max(...present);
  return values.flatMap((v, i) => (v === target ? [i] : []));
}

export function renderComparisonTable(container: HTMLElement, columns: ProfileColumn[]): void {
  container.replaceChildren();
  const table = document.createElement("table");
  table.className = "comparison-table";

  const head = table.createTHead().insertRow();
  head.insertCell().textContent = "";
  for (const col of columns) {
    const cell = head.insertCell();
    cell.textContent = col.name;
    cell.style.color = col.color;
  }

  const body = table.createTBody();
  for (const row of METRIC_ROWS) {
    const tr = body.insertRow();
    tr.dataset.metric = row.key;
    tr.insertCell().textContent = row.label;
    const values = columns.map((c) => (c.metrics ? c.metrics[row.key] : null));
    const winners = new Set(bestColumns(values, row.best));
    columns.forEach((col, i) => {
      const cell = tr.insertCell();
      if (col.metrics === null) {
        cell.textContent = "—";
        return;
      }
      const value = row.format(col.metrics[row.key]);
      if (winners.has(i)) {
        const strong = document.createElement("strong");
        strong.textContent = value;
        cell.append(strong);
      } else {
        cell.textContent = value;
      }
    });
  }
  container.append(table);
}
