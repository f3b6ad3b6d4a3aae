/**
 * Minimal dependency-free SVG line charts. Pure string generation so the
 * plotting math is unit-testable; the page injects the result as innerHTML.
 */

import type { ChartPoint } from "./model.js";

export interface ChartOptions {
  width: number;
  height: number;
  label: string;
}

const PAD = 36;

function scale(
  points: ChartPoint[],
  width: number,
  height: number,
): (p: ChartPoint) => [number, number] {
  const xs = points.map((p) => p.iteration);
  const ys = points.map((p) => p.value);
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const y0 = Math.min(...ys);
  const y1 = Math.max(...ys);
  const xSpan = x1 - x0 || 1;
  const ySpan = y1 - y0 || 1;
  return (p) => [
    PAD + ((p.iteration - x0) / xSpan) * (width - 2 * PAD),
    height - PAD - ((p.value - y0) / ySpan) * (height - 2 * PAD),
  ];
}

/** One point per iteration; rejected entries are hollow circles. */
export function renderLineChart(
  points: ChartPoint[],
  options: ChartOptions,
): string {
  const { width, height, label } = options;
  if (points.length === 0) {
    return `<svg width="${width}" height="${height}"><text x="${PAD}" y="${
      height / 2
    }" class="chart-empty">no iterations yet</text></svg>`;
  }
  const project = scale(points, width, height);
  const path = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${project(p).join(",")}`)
    .join(" ");
  const markers = points
    .map((p) => {
      const [x, y] = project(p);
      const fill = p.rejected ? "none" : "currentColor";
      return `<circle cx="${x}" cy="${y}" r="4" fill="${fill}" stroke="currentColor"><title>iteration ${p.iteration}: ${p.value}</title></circle>`;
    })
    .join("");
  return (
    `<svg width="${width}" height="${height}" role="img" aria-label="${label}">` +
    `<text x="${PAD}" y="16" class="chart-label">${label}</text>` +
    `<path d="${path}" fill="none" stroke="currentColor" stroke-width="1.5"/>` +
    markers +
    `</svg>`
  );
}
