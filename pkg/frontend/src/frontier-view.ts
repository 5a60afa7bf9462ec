import { computeBounds, padBounds, toUnit, type Bounds } from "./scale.js";
import { ZONE_COLORS, type Zone } from "./zones.js";
import type { ConstrainedPoint, PenaltyPoint, SolvePoint } from "./types.js";

export const PLOT_WIDTH = 640;
export const PLOT_HEIGHT = 460;
export const MARGIN = 52;

export interface RectangleState {
  a: number;
  b: number;
  dx: number;
  dy: number;
  zone: Zone | null;
}

export interface FrontierViewModel {
  baselines: SolvePoint[];
  selectedW: number | null;
  penalty: PenaltyPoint | null;
  cloud: ConstrainedPoint[];
  rectangle: RectangleState | null;
}

export interface PlotGeometry {
  bounds: Bounds;
  toX(risk: number): number;
  toY(roi: number): number;
  rectHalfPx(rect: RectangleState, center: SolvePoint): { hw: number; hh: number };
}

const MIN_RECT_HALF_PX = 30;

export function geometry(model: FrontierViewModel): PlotGeometry | null {
  const groups: { roi: number; risk: number }[][] = [
    model.baselines,
    model.cloud,
    model.penalty ? [model.penalty] : [],
  ];
  const raw = computeBounds(groups);
  if (raw === null) return null;
  const bounds = padBounds(raw);
  const innerW = PLOT_WIDTH - 2 * MARGIN;
  const innerH = PLOT_HEIGHT - 2 * MARGIN;
  return {
    bounds,
    toX: (risk) => MARGIN + toUnit(risk, bounds.riskMin, bounds.riskMax) * innerW,
    toY: (roi) => PLOT_HEIGHT - MARGIN - toUnit(roi, bounds.roiMin, bounds.roiMax) * innerH,
    rectHalfPx(rect, center) {
      const riskSpan = bounds.riskMax - bounds.riskMin || 1;
      const roiSpan = bounds.roiMax - bounds.roiMin || 1;
      const hw = (Math.abs(center.risk) * rect.b) / riskSpan * innerW;
      const hh = (Math.abs(center.roi) * rect.a) / roiSpan * innerH;
      return {
        hw: Math.max(hw, MIN_RECT_HALF_PX),
        hh: Math.max(hh, MIN_RECT_HALF_PX),
      };
    },
  };
}

function axisTicks(toPx: (u: number) => number, vertical: boolean): string {
  const parts: string[] = [];
  for (let k = 0; k <= 5; k += 1) {
    const u = k / 5;
    const px = toPx(u);
    if (vertical) {
      parts.push(
        `<text x="${MARGIN - 8}" y="${px.toFixed(1)}" text-anchor="end" class="tick">${u.toFixed(1)}</text>`,
      );
    } else {
      parts.push(
        `<text x="${px.toFixed(1)}" y="${PLOT_HEIGHT - MARGIN + 16}" text-anchor="middle" class="tick">${u.toFixed(1)}</text>`,
      );
    }
  }
  return parts.join("");
}

function rectangleSvg(geo: PlotGeometry, rect: RectangleState, center: SolvePoint): string {
  const cx = geo.toX(center.risk);
  const cy = geo.toY(center.roi);
  const { hw, hh } = geo.rectHalfPx(rect, center);
  const zones: string[] = [];
  // quadrants: right = risk may degrade, down = profit may degrade
  const quads: { zone: Zone | null; x: number; y: number }[] = [
    { zone: "s1", x: cx, y: cy },
    { zone: "s2", x: cx, y: cy - hh },
    { zone: "s3", x: cx - hw, y: cy },
    { zone: null, x: cx - hw, y: cy - hh },
  ];
  for (const quad of quads) {
    const fill = quad.zone ? ZONE_COLORS[quad.zone] : "#888888";
    const active = rect.zone !== null && quad.zone === rect.zone;
    zones.push(
      `<rect class="zone" data-zone="${quad.zone ?? "blocked"}" x="${quad.x.toFixed(1)}" y="${quad.y.toFixed(1)}" width="${hw.toFixed(1)}" height="${hh.toFixed(1)}" fill="${fill}" fill-opacity="${active ? 0.35 : 0.12}"/>`,
    );
  }
  const markerX = cx + rect.dx * hw;
  const markerY = cy - rect.dy * hh;
  return [
    `<g id="tolerance-rect" data-cx="${cx.toFixed(1)}" data-cy="${cy.toFixed(1)}" data-hw="${hw.toFixed(1)}" data-hh="${hh.toFixed(1)}">`,
    ...zones,
    `<rect x="${(cx - hw).toFixed(1)}" y="${(cy - hh).toFixed(1)}" width="${(2 * hw).toFixed(1)}" height="${(2 * hh).toFixed(1)}" fill="none" stroke="#555" stroke-dasharray="4,3"/>`,
    `<circle id="tolerance-marker" cx="${markerX.toFixed(1)}" cy="${markerY.toFixed(1)}" r="6" fill="${rect.zone ? ZONE_COLORS[rect.zone] : "#888888"}" stroke="#222"/>`,
    `</g>`,
  ].join("");
}

export function renderFrontierSvg(model: FrontierViewModel): string {
  const geo = geometry(model);
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" id="frontier-plot" width="${PLOT_WIDTH}" height="${PLOT_HEIGHT}" viewBox="0 0 ${PLOT_WIDTH} ${PLOT_HEIGHT}">`,
    `<rect width="${PLOT_WIDTH}" height="${PLOT_HEIGHT}" fill="#fcfcfc"/>`,
    `<line x1="${MARGIN}" y1="${PLOT_HEIGHT - MARGIN}" x2="${PLOT_WIDTH - MARGIN}" y2="${PLOT_HEIGHT - MARGIN}" stroke="#333"/>`,
    `<line x1="${MARGIN}" y1="${MARGIN}" x2="${MARGIN}" y2="${PLOT_HEIGHT - MARGIN}" stroke="#333"/>`,
    `<text x="${PLOT_WIDTH / 2}" y="${PLOT_HEIGHT - 10}" text-anchor="middle" class="axis-label">Risk (normalized)</text>`,
    `<text x="14" y="${PLOT_HEIGHT / 2}" text-anchor="middle" class="axis-label" transform="rotate(-90 14 ${PLOT_HEIGHT / 2})">ROI (normalized)</text>`,
  ];
  const innerW = PLOT_WIDTH - 2 * MARGIN;
  const innerH = PLOT_HEIGHT - 2 * MARGIN;
  parts.push(axisTicks((u) => MARGIN + u * innerW, false));
  parts.push(axisTicks((u) => PLOT_HEIGHT - MARGIN - u * innerH, true));

  if (geo === null) {
    parts.push(
      `<text x="${PLOT_WIDTH / 2}" y="${PLOT_HEIGHT / 2}" text-anchor="middle" class="placeholder">solving baseline frontier...</text>`,
    );
    parts.push("</svg>");
    return parts.join("\n");
  }

  const selected = model.baselines.find((p) => p.w === model.selectedW) ?? null;
  if (model.rectangle && selected) {
    parts.push(rectangleSvg(geo, model.rectangle, selected));
  }

  const sorted = [...model.baselines].sort((p, q) => p.risk - q.risk);
  if (sorted.length > 1) {
    const path = sorted
      .map((p) => `${geo.toX(p.risk).toFixed(1)},${geo.toY(p.roi).toFixed(1)}`)
      .join(" ");
    parts.push(`<polyline points="${path}" fill="none" stroke="#16324f" stroke-width="1.5"/>`);
  }
  for (const point of model.cloud) {
    const color = point.feasible
      ? ZONE_COLORS[zoneOf(point) ?? "s1"]
      : "#d62728";
    const style = point.feasible
      ? `fill="${color}"`
      : `fill="none" stroke="#d62728" stroke-width="1.8"`;
    parts.push(
      `<circle class="cloud-point${point.feasible ? "" : " infeasible"}" cx="${geo.toX(point.risk).toFixed(1)}" cy="${geo.toY(point.roi).toFixed(1)}" r="5" ${style}/>`,
    );
  }
  for (const point of model.baselines) {
    const isSelected = point.w === model.selectedW;
    parts.push(
      `<circle class="baseline-point${isSelected ? " selected" : ""}" data-w="${point.w}" cx="${geo.toX(point.risk).toFixed(1)}" cy="${geo.toY(point.roi).toFixed(1)}" r="${isSelected ? 8 : 6}" fill="#16324f" ${isSelected ? 'stroke="#e6552c" stroke-width="2.5"' : ""}/>`,
    );
  }
  if (model.penalty) {
    const x = geo.toX(model.penalty.risk);
    const y = geo.toY(model.penalty.roi);
    parts.push(
      `<rect id="penalty-marker" x="${(x - 5).toFixed(1)}" y="${(y - 5).toFixed(1)}" width="10" height="10" transform="rotate(45 ${x.toFixed(1)} ${y.toFixed(1)})" fill="#6a3d9a"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

function zoneOf(point: ConstrainedPoint): Zone | null {
  if (point.dp > 0 && point.dr > 0) return "s1";
  if (point.dp < 0 && point.dr > 0) return "s2";
  if (point.dp > 0 && point.dr < 0) return "s3";
  return null;
}
