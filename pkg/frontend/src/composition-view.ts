import { colorForLabel } from "./colors.js";
import { barTotal, type Bar } from "./composition.js";

const BAR_AREA_HEIGHT = 300;
const BAR_WIDTH = 64;
const GAP = 26;
const TOP = 34;

export function renderCompositionSvg(bars: Bar[], assetLabels: string[]): string {
  const width = Math.max(bars.length * (BAR_WIDTH + GAP) + GAP + 170, 420);
  const height = BAR_AREA_HEIGHT + TOP + 58;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" id="composition-plot" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#fcfcfc"/>`,
  ];
  bars.forEach((bar, index) => {
    const x = GAP + index * (BAR_WIDTH + GAP);
    const total = barTotal(bar) || 1;
    let y = TOP + BAR_AREA_HEIGHT;
    for (const segment of bar.segments) {
      const h = (segment.share / total) * BAR_AREA_HEIGHT;
      y -= h;
      parts.push(
        `<rect class="bar-segment" data-bar="${bar.key}" data-asset="${segment.asset}" x="${x}" y="${y.toFixed(1)}" width="${BAR_WIDTH}" height="${h.toFixed(1)}" fill="${colorForLabel(segment.asset)}"/>`,
      );
    }
    if (bar.outlined) {
      parts.push(
        `<rect class="bar-outline" x="${x - 3}" y="${TOP - 3}" width="${BAR_WIDTH + 6}" height="${BAR_AREA_HEIGHT + 6}" fill="none" stroke="#111" stroke-width="2.5" stroke-dasharray="6,3"/>`,
      );
    }
    parts.push(
      `<text x="${x + BAR_WIDTH / 2}" y="${TOP + BAR_AREA_HEIGHT + 18}" text-anchor="middle" class="bar-label">${bar.label}</text>`,
    );
    parts.push(
      `<text x="${x + BAR_WIDTH / 2}" y="${TOP + BAR_AREA_HEIGHT + 34}" text-anchor="middle" class="bar-hhi">HHI ${bar.hhi.toFixed(3)}</text>`,
    );
  });
  let legendY = TOP;
  const legendX = width - 160;
  for (const asset of assetLabels) {
    parts.push(
      `<rect x="${legendX}" y="${legendY - 9}" width="11" height="11" fill="${colorForLabel(asset)}"/>`,
    );
    parts.push(
      `<text x="${legendX + 16}" y="${legendY}" class="legend-label">${asset}</text>`,
    );
    legendY += 17;
  }
  parts.push("</svg>");
  return parts.join("\n");
}
