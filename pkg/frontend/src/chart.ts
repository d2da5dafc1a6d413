/** Canvas rendering of the sentiment series: z-score line, SMA, band
 * envelope, and breakout markers. All numbers come straight from the API. */

import {
  breakoutMarkers,
  makeScale,
  polylineSegments,
  tickIndices,
  valueRange,
  type Scale,
} from "./chartMath.js";
import type { SeriesResponse } from "./types.js";

const MARGIN = { left: 48, right: 16, top: 16, bottom: 36 };

const COLORS = {
  z: "#1f77b4",
  sma: "#ff7f0e",
  band: "#9ecae1",
  bandFill: "rgba(158, 202, 225, 0.25)",
  breakout: "#d62728",
  axis: "#666",
  grid: "#e3e3e3",
};

function drawSegments(
  ctx: CanvasRenderingContext2D,
  values: (number | null)[],
  scale: Scale,
  color: string,
  lineWidth: number,
  dash: number[] = [],
): void {
  ctx.strokeStyle = color;
  ctx.lineWidth = lineWidth;
  ctx.setLineDash(dash);
  for (const segment of polylineSegments(values)) {
    ctx.beginPath();
    segment.forEach(([index, value], i) => {
      const x = scale.x(index);
      const y = scale.y(value);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function drawBandFill(
  ctx: CanvasRenderingContext2D,
  series: SeriesResponse,
  scale: Scale,
): void {
  ctx.fillStyle = COLORS.bandFill;
  const upperSegments = polylineSegments(series.upper);
  for (const upper of upperSegments) {
    ctx.beginPath();
    upper.forEach(([index, value], i) => {
      const x = scale.x(index);
      const y = scale.y(value);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    for (let i = upper.length - 1; i >= 0; i--) {
      const index = upper[i][0];
      const lower = series.lower[index];
      if (lower !== null) ctx.lineTo(scale.x(index), scale.y(lower));
    }
    ctx.closePath();
    ctx.fill();
  }
}

export function renderChart(
  canvas: HTMLCanvasElement,
  series: SeriesResponse,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  const count = series.dates.length;
  if (count === 0) {
    ctx.fillStyle = COLORS.axis;
    ctx.font = "14px sans-serif";
    ctx.fillText("no data in range", width / 2 - 50, height / 2);
    return;
  }

  const range = valueRange(series);
  const scale = makeScale(count, range, width, height, MARGIN);

  // horizontal grid + y labels
  ctx.font = "11px sans-serif";
  ctx.textAlign = "right";
  ctx.textBaseline = "middle";
  const ySteps = 6;
  for (let i = 0; i <= ySteps; i++) {
    const value = range.min + ((range.max - range.min) * i) / ySteps;
    const y = scale.y(value);
    ctx.strokeStyle = COLORS.grid;
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(MARGIN.left, y);
    ctx.lineTo(width - MARGIN.right, y);
    ctx.stroke();
    ctx.fillStyle = COLORS.axis;
    ctx.fillText(value.toFixed(2), MARGIN.left - 6, y);
  }

  // x tick labels (dates)
  ctx.textAlign = "center";
  ctx.textBaseline = "top";
  for (const index of tickIndices(count)) {
    ctx.fillStyle = COLORS.axis;
    ctx.fillText(series.dates[index], scale.x(index), height - MARGIN.bottom + 8);
  }

  drawBandFill(ctx, series, scale);
  drawSegments(ctx, series.upper, scale, COLORS.band, 1);
  drawSegments(ctx, series.lower, scale, COLORS.band, 1);
  drawSegments(ctx, series.sma, scale, COLORS.sma, 1.5, [6, 3]);
  drawSegments(ctx, series.z, scale, COLORS.z, 2);

  for (const marker of breakoutMarkers(series)) {
    const x = scale.x(marker.index);
    const y = scale.y(marker.z);
    ctx.fillStyle = COLORS.breakout;
    ctx.beginPath();
    ctx.arc(x, y, 5, 0, Math.PI * 2);
    ctx.fill();
  }
}

/** Maps a click x-position back to the nearest date index, for breakout
 * drill-down from the chart itself. */
export function indexAtPixel(
  canvas: HTMLCanvasElement,
  pixelX: number,
  count: number,
): number | null {
  if (count === 0) return null;
  const innerWidth = canvas.width - MARGIN.left - MARGIN.right;
  const t = (pixelX - MARGIN.left) / innerWidth;
  const index = Math.round(t * (count - 1));
  return index >= 0 && index < count ? index : null;
}
