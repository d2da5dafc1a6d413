/** Pure geometry for the series chart: value ranges, scales, and polyline
 * segmentation. Kept DOM-free so it is unit-testable; canvas drawing lives
 * in chart.ts. */

import type { SeriesResponse } from "./types.js";

export interface Range {
  min: number;
  max: number;
}

/** Min/max over z and all defined band values, padded so lines never sit on
 * the chart border. Falls back to [-1, 1] for empty input. */
export function valueRange(series: SeriesResponse, padFraction = 0.08): Range {
  const values: number[] = [...series.z];
  for (const arr of [series.sma, series.upper, series.lower]) {
    for (const v of arr) if (v !== null) values.push(v);
  }
  if (values.length === 0) return { min: -1, max: 1 };
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const pad = (max - min) * padFraction;
  return { min: min - pad, max: max + pad };
}

export interface Scale {
  /** index -> x pixel */
  x: (index: number) => number;
  /** value -> y pixel (inverted: larger values are higher on screen) */
  y: (value: number) => number;
}

export function makeScale(
  count: number,
  range: Range,
  width: number,
  height: number,
  margin: { left: number; right: number; top: number; bottom: number },
): Scale {
  const innerWidth = width - margin.left - margin.right;
  const innerHeight = height - margin.top - margin.bottom;
  const span = range.max - range.min;
  return {
    x: (index) =>
      margin.left + (count <= 1 ? innerWidth / 2 : (index / (count - 1)) * innerWidth),
    y: (value) => margin.top + (1 - (value - range.min) / span) * innerHeight,
  };
}

/** Splits a series with gaps (nulls) into contiguous [index, value] runs so
 * each run can be drawn as one polyline. */
export function polylineSegments(
  values: (number | null)[],
): [number, number][][] {
  const segments: [number, number][][] = [];
  let current: [number, number][] = [];
  values.forEach((value, index) => {
    if (value === null) {
      if (current.length > 0) segments.push(current);
      current = [];
    } else {
      current.push([index, value]);
    }
  });
  if (current.length > 0) segments.push(current);
  return segments;
}

export interface BreakoutMarker {
  index: number;
  z: number;
  direction: string;
  date: string;
}

export function breakoutMarkers(series: SeriesResponse): BreakoutMarker[] {
  const markers: BreakoutMarker[] = [];
  series.breakout_direction.forEach((direction, index) => {
    if (direction !== null) {
      markers.push({
        index,
        z: series.z[index],
        direction,
        date: series.dates[index],
      });
    }
  });
  return markers;
}

/** Roughly `target` evenly spaced tick indices, always including both ends. */
export function tickIndices(count: number, target = 8): number[] {
  if (count <= 0) return [];
  if (count <= target) return Array.from({ length: count }, (_, i) => i);
  const step = Math.ceil((count - 1) / (target - 1));
  const ticks: number[] = [];
  for (let i = 0; i < count - 1; i += step) ticks.push(i);
  ticks.push(count - 1);
  return ticks;
}
