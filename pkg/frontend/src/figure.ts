import { AggregateTable, InputError } from "./csv.js";
import { FigureSpec, PanelSpec, SeriesName } from "./spec.js";

// Fixed style: palette order, stroke widths, band opacity. There is no
// randomness anywhere in the pipeline, so equal inputs give equal output.
export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
export const REF_COLOR = "#444444";
export const BAND_OPACITY = 0.25;

export interface Point {
  x: number;
  y: number;
}

export interface Tick {
  pos: number;
  label: string;
}

export interface SeriesGeometry {
  name: SeriesName;
  label: string;
  color: string;
  mean: Point[];
  /** Closed band outline (upper edge then reversed lower edge); undefined for derived series. */
  band?: Point[];
}

export interface PanelGeometry {
  title: string;
  plot: { x: number; y: number; width: number; height: number };
  xTicks: Tick[];
  yTicks: Tick[];
  ref: Point[];
  series: SeriesGeometry[];
  switchX?: number;
}

export interface FigureGeometry {
  width: number;
  height: number;
  title?: string;
  panels: PanelGeometry[];
}

export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (v: number) => number {
  const span = d1 - d0;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

/** Tick positions covering [lo, hi] at a 1-2-5 step, at most ~count ticks. */
export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function formatTick(v: number): string {
  return String(Number(v.toPrecision(6)));
}

/**
 * Series values for one plottable name. CSV channels come with their std;
 * the derived feedback element is ubar_mean - uf_mean and has no band,
 * because the per-seed covariance needed for its std is not in the CSV.
 */
export function seriesValues(
  table: AggregateTable,
  name: SeriesName,
): { mean: number[]; std?: number[] } {
  if (name === "fb") {
    const mean = table.mean.ubar.map((v, k) => v - table.mean.uf[k]);
    return { mean };
  }
  return { mean: table.mean[name], std: table.std[name] };
}

interface Layout {
  width: number;
  cols: number;
  rows: number;
  marginLeft: number;
  marginRight: number;
  marginTop: number;
  marginBottom: number;
  titleBand: number;
  panelTitle: number;
  gap: number;
  plotHeight: number;
}

function layoutFor(spec: FigureSpec): Layout {
  const n = spec.panels.length;
  const cols = n <= 2 ? n : 2;
  return {
    width: spec.width ?? 960,
    cols,
    rows: Math.ceil(n / cols),
    marginLeft: 14,
    marginRight: 14,
    marginTop: 10,
    marginBottom: 14,
    titleBand: spec.title ? 26 : 0,
    panelTitle: 22,
    gap: 20,
    plotHeight: 230,
  };
}

/** Per-panel inner offsets for axis labels. */
const AXIS_LEFT = 52;
const AXIS_BOTTOM = 30;

export function buildPanel(
  panel: PanelSpec,
  table: AggregateTable,
  plot: { x: number; y: number; width: number; height: number },
): PanelGeometry {
  const n = table.steps.length;
  const lastStep = table.steps[n - 1];

  const drawn = panel.channels.map((name) => seriesValues(table, name));
  let lo = Infinity;
  let hi = -Infinity;
  const consider = (v: number) => {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  };
  table.ref.forEach(consider);
  drawn.forEach(({ mean, std }) => {
    mean.forEach((m, k) => {
      consider(std ? m - std[k] : m);
      consider(std ? m + std[k] : m);
    });
  });
  if (!(hi > lo)) {
    lo -= 1;
    hi += 1;
  }
  const pad = (hi - lo) * 0.05;
  lo -= pad;
  hi += pad;

  const sx = linearScale(0, lastStep, plot.x, plot.x + plot.width);
  const sy = linearScale(lo, hi, plot.y + plot.height, plot.y);

  const toPoints = (values: number[]): Point[] =>
    values.map((v, k) => ({ x: sx(table.steps[k]), y: sy(v) }));

  const series: SeriesGeometry[] = panel.channels.map((name, i) => {
    const { mean, std } = drawn[i];
    let band: Point[] | undefined;
    if (std) {
      const upper = toPoints(mean.map((m, k) => m + std[k]));
      const lower = toPoints(mean.map((m, k) => m - std[k]));
      band = [...upper, ...lower.reverse()];
    }
    return {
      name,
      label: panel.labels?.[i] ?? name,
      color: PALETTE[i % PALETTE.length],
      mean: toPoints(mean),
      band,
    };
  });

  let switchX: number | undefined;
  if (panel.switchStep !== undefined) {
    if (panel.switchStep > lastStep) {
      throw new InputError(
        `${table.path}: switch_step ${panel.switchStep} is beyond the last step ${lastStep}`,
      );
    }
    switchX = sx(panel.switchStep);
  }

  return {
    title: panel.title ?? "",
    plot,
    xTicks: niceTicks(0, lastStep).map((v) => ({ pos: sx(v), label: formatTick(v) })),
    yTicks: niceTicks(lo, hi).map((v) => ({ pos: sy(v), label: formatTick(v) })),
    ref: toPoints(table.ref),
    series,
    switchX,
  };
}

export function buildFigure(
  spec: FigureSpec,
  tables: AggregateTable[],
): FigureGeometry {
  if (tables.length !== spec.panels.length) {
    throw new InputError(
      `figure needs ${spec.panels.length} tables, got ${tables.length}`,
    );
  }
  const L = layoutFor(spec);
  const cellWidth = (L.width - L.marginLeft - L.marginRight - (L.cols - 1) * L.gap) / L.cols;
  const cellHeight = L.panelTitle + L.plotHeight + AXIS_BOTTOM;
  const height =
    L.marginTop + L.titleBand + L.rows * cellHeight + (L.rows - 1) * L.gap + L.marginBottom;

  const panels = spec.panels.map((panel, i) => {
    const row = Math.floor(i / L.cols);
    const col = i % L.cols;
    const cellX = L.marginLeft + col * (cellWidth + L.gap);
    const cellY = L.marginTop + L.titleBand + row * (cellHeight + L.gap);
    const plot = {
      x: cellX + AXIS_LEFT,
      y: cellY + L.panelTitle,
      width: cellWidth - AXIS_LEFT,
      height: L.plotHeight,
    };
    return buildPanel(panel, tables[i], plot);
  });

  return { width: L.width, height, title: spec.title, panels };
}
