/**
 * Deterministic SVG rendering: multi-series line figures with optional bound
 * overlays, and single-row multi-panel heatmaps. No DOM; d3-scale supplies
 * the axis math and d3-shape the path strings, assembled into SVG text.
 */

import { scaleLinear, scaleLog, type ScaleContinuousNumeric } from "d3-scale";
import { interpolateViridis } from "d3-scale-chromatic";
import { line as d3line } from "d3-shape";

import {
  checksumStrings,
  rawColumn,
  readCsv,
  toNumbers,
  type CsvTable,
  type RowFilter,
} from "./csv.js";
import { producibilityBound, type Recipe } from "./recipe.js";

export class PlotError extends Error {}

/** One array as plotted, with the checksum of the raw cells it came from. */
export interface PlottedSeries {
  name: string;
  sourceColumn: string;
  filter: RowFilter | null;
  n: number;
  checksum: string;
}

export interface Figure {
  svg: string;
  plotted: PlottedSeries[];
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const OVERLAY_COLOR = "#555555";

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : String(Number(value.toPrecision(6)));
}

interface Extent {
  lo: number;
  hi: number;
}

function extend(extent: Extent, values: number[]): Extent {
  let { lo, hi } = extent;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return { lo, hi };
}

function axisSvg(
  xScale: ScaleContinuousNumeric<number, number>,
  yScale: ScaleContinuousNumeric<number, number>,
  box: { x0: number; y0: number; x1: number; y1: number },
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [];
  parts.push(
    `<rect x="${box.x0}" y="${box.y0}" width="${box.x1 - box.x0}" ` +
      `height="${box.y1 - box.y0}" fill="none" stroke="#000"/>`,
  );
  for (const t of xScale.ticks(6)) {
    const px = xScale(t);
    parts.push(`<line x1="${fmt(px)}" y1="${box.y1}" x2="${fmt(px)}" y2="${box.y1 + 5}" stroke="#000"/>`);
    parts.push(
      `<text x="${fmt(px)}" y="${box.y1 + 18}" font-size="11" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of yScale.ticks(6)) {
    const py = yScale(t);
    parts.push(`<line x1="${box.x0 - 5}" y1="${fmt(py)}" x2="${box.x0}" y2="${fmt(py)}" stroke="#000"/>`);
    parts.push(
      `<text x="${box.x0 - 8}" y="${fmt(py + 4)}" font-size="11" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  const cx = (box.x0 + box.x1) / 2;
  const cy = (box.y0 + box.y1) / 2;
  parts.push(
    `<text x="${fmt(cx)}" y="${box.y1 + 36}" font-size="13" text-anchor="middle">${esc(xLabel)}</text>`,
  );
  parts.push(
    `<text x="${box.x0 - 42}" y="${fmt(cy)}" font-size="13" text-anchor="middle" ` +
      `transform="rotate(-90 ${box.x0 - 42} ${fmt(cy)})">${esc(yLabel)}</text>`,
  );
  return parts.join("\n");
}

function makeXScale(recipe: Recipe, domain: Extent, range: [number, number]) {
  if (recipe.logX) {
    return scaleLog().domain([domain.lo, domain.hi]).range(range);
  }
  return scaleLinear().domain([domain.lo, domain.hi]).nice().range(range);
}

export function buildLineFigure(recipe: Recipe, table: CsvTable): Figure {
  const plotted: PlottedSeries[] = [];

  const xRaw = rawColumn(table, recipe.x);
  const xAll = toNumbers(table.path, recipe.x, xRaw);
  plotted.push({
    name: "x",
    sourceColumn: recipe.x,
    filter: null,
    n: xAll.length,
    checksum: checksumStrings(xRaw),
  });

  const curves: { label: string; x: number[]; y: number[]; color: string; dash?: string }[] = [];
  let xExt: Extent = { lo: Infinity, hi: -Infinity };
  let yExt: Extent = { lo: Infinity, hi: -Infinity };

  recipe.series.forEach((spec, idx) => {
    const filter = spec.filter ?? null;
    const yRaw = rawColumn(table, spec.column, filter ?? undefined);
    if (yRaw.length === 0) {
      throw new PlotError(
        `${table.path}: series "${spec.label}" matched no rows` +
          (filter ? ` (filter ${filter.column}=${filter.value})` : ""),
      );
    }
    const y = toNumbers(table.path, spec.column, yRaw);
    const xSelRaw = filter ? rawColumn(table, recipe.x, filter) : xRaw;
    const x = filter ? toNumbers(table.path, recipe.x, xSelRaw) : xAll;
    plotted.push({
      name: spec.label,
      sourceColumn: spec.column,
      filter,
      n: y.length,
      checksum: checksumStrings(yRaw),
    });
    curves.push({ label: spec.label, x, y, color: PALETTE[idx % PALETTE.length] });
    xExt = extend(xExt, x);
    yExt = extend(yExt, y);
  });

  // overlays are re-derived from the x-axis site counts, never read from CSV
  const nValues = [...new Set(xAll)].sort((a, b) => a - b);
  for (const overlay of recipe.overlays) {
    let y: number[];
    let label: string;
    if (overlay.type === "producibility-bound") {
      y = nValues.map((n) => producibilityBound(overlay.n!, n));
      label = overlay.label ?? `${overlay.n}-producible bound`;
    } else if (overlay.type === "shot-noise") {
      y = nValues.map((n) => n);
      label = overlay.label ?? "shot noise F = N";
    } else {
      y = nValues.map((n) => 3 * n - 2);
      label = overlay.label ?? "ring maximum 3N - 2";
    }
    curves.push({ label, x: nValues, y, color: OVERLAY_COLOR, dash: "5,4" });
    yExt = extend(yExt, y);
  }

  const width = 640;
  const height = 440;
  const box = { x0: 64, y0: 34, x1: width - 16, y1: height - 56 };
  const xScale = makeXScale(recipe, xExt, [box.x0, box.x1]);
  const yScale = scaleLinear().domain([yExt.lo, yExt.hi]).nice().range([box.y1, box.y0]);

  const body: string[] = [];
  body.push(axisSvg(xScale, yScale, box, recipe.xLabel, recipe.yLabel));
  curves.forEach((curve) => {
    const gen = d3line<[number, number]>()
      .x((d) => xScale(d[0]))
      .y((d) => yScale(d[1]));
    const points = curve.x.map((xv, i) => [xv, curve.y[i]] as [number, number]);
    const d = gen(points);
    if (d === null) {
      throw new PlotError(`series "${curve.label}" produced an empty path`);
    }
    const dash = curve.dash ? ` stroke-dasharray="${curve.dash}"` : "";
    body.push(
      `<path d="${d}" fill="none" stroke="${curve.color}" stroke-width="1.6"${dash}/>`,
    );
  });

  curves.forEach((curve, idx) => {
    const lx = box.x0 + 12;
    const ly = box.y0 + 16 + 16 * idx;
    const dash = curve.dash ? ` stroke-dasharray="${curve.dash}"` : "";
    body.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${curve.color}" stroke-width="1.6"${dash}/>`);
    body.push(`<text x="${lx + 28}" y="${ly}" font-size="11">${esc(curve.label)}</text>`);
  });

  const svg = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="${width / 2}" y="20" font-size="14" text-anchor="middle">${esc(recipe.title)}</text>`,
    ...body,
    "</svg>",
  ].join("\n");
  return { svg, plotted };
}

export function buildHeatmapFigure(recipe: Recipe, table: CsvTable): Figure {
  const plotted: PlottedSeries[] = [];
  const xRaw = rawColumn(table, recipe.x);
  const yRaw = rawColumn(table, recipe.y!);
  const xNum = toNumbers(table.path, recipe.x, xRaw);
  const yNum = toNumbers(table.path, recipe.y!, yRaw);
  plotted.push({ name: "x", sourceColumn: recipe.x, filter: null, n: xNum.length,
                 checksum: checksumStrings(xRaw) });
  plotted.push({ name: "y", sourceColumn: recipe.y!, filter: null, n: yNum.length,
                 checksum: checksumStrings(yRaw) });

  const xLevels = [...new Set(xNum)].sort((a, b) => a - b);
  const yLevels = [...new Set(yNum)].sort((a, b) => a - b);

  const panelW = 250;
  const panelH = 300;
  const margin = { left: 72, right: 24, top: 48, bottom: 64, gap: 44 };
  const width = margin.left + recipe.panels.length * panelW
    + (recipe.panels.length - 1) * margin.gap + margin.right;
  const height = margin.top + panelH + margin.bottom;

  const body: string[] = [];
  recipe.panels.forEach((panel, p) => {
    const vRaw = rawColumn(table, panel.value);
    const values = toNumbers(table.path, panel.value, vRaw);
    plotted.push({ name: panel.label, sourceColumn: panel.value, filter: null,
                   n: values.length, checksum: checksumStrings(vRaw) });

    let vLo = Infinity;
    let vHi = -Infinity;
    for (const v of values) {
      if (v < vLo) vLo = v;
      if (v > vHi) vHi = v;
    }
    const norm = vHi > vLo ? (v: number) => (v - vLo) / (vHi - vLo) : () => 0.5;

    const x0 = margin.left + p * (panelW + margin.gap);
    const y0 = margin.top;
    const cw = panelW / xLevels.length;
    const ch = panelH / yLevels.length;
    for (let i = 0; i < values.length; i++) {
      const cx = xLevels.indexOf(xNum[i]);
      const cy = yLevels.indexOf(yNum[i]);
      const px = x0 + cx * cw;
      const py = y0 + panelH - (cy + 1) * ch;
      body.push(
        `<rect x="${fmt(px)}" y="${fmt(py)}" width="${fmt(cw + 0.5)}" ` +
          `height="${fmt(ch + 0.5)}" fill="${interpolateViridis(norm(values[i]))}"/>`,
      );
    }
    body.push(`<rect x="${x0}" y="${y0}" width="${panelW}" height="${panelH}" fill="none" stroke="#000"/>`);
    body.push(`<text x="${x0 + panelW / 2}" y="${y0 - 10}" font-size="12" text-anchor="middle">${esc(panel.label)} [${fmt(vLo)}, ${fmt(vHi)}]</text>`);

    const xTickStep = Math.max(1, Math.floor(xLevels.length / 5));
    for (let i = 0; i < xLevels.length; i += xTickStep) {
      const px = x0 + (i + 0.5) * cw;
      body.push(`<text x="${fmt(px)}" y="${y0 + panelH + 16}" font-size="10" text-anchor="middle">${fmt(xLevels[i])}</text>`);
    }
    body.push(`<text x="${x0 + panelW / 2}" y="${y0 + panelH + 38}" font-size="12" text-anchor="middle">${esc(recipe.xLabel)}</text>`);
    if (p === 0) {
      const yTickStep = Math.max(1, Math.floor(yLevels.length / 6));
      for (let i = 0; i < yLevels.length; i += yTickStep) {
        const py = y0 + panelH - (i + 0.5) * ch;
        body.push(`<text x="${x0 - 8}" y="${fmt(py + 3)}" font-size="10" text-anchor="end">${fmt(yLevels[i])}</text>`);
      }
      body.push(
        `<text x="${x0 - 48}" y="${y0 + panelH / 2}" font-size="12" text-anchor="middle" ` +
          `transform="rotate(-90 ${x0 - 48} ${y0 + panelH / 2})">${esc(recipe.yLabel)}</text>`,
      );
    }
  });

  const svg = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="${width / 2}" y="22" font-size="14" text-anchor="middle">${esc(recipe.title)}</text>`,
    ...body,
    "</svg>",
  ].join("\n");
  return { svg, plotted };
}

export function buildFigure(recipe: Recipe): Figure {
  const table = readCsv(recipe.input);
  return recipe.kind === "line"
    ? buildLineFigure(recipe, table)
    : buildHeatmapFigure(recipe, table);
}
