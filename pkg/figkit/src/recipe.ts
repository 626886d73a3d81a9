/**
 * Figure recipes: a TOML file fully determines one rendered figure from one
 * CSV input. Recipes never compute physics; overlays are limited to the
 * producibility-bound arithmetic and reference lines re-derived from the
 * x-axis site counts.
 */

import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { parse } from "smol-toml";

export class RecipeError extends Error {}

export interface SeriesSpec {
  column: string;
  label: string;
  filter?: { column: string; value: string };
}

export type OverlayType = "producibility-bound" | "shot-noise" | "ring-maximum";

export interface OverlaySpec {
  type: OverlayType;
  n?: number;
  label?: string;
}

export interface PanelSpec {
  value: string;
  label: string;
}

export interface Recipe {
  figure: string;
  kind: "line" | "heatmap";
  input: string;
  output: string;
  title: string;
  x: string;
  xLabel: string;
  yLabel: string;
  series: SeriesSpec[];
  overlays: OverlaySpec[];
  /** heatmap only */
  y?: string;
  panels: PanelSpec[];
  logX?: boolean;
}

function need<T>(table: Record<string, unknown>, key: string, file: string): T {
  const value = table[key];
  if (value === undefined) {
    throw new RecipeError(`${file}: missing required key "${key}"`);
  }
  return value as T;
}

export function loadRecipe(path: string): Recipe {
  let data: Record<string, unknown>;
  try {
    data = parse(readFileSync(path, "utf-8")) as Record<string, unknown>;
  } catch (err) {
    throw new RecipeError(`${path}: ${(err as Error).message}`);
  }
  const kind = need<string>(data, "kind", path);
  if (kind !== "line" && kind !== "heatmap") {
    throw new RecipeError(`${path}: kind must be "line" or "heatmap", got "${kind}"`);
  }
  const base = dirname(path);
  const recipe: Recipe = {
    figure: need<string>(data, "figure", path),
    kind,
    input: resolve(base, need<string>(data, "input", path)),
    output: resolve(base, need<string>(data, "output", path)),
    title: (data.title as string) ?? "",
    x: need<string>(data, "x", path),
    xLabel: (data.x_label as string) ?? (data.x as string),
    yLabel: (data.y_label as string) ?? "",
    series: ((data.series as Record<string, unknown>[]) ?? []).map((s) => ({
      column: need<string>(s, "column", path),
      label: (s.label as string) ?? (s.column as string),
      filter: s.filter as SeriesSpec["filter"],
    })),
    overlays: ((data.overlays as Record<string, unknown>[]) ?? []).map((o) => {
      const type = need<string>(o, "type", path) as OverlayType;
      if (!["producibility-bound", "shot-noise", "ring-maximum"].includes(type)) {
        throw new RecipeError(`${path}: unknown overlay type "${type}"`);
      }
      if (type === "producibility-bound" && typeof o.n !== "number") {
        throw new RecipeError(`${path}: producibility-bound overlay needs integer n`);
      }
      return { type, n: o.n as number | undefined, label: o.label as string | undefined };
    }),
    y: data.y as string | undefined,
    panels: ((data.panels as Record<string, unknown>[]) ?? []).map((p) => ({
      value: need<string>(p, "value", path),
      label: (p.label as string) ?? (p.value as string),
    })),
    logX: (data.log_x as boolean) ?? false,
  };
  if (recipe.kind === "line" && recipe.series.length === 0) {
    throw new RecipeError(`${path}: line recipes need at least one [[series]]`);
  }
  if (recipe.kind === "heatmap") {
    if (!recipe.y) {
      throw new RecipeError(`${path}: heatmap recipes need a y column`);
    }
    if (recipe.panels.length === 0) {
      throw new RecipeError(`${path}: heatmap recipes need at least one [[panels]]`);
    }
    if (recipe.overlays.length > 0) {
      throw new RecipeError(`${path}: overlays are only supported on line figures`);
    }
  }
  return recipe;
}

/** Producibility bound s n^2 + r^2 for block size n over N sites.
 *  For n > N the block covers the whole system (s = 0, r = N), so the curve
 *  degenerates to the Heisenberg value N^2. */
export function producibilityBound(n: number, nSites: number): number {
  if (!Number.isInteger(n) || n < 1) {
    throw new RecipeError(`bound block size n=${n} must be a positive integer`);
  }
  const s = Math.floor(nSites / n);
  const r = nSites - s * n;
  return s * n * n + r * r;
}
