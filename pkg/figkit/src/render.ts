/**
 * Recipe execution: build the figure, then write the SVG plus a checksum
 * sidecar (<output>.checksums.json) recording, for every plotted array, the
 * sha256 of the raw CSV cells it consumed. Nothing is written when building
 * fails, so a bad recipe or CSV never leaves a stale image behind.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { checksumFile } from "./csv.js";
import { buildFigure, type PlottedSeries } from "./plot.js";
import { loadRecipe, type Recipe } from "./recipe.js";

export interface RenderResult {
  recipe: Recipe;
  outputPath: string;
  checksumPath: string;
  plotted: PlottedSeries[];
}

export function render(recipePath: string): RenderResult {
  const recipe = loadRecipe(recipePath);
  const figure = buildFigure(recipe);

  mkdirSync(dirname(recipe.output), { recursive: true });
  writeFileSync(recipe.output, figure.svg, "utf-8");
  const checksumPath = recipe.output + ".checksums.json";
  const sidecar = {
    figure: recipe.figure,
    input: recipe.input,
    input_sha256: checksumFile(recipe.input),
    series: figure.plotted.map((s) => ({
      name: s.name,
      source_column: s.sourceColumn,
      filter: s.filter,
      n: s.n,
      sha256: s.checksum,
    })),
  };
  writeFileSync(checksumPath, JSON.stringify(sidecar, null, 2) + "\n", "utf-8");
  return { recipe, outputPath: recipe.output, checksumPath, plotted: figure.plotted };
}
