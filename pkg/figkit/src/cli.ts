#!/usr/bin/env node
/** figkit render recipes/*.toml */

import { render } from "./render.js";

function main(argv: string[]): number {
  const [command, ...paths] = argv;
  if (command !== "render" || paths.length === 0) {
    console.error("usage: figkit render <recipe.toml> [more recipes...]");
    return 2;
  }
  let failures = 0;
  for (const path of paths) {
    try {
      const result = render(path);
      console.log(`${result.recipe.figure}: wrote ${result.outputPath}`);
    } catch (err) {
      failures += 1;
      console.error(`${path}: ${(err as Error).message}`);
    }
  }
  return failures === 0 ? 0 : 1;
}

process.exit(main(process.argv.slice(2)));
