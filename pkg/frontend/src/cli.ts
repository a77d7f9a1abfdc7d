#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { NoData } from "./figures.js";
import { render } from "./render.js";
import { SchemaMismatch } from "./schema.js";

const KINDS = ["ab_sweep", "m_sweep", "theorem1_overlay"] as const;

const argv = yargs(hideBin(process.argv))
  .usage("Render an SVG figure from a simulator results CSV")
  .option("in", { type: "string", demandOption: true, describe: "input results CSV" })
  .option("kind", {
    choices: KINDS,
    demandOption: true,
    describe: "figure kind",
  })
  .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
  .strict()
  .parseSync();

try {
  render({ input: argv.in, kind: argv.kind, output: argv.out });
  console.log(`wrote ${argv.out}`);
} catch (err) {
  if (err instanceof SchemaMismatch || err instanceof NoData) {
    console.error(String(err.message));
    process.exit(1);
  }
  throw err;
}
