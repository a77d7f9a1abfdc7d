import { writeFileSync } from "node:fs";

import { buildFigure, type FigureKind } from "./figures.js";
import { readResultsCsv } from "./schema.js";
import { renderSvg } from "./svg.js";

export interface PlotSpec {
  input: string;
  kind: FigureKind;
  output: string;
}

export function render(spec: PlotSpec): void {
  const rows = readResultsCsv(spec.input);
  const svg = renderSvg(buildFigure(rows, spec.kind));
  writeFileSync(spec.output, svg, "utf-8");
}
