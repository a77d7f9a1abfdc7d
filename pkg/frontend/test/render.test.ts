import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { buildFigure } from "../src/figures.js";
import { render } from "../src/render.js";
import { readResultsCsv } from "../src/schema.js";
import { renderSvg } from "../src/svg.js";

const fixturePath = (name: string) => new URL(`./fixtures/${name}`, import.meta.url).pathname;

function countMatches(text: string, pattern: RegExp): number {
  return (text.match(pattern) ?? []).length;
}

describe("SVG rendering", () => {
  it("draws one line per method and one marker per point for the m sweep", () => {
    const rows = readResultsCsv(fixturePath("msweep.csv"));
    const svg = renderSvg(buildFigure(rows, "m_sweep"));
    expect(countMatches(svg, /class="series-line"/g)).toBe(2);
    // 2 methods x 4 antenna counts, plus 2 legend markers
    expect(countMatches(svg, /class="marker"/g)).toBe(8);
    expect(countMatches(svg, /class="errorbar"/g)).toBe(8);
    expect(svg).toContain("min rate");
  });

  it("overlays closed-form lines with error-barred points", () => {
    const rows = readResultsCsv(fixturePath("theorem1.csv"));
    const svg = renderSvg(buildFigure(rows, "theorem1_overlay"));
    expect(countMatches(svg, /class="series-line"/g)).toBe(2);
    expect(countMatches(svg, /class="errorbar"/g)).toBe(8);
  });

  it("is deterministic byte-for-byte across runs on the same CSV", () => {
    const dir = mkdtempSync(join(tmpdir(), "mcmimo-plots-"));
    const out1 = join(dir, "one.svg");
    const out2 = join(dir, "two.svg");
    render({ input: fixturePath("theorem1.csv"), kind: "theorem1_overlay", output: out1 });
    render({ input: fixturePath("theorem1.csv"), kind: "theorem1_overlay", output: out2 });
    expect(readFileSync(out1)).toEqual(readFileSync(out2));
  });

  it("leaves the input CSV untouched", () => {
    const dir = mkdtempSync(join(tmpdir(), "mcmimo-plots-"));
    const input = fixturePath("absweep.csv");
    const before = readFileSync(input);
    render({ input, kind: "ab_sweep", output: join(dir, "fig.svg") });
    expect(readFileSync(input)).toEqual(before);
  });
});
