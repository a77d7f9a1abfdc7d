import { describe, expect, it } from "vitest";

import { buildFigure, NoData } from "../src/figures.js";
import { readResultsCsv, type ResultRow } from "../src/schema.js";

const fixture = (name: string) =>
  readResultsCsv(new URL(`./fixtures/${name}`, import.meta.url).pathname);

describe("m_sweep figure", () => {
  it("has one curve per method with one point per antenna count", () => {
    const figure = buildFigure(fixture("msweep.csv"), "m_sweep");
    expect(figure.series).toHaveLength(2);
    const labels = figure.series.map((s) => s.label).sort();
    expect(labels).toEqual(["GPS", "MCMMSE"]);
    for (const s of figure.series) {
      expect(s.points).toHaveLength(4);
      expect(s.points.map((p) => p.x)).toEqual([2, 4, 8, 16]);
      expect(s.line).toBe(true);
    }
  });

  it("uses the stderr of the worst user as the error bar", () => {
    const figure = buildFigure(fixture("msweep.csv"), "m_sweep");
    for (const s of figure.series) {
      for (const p of s.points) {
        expect(p.bar).toBeGreaterThan(0);
      }
    }
  });
});

describe("ab_sweep figure", () => {
  it("builds one series per (method, b) over the a grid", () => {
    const figure = buildFigure(fixture("absweep.csv"), "ab_sweep");
    expect(figure.series).toHaveLength(4); // 2 methods x 2 b values
    for (const s of figure.series) {
      expect(s.points.map((p) => p.x)).toEqual([0.2, 0.5, 0.8]);
    }
  });
});

describe("theorem1 overlay", () => {
  it("pairs a closed-form line with Monte Carlo points per cell", () => {
    const figure = buildFigure(fixture("theorem1.csv"), "theorem1_overlay");
    expect(figure.series).toHaveLength(4); // 2 cells x (line + points)
    const lines = figure.series.filter((s) => s.line && !s.markers);
    const points = figure.series.filter((s) => !s.line && s.markers);
    expect(lines).toHaveLength(2);
    expect(points).toHaveLength(2);
  });

  it("keeps Monte Carlo points inside their plotted error bars of the closed form", () => {
    const figure = buildFigure(fixture("theorem1.csv"), "theorem1_overlay");
    const lines = figure.series.filter((s) => s.line && !s.markers);
    const points = figure.series.filter((s) => !s.line && s.markers);
    for (let c = 0; c < lines.length; c++) {
      for (let i = 0; i < points[c].points.length; i++) {
        const mc = points[c].points[i];
        const reference = lines[c].points[i];
        expect(mc.x).toBe(reference.x);
        expect(mc.bar).toBeGreaterThan(0);
        expect(Math.abs(mc.y - reference.y)).toBeLessThanOrEqual(mc.bar as number);
      }
    }
  });
});

describe("degenerate inputs", () => {
  it("raises an explicit no-data error instead of a blank figure", () => {
    expect(() => buildFigure([], "m_sweep")).toThrow(NoData);
    const errorRow: ResultRow = {
      ...fixture("msweep.csv")[0],
      error: "boom",
    };
    expect(() => buildFigure([errorRow], "m_sweep")).toThrow(NoData);
  });
});
