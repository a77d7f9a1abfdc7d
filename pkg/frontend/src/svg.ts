/**
 * Static SVG rendering of figure models.
 *
 * Output is deterministic: fixed layout, fixed palette, no timestamps or
 * generated ids, and numbers formatted through one helper.
 */

import { scaleLinear } from "d3-scale";
import { line as d3line } from "d3-shape";

import type { Figure, Series } from "./figures.js";

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 64 };

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];
const DASHES = ["", "6 3", "2 2", "8 3 2 3"];

function fmt(x: number): string {
  return Number(x.toPrecision(6)).toString();
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function extent(figure: Figure, axis: "x" | "y"): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of figure.series) {
    for (const p of s.points) {
      const bar = axis === "y" ? (p.bar ?? 0) : 0;
      lo = Math.min(lo, p[axis] - bar);
      hi = Math.max(hi, p[axis] + bar);
    }
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function seriesStyle(index: number): { color: string; dash: string } {
  return {
    color: PALETTE[index % PALETTE.length],
    dash: DASHES[index % DASHES.length],
  };
}

export function renderSvg(figure: Figure): string {
  const x = scaleLinear().domain(extent(figure, "x")).range([MARGIN.left, WIDTH - MARGIN.right]).nice();
  const y = scaleLinear().domain(extent(figure, "y")).range([HEIGHT - MARGIN.bottom, MARGIN.top]).nice();
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(figure.title)}</text>`,
  );

  // grid and ticks
  for (const t of x.ticks(6)) {
    const px = fmt(x(t));
    parts.push(
      `<line class="grid" x1="${px}" x2="${px}" y1="${MARGIN.top}" y2="${HEIGHT - MARGIN.bottom}" stroke="#dddddd"/>`,
      `<text x="${px}" y="${HEIGHT - MARGIN.bottom + 18}" text-anchor="middle" font-size="12">${fmt(t)}</text>`,
    );
  }
  for (const t of y.ticks(6)) {
    const py = fmt(y(t));
    parts.push(
      `<line class="grid" x1="${MARGIN.left}" x2="${WIDTH - MARGIN.right}" y1="${py}" y2="${py}" stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="12">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}" height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="black"/>`,
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">${esc(figure.xLabel)}</text>`,
    `<text x="18" y="${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2})">${esc(figure.yLabel)}</text>`,
  );

  figure.series.forEach((s: Series, i: number) => {
    const { color, dash } = seriesStyle(i);
    for (const p of s.points) {
      if (p.bar !== undefined && p.bar > 0) {
        const px = fmt(x(p.x));
        const top = fmt(y(p.y + p.bar));
        const bottom = fmt(y(p.y - p.bar));
        parts.push(
          `<line class="errorbar" x1="${px}" x2="${px}" y1="${top}" y2="${bottom}" stroke="${color}"/>`,
          `<line class="errorbar-cap" x1="${fmt(x(p.x) - 4)}" x2="${fmt(x(p.x) + 4)}" y1="${top}" y2="${top}" stroke="${color}"/>`,
          `<line class="errorbar-cap" x1="${fmt(x(p.x) - 4)}" x2="${fmt(x(p.x) + 4)}" y1="${bottom}" y2="${bottom}" stroke="${color}"/>`,
        );
      }
    }
    if (s.line) {
      const path = d3line<{ x: number; y: number }>()
        .x((p) => Number(fmt(x(p.x))))
        .y((p) => Number(fmt(y(p.y))))(s.points);
      const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
      parts.push(
        `<path class="series-line" d="${path}" fill="none" stroke="${color}" stroke-width="1.8"${dashAttr}/>`,
      );
    }
    if (s.markers) {
      for (const p of s.points) {
        parts.push(
          `<circle class="marker" cx="${fmt(x(p.x))}" cy="${fmt(y(p.y))}" r="3.2" fill="${color}"/>`,
        );
      }
    }
  });

  // legend, top-left inside the frame
  figure.series.forEach((s: Series, i: number) => {
    const { color, dash } = seriesStyle(i);
    const ly = MARGIN.top + 16 + 18 * i;
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    if (s.line) {
      parts.push(
        `<line x1="${MARGIN.left + 10}" x2="${MARGIN.left + 38}" y1="${ly}" y2="${ly}" stroke="${color}" stroke-width="1.8"${dashAttr}/>`,
      );
    }
    if (s.markers) {
      parts.push(`<circle cx="${MARGIN.left + 24}" cy="${ly}" r="3.2" fill="${color}"/>`);
    }
    parts.push(
      `<text x="${MARGIN.left + 44}" y="${ly}" dominant-baseline="middle" font-size="12">${esc(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
