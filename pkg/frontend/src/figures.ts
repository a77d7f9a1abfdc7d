/**
 * Turn result rows into plain figure models (series of points), independent
 * of any rendering backend.  Error bars are drawn at +/- 3 standard errors.
 */

import type { ResultRow } from "./schema.js";

export const ERROR_BAR_SIGMAS = 3;

export type FigureKind = "ab_sweep" | "m_sweep" | "theorem1_overlay";

export interface Point {
  x: number;
  y: number;
  /** halfwidth of the error bar, when the source row carries a stderr */
  bar?: number;
}

export interface Series {
  label: string;
  points: Point[];
  /** lines connect points; markers draw the points themselves */
  line: boolean;
  markers: boolean;
}

export interface Figure {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

export class NoData extends Error {}

function usable(rows: ResultRow[]): ResultRow[] {
  const good = rows.filter((r) => r.error === null);
  if (good.length === 0) {
    throw new NoData("no data: every row is empty or carries an error");
  }
  return good;
}

function sortedUnique(values: number[]): number[] {
  return [...new Set(values)].sort((p, q) => p - q);
}

/** Row attaining the minimum rate within one (sweep point, method) group. */
function minRateRow(group: ResultRow[]): ResultRow {
  let best = group[0];
  for (const row of group) {
    if (row.rate !== null && (best.rate === null || row.rate < best.rate)) {
      best = row;
    }
  }
  return best;
}

function minRatePoint(group: ResultRow[], x: number): Point {
  const row = minRateRow(group);
  const point: Point = { x, y: row.min_rate ?? row.rate ?? NaN };
  if (row.stderr !== null) {
    point.bar = ERROR_BAR_SIGMAS * row.stderr;
  }
  return point;
}

export function minRateVsAntennas(rows: ResultRow[]): Figure {
  const good = usable(rows).filter((r) => r.min_rate !== null);
  if (good.length === 0) throw new NoData("no data: no rows with a min_rate");
  const methods = [...new Set(good.map((r) => r.method))];
  const series: Series[] = methods.map((method) => {
    const mine = good.filter((r) => r.method === method);
    const points = sortedUnique(mine.map((r) => r.M)).map((m) =>
      minRatePoint(mine.filter((r) => r.M === m), m),
    );
    return { label: method, points, line: true, markers: true };
  });
  return {
    title: "Minimum user rate vs base-station antennas",
    xLabel: "antennas M",
    yLabel: "min rate [bits/symbol]",
    series,
  };
}

export function minRateVsCrossGain(rows: ResultRow[]): Figure {
  const good = usable(rows).filter((r) => r.min_rate !== null);
  if (good.length === 0) throw new NoData("no data: no rows with a min_rate");
  const series: Series[] = [];
  for (const method of [...new Set(good.map((r) => r.method))]) {
    for (const b of sortedUnique(good.filter((r) => r.method === method).map((r) => r.b))) {
      const mine = good.filter((r) => r.method === method && r.b === b);
      const points = sortedUnique(mine.map((r) => r.a)).map((a) =>
        minRatePoint(mine.filter((r) => r.a === a), a),
      );
      series.push({ label: `${method} b=${b}`, points, line: true, markers: true });
    }
  }
  return {
    title: "Minimum user rate vs cross gain",
    xLabel: "partner-cell cross gain a",
    yLabel: "min rate [bits/symbol]",
    series,
  };
}

export function closedFormOverlay(rows: ResultRow[]): Figure {
  const good = usable(rows).filter(
    (r) => r.rate !== null && r.closed_form !== null && r.cell !== null,
  );
  if (good.length === 0) {
    throw new NoData("no data: overlay needs rows with rate and closed_form");
  }
  const series: Series[] = [];
  for (const cell of sortedUnique(good.map((r) => r.cell as number))) {
    const mine = good
      .filter((r) => r.cell === cell)
      .sort((p, q) => p.M - q.M);
    series.push({
      label: `cell ${cell} closed form`,
      points: mine.map((r) => ({ x: r.M, y: r.closed_form as number })),
      line: true,
      markers: false,
    });
    series.push({
      label: `cell ${cell} Monte Carlo (±${ERROR_BAR_SIGMAS} SE)`,
      points: mine.map((r) => {
        const point: Point = { x: r.M, y: r.rate as number };
        if (r.stderr !== null) point.bar = ERROR_BAR_SIGMAS * r.stderr;
        return point;
      }),
      line: false,
      markers: true,
    });
  }
  return {
    title: "Monte Carlo rate vs closed form",
    xLabel: "antennas M",
    yLabel: "rate [bits/symbol]",
    series,
  };
}

export function buildFigure(rows: ResultRow[], kind: FigureKind): Figure {
  switch (kind) {
    case "m_sweep":
      return minRateVsAntennas(rows);
    case "ab_sweep":
      return minRateVsCrossGain(rows);
    case "theorem1_overlay":
      return closedFormOverlay(rows);
  }
}
