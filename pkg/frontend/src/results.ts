import type {
  AgreementMatrix,
  Criterion,
  DecisionPdf,
  RadarSummary,
  RankedItem,
  ResultsPayload,
} from "./types.js";

/**
 * View-model builders for the results page. Every number they expose is
 * copied verbatim from the results payload; the only arithmetic here is
 * presentation geometry (bar heights, radar polygon coordinates).
 */

export interface RankedRow {
  rank: number;
  itemId: string;
  title: string;
  expectedRank: number;
  density: number[];
}

export interface BarChart {
  itemId: string;
  label: string;
  /** x axis: rank positions 1..N. */
  ranks: number[];
  values: number[];
}

export interface CriterionSection {
  criterionId: string;
  label: string;
  expectedRank: number;
  chart: BarChart;
  /** Per-criterion detail starts collapsed. */
  collapsed: boolean;
}

export interface RadarChart {
  itemId: string;
  axes: string[];
  criterionIds: string[];
  values: number[];
  combined: number;
  /** Reversed radial scale: rank 1 (best) sits at the rim, rank N at the centre. */
  scale: { best: number; worst: number; reversed: true };
  note: string;
}

export interface HeatmapCell {
  value: number | null;
  display: string;
  aboveThreshold: boolean;
}

export interface Heatmap {
  kind: "map" | "eap";
  items: string[];
  rows: HeatmapCell[][];
}

export interface PdfPlot {
  pair: [string, string];
  alpha: number;
  beta: number;
  grid: number[];
  pdf: number[];
  mode: number;
}

export const AGREEMENT_THRESHOLD = 0.5;

const RADAR_NOTE =
  "Axes show expected rank per criterion; smaller (better) ranks plot farther from the centre.";

/**
 * Returns a human-readable schema problem, or null when the payload is
 * renderable. The page shows this diagnostic instead of partial charts.
 */
export function describePayloadProblem(payload: ResultsPayload): string | null {
  if (!Array.isArray(payload.ranking) || payload.ranking.length === 0) {
    return "results payload has no ranking entries";
  }
  const size = payload.ranking.length;
  for (const entry of payload.ranking) {
    if (typeof entry.expected_rank !== "number" || !Array.isArray(entry.density)) {
      return `ranking entry ${entry.item_id} is missing expected_rank or density`;
    }
    if (entry.density.length !== size) {
      return `density for ${entry.item_id} has length ${entry.density.length}, expected ${size}`;
    }
  }
  if (payload.mode === "MBCJ") {
    if (!payload.radar) {
      return "MBCJ payload is missing the radar section";
    }
    for (const entry of payload.ranking) {
      const radar = payload.radar[entry.item_id];
      if (!radar) {
        return `radar section is missing item ${entry.item_id}`;
      }
      for (const criterion of payload.criteria) {
        if (typeof radar.per_criterion[criterion.id] !== "number") {
          return `radar for ${entry.item_id} is missing criterion ${criterion.id}`;
        }
      }
    }
  }
  for (const [criterionId, matrix] of Object.entries(payload.agreement)) {
    if (!Array.isArray(matrix.items) || !Array.isArray(matrix.map) || !Array.isArray(matrix.eap)) {
      return `agreement matrix ${criterionId} is malformed`;
    }
  }
  return null;
}

/** Rows in payload order: the item ranked first appears first on the page. */
export function rankedRows(payload: ResultsPayload): RankedRow[] {
  return payload.ranking.map((entry) => ({
    rank: entry.rank,
    itemId: entry.item_id,
    title: entry.title,
    expectedRank: entry.expected_rank,
    density: entry.density,
  }));
}

export function densityChart(entry: RankedItem, label?: string): BarChart {
  return {
    itemId: entry.item_id,
    label: label ?? entry.title,
    ranks: entry.density.map((_, index) => index + 1),
    values: entry.density,
  };
}

export function criterionSections(entry: RankedItem, criteria: Criterion[]): CriterionSection[] {
  const densities = entry.criterion_densities ?? {};
  const expected = entry.criterion_expected_ranks ?? {};
  return criteria
    .filter((criterion) => densities[criterion.id] !== undefined)
    .map((criterion) => ({
      criterionId: criterion.id,
      label: criterion.label || criterion.id,
      expectedRank: expected[criterion.id] ?? Number.NaN,
      chart: {
        itemId: entry.item_id,
        label: criterion.label || criterion.id,
        ranks: (densities[criterion.id] ?? []).map((_, index) => index + 1),
        values: densities[criterion.id] ?? [],
      },
      collapsed: true,
    }));
}

export function radarChart(
  itemId: string,
  radar: RadarSummary,
  criteria: Criterion[],
  itemCount: number,
): RadarChart {
  return {
    itemId,
    axes: criteria.map((criterion) => criterion.label || criterion.id),
    criterionIds: criteria.map((criterion) => criterion.id),
    values: criteria.map((criterion) => radar.per_criterion[criterion.id] as number),
    combined: radar.combined,
    scale: { best: 1, worst: itemCount, reversed: true },
    note: RADAR_NOTE,
  };
}

/**
 * Polygon vertices for an SVG radar of the given radius. Presentation
 * geometry only: radius grows as the expected rank improves toward 1.
 */
export function radarPolygon(chart: RadarChart, radius: number): Array<[number, number]> {
  const { best, worst } = chart.scale;
  const span = worst - best;
  return chart.values.map((value, index) => {
    const fraction = span === 0 ? 1 : (worst - value) / span;
    const angle = (2 * Math.PI * index) / chart.values.length - Math.PI / 2;
    return [
      radius * fraction * Math.cos(angle),
      radius * fraction * Math.sin(angle),
    ];
  });
}

export function agreementHeatmap(matrix: AgreementMatrix, kind: "map" | "eap"): Heatmap {
  const grid = kind === "map" ? matrix.map : matrix.eap;
  return {
    kind,
    items: matrix.items,
    rows: grid.map((row) =>
      row.map((value) => ({
        value,
        display: value === null ? "" : `${Math.round(value * 100)}%`,
        aboveThreshold: value !== null && value >= AGREEMENT_THRESHOLD,
      })),
    ),
  };
}

export function pdfPlots(plots: DecisionPdf[]): PdfPlot[] {
  return plots.map((plot) => ({
    pair: plot.pair,
    alpha: plot.alpha,
    beta: plot.beta,
    grid: plot.grid,
    pdf: plot.pdf,
    mode: plot.mode,
  }));
}
